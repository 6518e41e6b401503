"""
Exponent Rule
Exponent n(w*) or p(w) of the level equation
"""

import logging

import numpy as np

from common.errors import InvalidExponent

logger = logging.getLogger(__name__)


class ExponentRule:
    """
    Constant or tabulated exponent

    Tabulated rules interpolate piecewise-linearly in the level and are
    clamped to the end values outside the table.
    """

    def __init__(self, levels, exponents):
        levels = np.atleast_1d(np.asarray(levels, dtype=float))
        exponents = np.atleast_1d(np.asarray(exponents, dtype=float))

        if levels.shape != exponents.shape or levels.ndim != 1 or len(levels) == 0:
            raise InvalidExponent("exponent table needs matching level and exponent columns")
        if not np.all(np.isfinite(exponents)) or np.any(exponents <= 0):
            raise InvalidExponent(f"exponents must be positive, got {exponents.tolist()}")
        if len(levels) > 1 and np.any(np.diff(levels) <= 0):
            raise InvalidExponent("exponent table levels must be strictly increasing")

        self.levels = levels
        self.exponents = exponents
        self.is_constant = len(levels) == 1 or bool(np.all(exponents == exponents[0]))
        self._slopes = np.diff(exponents) / np.diff(levels) if len(levels) > 1 else np.zeros(0)

    @classmethod
    def constant(cls, value):
        """Constant exponent rule"""
        return cls([0.0], [value])

    @classmethod
    def tabulated(cls, samples):
        """
        Tabulated exponent rule

        Args:
            samples: Sequence of (level, exponent) pairs
        """
        data = np.asarray(samples, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise InvalidExponent("exponent table must be a sequence of (level, exponent) pairs")

        rule = cls(data[:, 0], data[:, 1])
        logger.info(f"Tabulated exponent rule initialized ({len(data)} entries, "
                    f"range {rule.minimum:g}..{rule.maximum:g})")
        return rule

    @property
    def minimum(self):
        return float(self.exponents.min())

    @property
    def maximum(self):
        return float(self.exponents.max())

    def value(self, level):
        """Exponent at the given level(s)"""
        level = np.asarray(level, dtype=float)
        if self.is_constant:
            return np.full_like(level, self.exponents[0])
        return np.interp(level, self.levels, self.exponents)

    def derivative(self, level):
        """Derivative of the exponent in the level (zero outside the table)"""
        level = np.asarray(level, dtype=float)
        if self.is_constant:
            return np.zeros_like(level)

        segment = np.searchsorted(self.levels, level, side='right') - 1
        inside = (segment >= 0) & (segment < len(self._slopes))
        return np.where(inside, self._slopes[np.clip(segment, 0, len(self._slopes) - 1)], 0.0)

    def describe(self):
        if self.is_constant:
            return {'constant': float(self.exponents[0])}
        return {'table': np.column_stack([self.levels, self.exponents]).tolist()}
