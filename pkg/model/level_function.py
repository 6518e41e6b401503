"""
Level Function
Residual F(x, w) = sum_i (|x_i| / x_hat_i(w))^e(w) - 1 and its partial derivatives
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from common.errors import NonPositiveLevel

logger = logging.getLogger(__name__)

# exp() overflows a double just above 709
LOG_OVERFLOW = 700.0

DEFAULT_UNIQUENESS_SAMPLES = 512


@dataclass(frozen=True)
class LevelState:
    """Per-axis quantities of the level equation, shape (2, N) unless noted"""
    abs_x: np.ndarray
    x_hat: np.ndarray
    dx_hat: np.ndarray
    d2x_hat: np.ndarray
    exponent: np.ndarray        # (N,)
    dexponent: np.ndarray       # (N,)
    ratio: np.ndarray
    log_ratio: np.ndarray
    terms: np.ndarray
    nonzero: np.ndarray

    @property
    def residual(self):
        return self.terms.sum(axis=0) - 1.0

    @property
    def log_rate(self):
        """r_i = x_hat_i' / x_hat_i"""
        return self.dx_hat / self.x_hat

    @property
    def term_log_slope(self):
        """d ln(term_i) / dw, zero on vanishing components"""
        with np.errstate(invalid='ignore'):
            slope = self.dexponent * self.log_ratio - self.exponent * self.log_rate
        return np.where(self.nonzero, slope, 0.0)

    @property
    def slope(self):
        """dF/dw (negative when the level equation is well posed)"""
        return np.where(self.nonzero, self.terms * self.term_log_slope, 0.0).sum(axis=0)


def level_state(model, abs_x, levels):
    """
    Evaluate the level equation quantities

    Args:
        model: ModelConfig
        abs_x: Absolute point components, shape (2, N)
        levels: Levels, shape (N,)

    Returns:
        LevelState
    """
    abs_x = np.asarray(abs_x, dtype=float)
    levels = np.asarray(levels, dtype=float)

    x_hat, dx_hat, d2x_hat = model.inverse_functions(levels)
    exponent = model.exponent.value(levels)
    dexponent = model.exponent.derivative(levels)

    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        ratio = abs_x / x_hat
        log_ratio = np.log(ratio)
        scaled = exponent * log_ratio
        terms = np.where(scaled > LOG_OVERFLOW, np.inf, np.exp(np.minimum(scaled, LOG_OVERFLOW)))

    return LevelState(
        abs_x=abs_x, x_hat=x_hat, dx_hat=dx_hat, d2x_hat=d2x_hat,
        exponent=exponent, dexponent=dexponent,
        ratio=ratio, log_ratio=log_ratio, terms=terms, nonzero=abs_x > 0,
    )


def residual(model, point, level):
    """
    Residual of the level equation

    Args:
        model: ModelConfig
        point: (x1, x2) in A/m (coenergy frame) or T (energy frame)
        level: Level > 0 in J/m^3

    Returns:
        F(point, level)
    """
    level = float(level)
    if not level > 0:
        raise NonPositiveLevel(f"level must be positive, got {level}")

    abs_x = np.abs(np.asarray(point, dtype=float)).reshape(2, 1)
    return float(level_state(model, abs_x, np.array([level])).residual[0])


@dataclass
class UniquenessReport:
    """Outcome of sampling the residual along a level range"""
    monotone: bool
    sign_changes: int
    sample_levels: List[float] = field(repr=False)
    residuals: List[float] = field(repr=False)

    @property
    def reliable(self):
        return self.sign_changes <= 1

    def to_dict(self):
        return {
            'monotone': self.monotone,
            'sign_changes': self.sign_changes,
            'sample_levels': self.sample_levels,
            'residuals': self.residuals,
        }


def check_uniqueness(model, point, level_range, samples=DEFAULT_UNIQUENESS_SAMPLES):
    """
    Sample the residual on a log-spaced level grid

    Args:
        model: ModelConfig
        point: (x1, x2)
        level_range: (low, high) with 0 < low < high
        samples: Grid size

    Returns:
        UniquenessReport
    """
    low, high = (float(v) for v in level_range)
    if not 0 < low < high:
        raise NonPositiveLevel(f"level range must be positive and ordered, got ({low}, {high})")

    levels = np.geomspace(low, high, samples)
    abs_x = np.broadcast_to(np.abs(np.asarray(point, dtype=float)).reshape(2, 1), (2, samples))
    values = level_state(model, abs_x, levels).residual

    with np.errstate(invalid='ignore'):
        steps = np.diff(values)
        scale = np.maximum(1.0, np.abs(values[1:]))
        monotone = bool(np.all((steps <= 1e-14 * scale) | np.isnan(steps)))

    # overflowed terms count as positive residuals
    signs = np.sign(values[~np.isnan(values) & (values != 0)])
    sign_changes = int(np.count_nonzero(np.diff(signs))) if signs.size > 1 else 0

    return UniquenessReport(
        monotone=monotone,
        sign_changes=sign_changes,
        sample_levels=levels.tolist(),
        residuals=values.tolist(),
    )
