"""
Special Model
Explicit implicit-model solution when the axis inverses are proportional
"""

import logging
from dataclasses import dataclass

import numpy as np

from common.errors import InvalidExponent, ProportionalityViolated
from curves.energy_profile import EnergyProfile
from model.level_solver import as_points

logger = logging.getLogger(__name__)

REFERENCE_LEVEL = 1.0
PROPORTIONALITY_LEVELS = 32
PROPORTIONALITY_TOL = 1e-8


@dataclass(frozen=True)
class SpecialModel:
    """
    Constant-exponent implicit model with x_hat_1(w) = lam * x_hat_2(w)

    The level equation then reads x_hat_2(w)^n = |x1 / lam|^n + |x2|^n, so
    the level is the axis-2 potential at the n-norm of (x1 / lam, x2).
    """
    profile2: EnergyProfile
    lam: float
    exponent: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ProportionalityViolated(f"ratio must be positive, got {self.lam}")
        if not self.exponent >= 1:
            raise InvalidExponent(f"exponent must be >= 1, got {self.exponent}")

    @property
    def frame(self):
        return self.profile2.frame

    @classmethod
    def from_profiles(cls, axis1, axis2, n):
        """
        Measure and verify the ratio lam = x_hat_1 / x_hat_2

        Args:
            axis1: Rolling-direction EnergyProfile
            axis2: Transverse-direction EnergyProfile (same frame)
            n: Constant exponent >= 1

        Returns:
            SpecialModel
        """
        if axis1.frame != axis2.frame:
            raise ValueError("profiles must share a frame")

        lam = float(axis1.inverse(REFERENCE_LEVEL)[0] / axis2.inverse(REFERENCE_LEVEL)[0])

        levels = np.geomspace(1e-4, 1e4, PROPORTIONALITY_LEVELS)
        ratios = axis1.inverse(levels)[0] / axis2.inverse(levels)[0]
        deviation = float(np.max(np.abs(ratios / lam - 1.0)))
        if deviation > PROPORTIONALITY_TOL:
            raise ProportionalityViolated(
                f"axis inverses are not proportional (relative deviation {deviation:.3e})"
            )

        logger.info(f"Special model initialized (lam={lam:g}, n={n:g})")
        return cls(profile2=axis2, lam=lam, exponent=float(n))

    def describe(self):
        return {'closed_form': {'special': {
            'frame': self.frame,
            'axis2': self.profile2.describe(),
            'lam': self.lam,
            'exponent': self.exponent,
        }}}


def _scaled_norm(model, points):
    """Returns (r, a, signs, S) with r the n-norm of (|x1| / lam, |x2|)"""
    u = np.abs(points) / np.array([model.lam, 1.0])
    m = u.max(axis=1)
    with np.errstate(invalid='ignore', divide='ignore'):
        a = np.where(m[:, None] > 0, u / m[:, None], 0.0)
    total = (a ** model.exponent).sum(axis=1)
    return m * total ** (1.0 / model.exponent), a, np.sign(points), total


def special_value(model, point):
    """
    Level of the proportional-axes model

    Args:
        model: SpecialModel
        point: (x1, x2) or (N, 2) array

    Returns:
        Level(s) in J/m^3
    """
    r = _scaled_norm(model, as_points(point))[0]
    values = np.asarray(model.profile2.energy(r), dtype=float)
    return values[0] if np.asarray(point).ndim == 1 else values


def special_gradient(model, point):
    """
    Gradient through the chain rule dw/dx_i = g2(r) * dr/dx_i

    Args:
        model: SpecialModel
        point: (x1, x2) or (N, 2) array

    Returns:
        2-vector or (N, 2) array
    """
    n = model.exponent
    r, a, signs, total = _scaled_norm(model, as_points(point))
    law = np.asarray(model.profile2.law(r), dtype=float)

    with np.errstate(invalid='ignore', divide='ignore'):
        dr = np.where(total[:, None] > 0, total[:, None] ** ((1.0 - n) / n) * a ** (n - 1), 0.0)
    grads = law[:, None] * dr * signs / np.array([model.lam, 1.0])
    return grads[0] if np.asarray(point).ndim == 1 else grads
