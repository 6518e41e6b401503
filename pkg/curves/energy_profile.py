"""
Energy Profile
Axis (co)energy integrals and their inverses for one principal direction
"""

import logging

import numpy as np

from common.errors import NegativeEnergy
from common.root_finding import grow_bracket, safeguarded_newton
from curves.principal_curve import LINEAR

logger = logging.getLogger(__name__)

COENERGY = 'coenergy'
ENERGY = 'energy'
FRAMES = (COENERGY, ENERGY)


class EnergyProfile:
    """
    Building block x_hat(w) of the implicit models

    In the coenergy frame the axis variable is the field h, the axis
    potential is w*(h) and the inverse is h_hat(w*). In the energy frame the
    axis variable is the flux b, the potential is w(b) and the inverse is
    b_hat(w). Both inverses are computed by solving for the field h, so the
    energy frame never nests two iterative inversions.
    """

    def __init__(self, curve, frame=COENERGY):
        """
        Initialize energy profile

        Args:
            curve: PrincipalCurve along this axis
            frame: 'coenergy' or 'energy'
        """
        if frame not in FRAMES:
            raise ValueError(f"frame must be one of {FRAMES}, got {frame!r}")

        self.curve = curve
        self.frame = frame

        logger.debug(f"Energy profile initialized ({curve.kind}, {frame})")

    def energy(self, x):
        """Axis potential at axis variable x (even in x)"""
        if self.frame == COENERGY:
            return self.curve.coenergy(x)
        return self.curve.energy(x)

    def law(self, x):
        """Conjugate axis variable: b(h) in the coenergy frame, h(b) in the energy frame"""
        if self.frame == COENERGY:
            return self.curve.eval_b(x)
        return self.curve.eval_h(x)

    def law_derivative(self, x):
        """Derivative of law(x)"""
        if self.frame == COENERGY:
            return self.curve.eval_db(x)
        return self.curve.eval_dh(x)

    def _axis_potential(self, h):
        # potential of this frame expressed through the field h >= 0
        if self.frame == COENERGY:
            return self.curve.coenergy(h), self.curve.eval_b(h)
        return self.curve.energy_at_field(h), h * self.curve.eval_db(h)

    def _field_for_level(self, w):
        """Field h >= 0 at which the axis potential equals w"""
        w = np.asarray(w, dtype=float)
        if np.any(w < 0):
            raise NegativeEnergy(f"axis energy level must be non-negative, got {np.min(w)}")

        if self.curve.kind == LINEAR:
            return self.curve.coefficient * np.sqrt(2.0 * w)

        def residual(h):
            value, slope = self._axis_potential(h)
            return value - w, slope

        start = np.sqrt(2.0 * w / self.curve.eval_db(0.0))
        lo, hi = grow_bracket(residual, np.zeros_like(w), np.ones_like(w))
        h, _, _ = safeguarded_newton(residual, lo, hi, x0=start)
        return h

    def inverse(self, w):
        """
        Invert the axis potential

        Args:
            w: Level(s) >= 0 in J/m^3

        Returns:
            (x_hat, dx_hat/dw)
        """
        x_hat, d1, _ = self.inverse_derivatives(w)
        return x_hat, d1

    def inverse_derivatives(self, w):
        """
        Inverse axis potential with first and second derivatives

        x_hat' = 1 / g(x_hat) and x_hat'' = -g'(x_hat) / g(x_hat)^3, with g the
        conjugate law of this frame.

        Args:
            w: Level(s) >= 0 in J/m^3

        Returns:
            (x_hat, x_hat', x_hat'')
        """
        h = self._field_for_level(w)
        db = self.curve.eval_db(h)

        with np.errstate(divide='ignore', invalid='ignore'):
            if self.frame == COENERGY:
                x_hat = h
                g = self.curve.eval_b(h)
                dg = db
            else:
                x_hat = self.curve.eval_b(h)
                g = h
                dg = 1.0 / db

            d1 = 1.0 / g
            d2 = -dg / g ** 3

        return x_hat, d1, d2

    def young_gap(self, h):
        """w*(h) + w(b(h)) - h*b(h); zero up to rounding for a conjugate pair"""
        b = self.curve.eval_b(h)
        return self.curve.coenergy(h) + self.curve.energy(b) - np.asarray(h) * b

    def describe(self):
        return self.curve.describe()


def coenergy_along_axis(profile, h):
    """
    Axis coenergy w*_i(h) = integral of b_i from 0 to |h|

    Args:
        profile: EnergyProfile (its curve is used, whatever the frame)
        h: Field(s) in A/m

    Returns:
        Coenergy in J/m^3
    """
    return profile.curve.coenergy(h)


def invert_axis_energy(profile, w):
    """
    Inverse of the frame's axis potential

    Args:
        profile: EnergyProfile
        w: Level(s) >= 0 in J/m^3

    Returns:
        (x_hat, dx_hat/dw)
    """
    return profile.inverse(w)
