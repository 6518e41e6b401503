"""
Principal Curve
Scalar B-H relations along the rolling and transverse directions
"""

import logging

import numpy as np
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from common.errors import (CurveError, MissingOrigin, NonMonotoneData,
                           NonPositiveCoefficient, TooFewSamples)
from common.root_finding import safeguarded_newton

logger = logging.getLogger(__name__)

LINEAR = 'linear'
TABULATED = 'tabulated'


class PrincipalCurve:
    """
    Odd, strictly increasing scalar law b(h)

    Subclasses define the law for h >= 0; the base class supplies the odd
    extension. All queries accept scalars or numpy arrays. Instances are
    immutable after construction.
    """

    kind = None

    def eval_b(self, h):
        """Flux density b(h) in T"""
        h = np.asarray(h, dtype=float)
        return np.sign(h) * self._b(np.abs(h))

    def eval_db(self, h):
        """Differential permeability b'(h) in T*m/A (even in h)"""
        return self._db(np.abs(np.asarray(h, dtype=float)))

    def eval_h(self, b):
        """Field h(b) in A/m, the exact inverse of eval_b"""
        b = np.asarray(b, dtype=float)
        return np.sign(b) * self._h(np.abs(b))

    def eval_dh(self, b):
        """Differential reluctivity h'(b) = 1 / b'(h(b))"""
        return 1.0 / self.eval_db(self.eval_h(b))

    def coenergy(self, h):
        """Axis coenergy w*(h) = integral of b from 0 to |h|, in J/m^3"""
        return self._coenergy(np.abs(np.asarray(h, dtype=float)))

    def energy_at_field(self, h):
        """Axis energy at the flux b(h): h*b(h) - w*(h), exact integration by parts"""
        a = np.abs(np.asarray(h, dtype=float))
        return a * self._b(a) - self._coenergy(a)

    def energy(self, b):
        """Axis energy w(b) = integral of h from 0 to |b|, in J/m^3"""
        return self.energy_at_field(self.eval_h(b))

    def describe(self):
        """Serializable description used for hashing and config output"""
        raise NotImplementedError


class LinearCurve(PrincipalCurve):
    """
    Linear law b = h / c^2

    The scaling makes the inverse axis coenergy c * sqrt(2 w*).
    """

    kind = LINEAR

    def __init__(self, coefficient):
        """
        Initialize linear curve

        Args:
            coefficient: Positive scale c
        """
        coefficient = float(coefficient)
        if not np.isfinite(coefficient) or coefficient <= 0:
            raise NonPositiveCoefficient(f"linear coefficient must be positive, got {coefficient}")

        self.coefficient = coefficient
        self.slope = 1.0 / coefficient ** 2

        logger.debug(f"Linear curve initialized (c={coefficient})")

    def _b(self, a):
        return a * self.slope

    def _db(self, a):
        return np.full_like(a, self.slope)

    def _h(self, a):
        return a * self.coefficient ** 2

    def _coenergy(self, a):
        return 0.5 * self.slope * a * a

    def describe(self):
        return {'linear': self.coefficient}


class TabulatedCurve(PrincipalCurve):
    """
    Measured law interpolated by a monotone cubic Hermite spline

    Beyond the last sample the law continues linearly with the terminal
    slope.
    """

    kind = TABULATED

    def __init__(self, samples, slope_bounds=(0.0, np.inf)):
        """
        Initialize tabulated curve

        Args:
            samples: Sequence of (h, b) pairs, h >= 0, starting at (0, 0)
            slope_bounds: Open lower / closed upper bound on secant slopes
        """
        data = np.asarray(samples, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise CurveError("samples must be a sequence of (h, b) pairs")
        if len(data) < 3:
            raise TooFewSamples(f"need at least 3 samples, got {len(data)}")
        if not np.all(np.isfinite(data)):
            raise CurveError("samples must be finite")

        h, b = data[:, 0], data[:, 1]
        if h[0] != 0.0 or b[0] != 0.0:
            raise MissingOrigin(f"first sample must be (0, 0), got ({h[0]}, {b[0]})")

        steps = np.diff(h)
        if np.any(steps <= 0):
            raise NonMonotoneData("h samples must be strictly increasing")

        secants = np.diff(b) / steps
        lower, upper = slope_bounds
        bad = (secants <= lower) | (secants > upper)
        if np.any(bad):
            index = int(np.argmax(bad))
            raise NonMonotoneData(
                f"secant slope {secants[index]:.6g} between samples {index} and {index + 1} "
                f"outside ({lower}, {upper}]"
            )

        slopes = PchipInterpolator(h, b).derivative()(h)
        # end slopes of the shape-preserving formula may be clipped to zero
        slopes[0] = slopes[0] if slopes[0] > 0 else 0.5 * secants[0]
        slopes[-1] = slopes[-1] if slopes[-1] > 0 else 0.5 * secants[-1]

        self.samples = data
        self.h_max = float(h[-1])
        self.b_max = float(b[-1])
        self.end_slope = float(slopes[-1])

        self._spline = CubicHermiteSpline(h, b, slopes, extrapolate=False)
        self._dspline = self._spline.derivative()
        self._antiderivative = self._spline.antiderivative()
        self._w_max = float(self._antiderivative(self.h_max))

        logger.info(f"Tabulated curve initialized ({len(data)} samples, h_max={self.h_max:g} A/m)")

    def _b(self, a):
        inside = a <= self.h_max
        beyond = self.b_max + self.end_slope * (a - self.h_max)
        return np.where(inside, self._spline(np.minimum(a, self.h_max)), beyond)

    def _db(self, a):
        inside = a <= self.h_max
        return np.where(inside, self._dspline(np.minimum(a, self.h_max)), self.end_slope)

    def _coenergy(self, a):
        inside = a <= self.h_max
        d = a - self.h_max
        beyond = self._w_max + self.b_max * d + 0.5 * self.end_slope * d * d
        return np.where(inside, self._antiderivative(np.minimum(a, self.h_max)), beyond)

    def _h(self, a):
        a = np.asarray(a, dtype=float)
        beyond = self.h_max + (a - self.b_max) / self.end_slope

        target = np.minimum(a, self.b_max)
        knots_h = self.samples[:, 0]
        knots_b = self.samples[:, 1]
        segment = np.clip(np.searchsorted(knots_b, target, side='right') - 1, 0, len(knots_b) - 2)

        def residual(h):
            return self._spline(h) - target, self._dspline(h)

        h, _, _ = safeguarded_newton(residual, knots_h[segment], knots_h[segment + 1])
        return np.where(a <= self.b_max, h, beyond)

    def describe(self):
        return {'samples': self.samples.tolist()}


def make_linear_curve(c):
    """
    Create a linear principal curve b = h / c^2

    Args:
        c: Positive scale

    Returns:
        LinearCurve
    """
    return LinearCurve(c)


def make_tabulated_curve(samples, slope_bounds=(0.0, np.inf)):
    """
    Create a principal curve from measured (h, b) samples

    Args:
        samples: Sequence of (h, b) pairs with h >= 0
        slope_bounds: Allowed secant slope range

    Returns:
        TabulatedCurve
    """
    return TabulatedCurve(samples, slope_bounds)


def eval_b(curve, h):
    """Evaluate b(h) on a principal curve"""
    return curve.eval_b(h)


def eval_db(curve, h):
    """Evaluate b'(h) on a principal curve"""
    return curve.eval_db(h)
