"""
P-Norm Model
Explicit squared p-norm coenergy / energy for linear principal axes
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from common.errors import (AxisSingularity, ExponentNotConjugable,
                           InvalidExponent, NonPositiveCoefficient,
                           OriginSingularity)
from curves.energy_profile import COENERGY, ENERGY, FRAMES
from curves.principal_curve import make_linear_curve
from law.sym_tensor import SymTensor2
from model.level_solver import as_points
from model.model_config import make_model

logger = logging.getLogger(__name__)

AXIS_BAND = 1e-12


@dataclass(frozen=True)
class PNormModel:
    """
    w*(h) = 1/2 ||(h1/c1, h2/c2)||_n^2 or w(b) = 1/2 ||(c1 b1, c2 b2)||_p^2

    The implicit model with linear axes b = h / c^2 and a constant exponent
    reduces exactly to this form.
    """
    frame: str
    scales: Tuple[float, float]
    exponent: float

    def __post_init__(self):
        if self.frame not in FRAMES:
            raise ValueError(f"frame must be one of {FRAMES}, got {self.frame!r}")
        if any(not np.isfinite(c) or c <= 0 for c in self.scales):
            raise NonPositiveCoefficient(f"scales must be positive, got {self.scales}")
        if not self.exponent >= 1:
            raise InvalidExponent(f"p-norm exponent must be >= 1, got {self.exponent}")

    @property
    def factors(self):
        """Per-axis factors s_i with v_i = s_i x_i"""
        c = np.asarray(self.scales, dtype=float)
        return 1.0 / c if self.frame == COENERGY else c

    def conjugate(self):
        """Convex conjugate: same scales, other frame, conjugate exponent"""
        other = ENERGY if self.frame == COENERGY else COENERGY
        return PNormModel(other, tuple(self.scales), conjugate_exponent(self.exponent))

    def to_implicit(self, solver=None):
        """Equivalent implicit model with linear axes"""
        c1, c2 = self.scales
        return make_model(self.frame, make_linear_curve(c1), make_linear_curve(c2), self.exponent, solver)

    def describe(self):
        return {'closed_form': {'pnorm': {
            'frame': self.frame,
            'scales': [float(c) for c in self.scales],
            'exponent': float(self.exponent),
        }}}


def _normalized(model, points):
    """Max-factored components: returns (m, a, signs, S) with v = m * a * signs"""
    v = as_points(points) * model.factors
    m = np.abs(v).max(axis=1)
    with np.errstate(invalid='ignore', divide='ignore'):
        a = np.where(m[:, None] > 0, np.abs(v) / m[:, None], 0.0)
    total = (a ** model.exponent).sum(axis=1)
    return m, a, np.sign(v), total


def _unwrap(points, values):
    return values[0] if np.asarray(points).ndim == 1 else values


def pnorm_value(model, point):
    """
    Squared-norm (co)energy

    ||v||_e = m * (sum (|v_i| / m)^e)^(1/e) with m = max |v_i| avoids
    overflow for large exponents and fields.

    Args:
        model: PNormModel
        point: (x1, x2) or (N, 2) array

    Returns:
        Value(s) in J/m^3
    """
    m, _, _, total = _normalized(model, point)
    values = 0.5 * (m * total ** (1.0 / model.exponent)) ** 2
    return _unwrap(point, values)


def pnorm_gradient(model, point):
    """
    Analytic gradient s_i * ||v||^(2-e) |v_i|^(e-1) sign(v_i)

    Args:
        model: PNormModel
        point: (x1, x2) or (N, 2) array

    Returns:
        2-vector or (N, 2) array
    """
    e = model.exponent
    m, a, signs, total = _normalized(model, point)
    with np.errstate(invalid='ignore', divide='ignore'):
        norm_factor = np.where(total > 0, total ** ((2.0 - e) / e), 0.0)
        grads = (m * norm_factor)[:, None] * a ** (e - 1) * signs * model.factors
    return _unwrap(point, grads)


def pnorm_hessians(model, points):
    """
    Analytic Hessians of the squared norm

    d2f/dv_i dv_j = (2-e) N^(2-2e) |v_i|^(e-1) |v_j|^(e-1) s_i s_j + delta_ij (e-1) N^(2-e) |v_i|^(e-2)

    Args:
        model: PNormModel
        points: (N, 2) array

    Returns:
        (N, 3) array of (t11, t12, t22)
    """
    e = model.exponent
    points = as_points(points)
    m, a, signs, total = _normalized(model, points)
    s1, s2 = model.factors

    origin = m == 0
    if np.any(origin) and e != 2:
        raise OriginSingularity(f"p-norm Hessian with exponent {e:g} is not defined at the origin")

    on_axis = a.min(axis=1) <= AXIS_BAND
    if e < 2 and np.any(on_axis & ~origin):
        index = int(np.argmax(on_axis & ~origin))
        raise AxisSingularity(f"exponent {e:g} < 2 is singular on the principal axis at {tuple(points[index])}")

    if e == 2:
        result = np.zeros((len(points), 3))
        result[:, 0] = s1 ** 2
        result[:, 2] = s2 ** 2
        return result

    with np.errstate(invalid='ignore', divide='ignore'):
        cross = (2.0 - e) * total ** ((2.0 - 2.0 * e) / e)
        diag = (e - 1.0) * total ** ((2.0 - e) / e)
        p = a ** (e - 1) * signs
        t11 = (cross * p[:, 0] ** 2 + diag * a[:, 0] ** (e - 2)) * s1 ** 2
        t22 = (cross * p[:, 1] ** 2 + diag * a[:, 1] ** (e - 2)) * s2 ** 2
        t12 = cross * p[:, 0] * p[:, 1] * s1 * s2

    return np.stack([t11, t12, t22], axis=1)


def pnorm_hessian(model, point):
    """Analytic Hessian at one point as a SymTensor2"""
    return SymTensor2(*pnorm_hessians(model, point)[0])


def conjugate_exponent(e):
    """
    Conjugate exponent e / (e - 1)

    Args:
        e: Exponent > 1

    Returns:
        Conjugate exponent (involutive)
    """
    e = float(e)
    if not e > 1:
        raise ExponentNotConjugable(f"exponent must exceed 1 to have a conjugate, got {e}")
    return e / (e - 1.0)


def pnorm_model_to_implicit(model, solver=None):
    """
    Implicit model with Linear(c1), Linear(c2) axes and constant exponent

    Args:
        model: PNormModel
        solver: Optional SolverSettings

    Returns:
        ModelConfig whose solve_level reproduces pnorm_value
    """
    return model.to_implicit(solver)
