"""
Material Law
Vector laws b(h), h(b) and differential tensors by implicit differentiation
"""

import logging
import weakref
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from common.errors import (AxisSingularity, DegenerateDiscriminant,
                           ExponentTooSmall, OriginSingularity)
from law.sym_tensor import SymTensor2
from model.level_function import level_state
from model.level_solver import as_points, level_warnings, solve_levels

logger = logging.getLogger(__name__)

VARIABLE_EXPONENT_DERIVATIVE = 'VariableExponentDerivative'

# relative distance to an axis treated as on-axis
AXIS_BAND = 1e-12

_warned_models = weakref.WeakSet()


@dataclass(frozen=True)
class LawEvaluation:
    """Level, conjugate field and optional differential tensor at one point"""
    level: float
    gradient: Tuple[float, float]
    hessian: Optional[SymTensor2]
    discriminant: float
    warnings: Tuple[str, ...] = ()

    def to_dict(self):
        return {
            'level': self.level,
            'gradient': list(self.gradient),
            'hessian': self.hessian.to_list() if self.hessian else None,
            'discriminant': self.discriminant,
            'warnings': list(self.warnings),
        }


def _warnings_for(model):
    """Tag derivatives of a variable exponent model; logged at WARNING once per model"""
    if model.exponent.is_constant:
        return ()

    message = (f"{VARIABLE_EXPONENT_DERIVATIVE}: derivatives of a variable exponent model "
               f"carry no smoothness guarantee")
    if model in _warned_models:
        logger.debug(message)
    else:
        _warned_models.add(model)
        logger.warning(message)
    return (VARIABLE_EXPONENT_DERIVATIVE,)


def _derivatives(model, points, levels, order):
    """
    Implicit derivatives of the level function

    With F(x, w(x)) = 0, the gradient is N_i / D where N_i = dF/dx_i and
    D = -dF/dw. The Hessian differentiates N_i = D * dw/dx_i once more:
    d2w/dx_i dx_j = (F_ij + F_iw g_j + F_jw g_i + F_ww g_i g_j) / D.

    Args:
        model: ModelConfig
        points: (N, 2) points, none at the origin
        levels: (N,) solved levels
        order: 1 for gradients, 2 for gradients and Hessians

    Returns:
        (gradients (N, 2), hessians (N, 3) or None, discriminants (N,))
    """
    signs = np.sign(points).T
    state = level_state(model, np.abs(points).T, levels)
    e = state.exponent

    if np.any(e < 1):
        raise ExponentTooSmall(f"derivatives need an exponent >= 1, got {float(e.min()):g}")

    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        numerators = np.where(state.nonzero, e * state.ratio ** (e - 1) * signs / state.x_hat, 0.0)
    discriminant = -state.slope

    bad = ~np.isfinite(discriminant) | (discriminant <= 0)
    if np.any(bad):
        index = int(np.argmax(bad))
        raise DegenerateDiscriminant(
            f"discriminant {discriminant[index]:.3e} at point {tuple(points[index])}"
        )

    gradients = numerators / discriminant
    if order < 2:
        return gradients.T, None, discriminant

    de = state.dexponent
    rate = state.log_rate
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        f_xx = e * (e - 1) * state.ratio ** (e - 2) / state.x_hat ** 2
        f_xw = np.where(state.nonzero, numerators * (de / e + de * state.log_ratio - e * rate), 0.0)
        drate = state.d2x_hat / state.x_hat - rate ** 2
        dslope = np.where(state.nonzero, -2.0 * de * rate - e * drate, 0.0)
        q = state.term_log_slope
        f_ww = np.where(state.nonzero, state.terms * (q ** 2 + dslope), 0.0).sum(axis=0)

    g1, g2 = gradients
    m11 = f_xx[0] + 2.0 * f_xw[0] * g1 + f_ww * g1 * g1
    m22 = f_xx[1] + 2.0 * f_xw[1] * g2 + f_ww * g2 * g2
    m12 = f_xw[0] * g2 + f_xw[1] * g1 + f_ww * g1 * g2

    hessians = np.stack([m11, m12, m22], axis=1) / discriminant[:, None]
    if not np.all(np.isfinite(hessians)):
        index = int(np.argmax(~np.all(np.isfinite(hessians), axis=1)))
        raise AxisSingularity(f"second derivatives are not finite at {tuple(points[index])}")

    return gradients.T, hessians, discriminant


def _check_hessian_points(model, points, levels):
    """Raise for points where second derivatives are not defined"""
    abs_x = np.abs(points)
    if np.any(np.all(abs_x == 0, axis=1)):
        raise OriginSingularity("second derivatives are not defined at the origin")

    exponents = model.exponent.value(levels)
    if np.any(exponents < 1):
        raise ExponentTooSmall(f"second derivatives need an exponent >= 1, got {float(exponents.min()):g}")

    on_axis = abs_x.min(axis=1) <= AXIS_BAND * abs_x.max(axis=1)
    singular = on_axis & (exponents < 2)
    if np.any(singular):
        index = int(np.argmax(singular))
        raise AxisSingularity(
            f"{model.frame} exponent {exponents[index]:g} < 2 is singular on the principal axis "
            f"at {tuple(points[index])}"
        )


def gradients(model, points):
    """
    Vector law at many points: b(h) in the coenergy frame, h(b) in the energy frame

    Args:
        model: ModelConfig
        points: (N, 2) array

    Returns:
        (N, 2) array
    """
    points = as_points(points)
    levels = solve_levels(model, points)
    result = np.zeros_like(points)
    _warnings_for(model)

    active = ~np.all(points == 0, axis=1)
    if not active.all() and np.any(model.exponent.value(np.zeros(1)) < 1):
        raise ExponentTooSmall("derivatives need an exponent >= 1")

    if active.any():
        result[active] = _derivatives(model, points[active], levels[active], 1)[0]
    return result


def gradient(model, point):
    """
    Vector law at one point

    Args:
        model: ModelConfig
        point: (x1, x2)

    Returns:
        2-vector (b in T, or h in A/m)
    """
    return gradients(model, point)[0]


def hessians(model, points):
    """
    Differential tensors at many points

    Returns:
        (N, 3) array of (t11, t12, t22)
    """
    points = as_points(points)
    levels = solve_levels(model, points)
    _warnings_for(model)
    _check_hessian_points(model, points, levels)
    return _derivatives(model, points, levels, 2)[1]


def hessian(model, point):
    """
    Differential permeability (coenergy frame) or reluctivity (energy frame)

    Args:
        model: ModelConfig
        point: (x1, x2), off the origin

    Returns:
        SymTensor2
    """
    return SymTensor2(*hessians(model, point)[0])


def evaluate(model, point, with_hessian=False):
    """
    Level, vector law and optionally the differential tensor at one point

    Args:
        model: ModelConfig
        point: (x1, x2)
        with_hessian: Also compute the differential tensor

    Returns:
        LawEvaluation
    """
    points = as_points(point)
    levels = solve_levels(model, points)
    warnings = level_warnings(model, point) + _warnings_for(model)

    if np.all(points == 0):
        if with_hessian:
            raise OriginSingularity("second derivatives are not defined at the origin")
        return LawEvaluation(level=0.0, gradient=(0.0, 0.0), hessian=None,
                             discriminant=float('nan'), warnings=warnings)

    if with_hessian:
        _check_hessian_points(model, points, levels)

    grads, hess, discriminant = _derivatives(model, points, levels, 2 if with_hessian else 1)
    return LawEvaluation(
        level=float(levels[0]),
        gradient=(float(grads[0, 0]), float(grads[0, 1])),
        hessian=SymTensor2(*hess[0]) if with_hessian else None,
        discriminant=float(discriminant[0]),
        warnings=warnings,
    )


def differential_tensor_pair(model_co, model_en, h):
    """
    Differential permeability at h and reluctivity at b(h)

    model_en must be the convex conjugate of model_co.

    Args:
        model_co: Coenergy-frame ModelConfig
        model_en: Energy-frame ModelConfig
        h: Field point (off axes and origin)

    Returns:
        (mu, nu, product_error) with product_error = max |mu * nu - I|
    """
    mu = hessian(model_co, h)
    b = gradient(model_co, h)
    nu = hessian(model_en, b)
    error = mu.product_error(nu)

    logger.debug(f"Tensor pair at h={tuple(h)}: product error {error:.3e}")
    return mu, nu, error
