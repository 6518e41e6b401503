"""
Contours
Equal-level contours, constant-induction loci and the hard magnetization axis
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from analysis.value_function import ModelPair, value_function
from common.errors import (MaxIterExceeded, NewtonDiverged, NoBracket,
                           NonPositiveLevel)
from common.root_finding import EPS, grow_bracket, safeguarded_newton

logger = logging.getLogger(__name__)

DEFAULT_CONTOUR_SAMPLES = 256
DEFAULT_LOCUS_SAMPLES = 128
DEFAULT_HARD_AXIS_SAMPLES = 91

RADIAL_RTOL = 1e-12
RADIAL_MAX_DOUBLINGS = 200
MAX_HALVINGS = 40
NEWTON_MAX_ITER = 60
NEWTON_TOL = 1e-12
HARD_AXIS_XATOL = 1e-5
DEGENERATE_SPREAD = 1e-12


@dataclass(frozen=True)
class Polyline:
    """Ordered 2D points with the angle that generated each of them"""
    points: np.ndarray
    thetas: np.ndarray
    closed: bool = True

    def __post_init__(self):
        if self.closed and len(self.points) < 3:
            raise ValueError("closed polyline needs at least 3 points")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("polyline points must be finite")

    @property
    def radii(self):
        return np.hypot(self.points[:, 0], self.points[:, 1])

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class HardAxisResult:
    angle: float
    field_magnitude: float
    degenerate: bool

    def to_dict(self):
        return {
            'angle': self.angle,
            'field_magnitude': self.field_magnitude,
            'degenerate': self.degenerate,
        }


def unit_directions(thetas):
    """(cos, sin) rows with exact zeros on the axes"""
    directions = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    directions[np.abs(directions) < 1e-15] = 0.0
    return directions


def _radial_solve(func, count):
    lo, hi = grow_bracket(func, np.zeros(count), np.ones(count))
    radii, _, converged = safeguarded_newton(func, lo, hi, rtol=RADIAL_RTOL)
    if not converged.all():
        raise MaxIterExceeded(f"radial solve open for {int((~converged).sum())} directions")
    return radii


def trace_contour(model, level, samples=DEFAULT_CONTOUR_SAMPLES):
    """
    Trace the contour {x : value(x) = level} by radial solves

    The value is strictly increasing along every ray from the origin, so
    each direction has exactly one crossing.

    Args:
        model: ModelConfig, PNormModel or ValueFunction
        level: Level > 0 in J/m^3
        samples: Number of directions uniformly spaced in [0, 2 pi)

    Returns:
        Closed Polyline
    """
    level = float(level)
    if not level > 0:
        raise NonPositiveLevel(f"contour level must be positive, got {level}")

    vf = value_function(model)
    thetas = 2.0 * np.pi * np.arange(samples) / samples
    directions = unit_directions(thetas)

    def func(r):
        points = r[:, None] * directions
        slope = (vf.gradients(points) * directions).sum(axis=1)
        return vf.values(points) - level, slope

    radii = _radial_solve(func, samples)
    logger.debug(f"Traced contour at level {level:g} with {samples} points")
    return Polyline(points=radii[:, None] * directions, thetas=thetas, closed=True)


def _fields_energy_route(energy_model, b_magnitude, angles):
    vf = value_function(energy_model)
    return vf.gradients(b_magnitude * unit_directions(angles))


def _radial_start(vf, target):
    """Field along the direction of target whose induction has the same projection"""
    norm = float(np.hypot(*target))
    direction = target / norm

    def projection(r):
        return float(vf.gradient(r * direction) @ direction) - norm

    upper = 1.0
    for _ in range(RADIAL_MAX_DOUBLINGS):
        if projection(upper) > 0:
            break
        upper *= 2.0
    else:
        raise NoBracket(f"induction {norm:g} not reached along {tuple(direction)}")

    radius = brentq(projection, 0.0, upper, xtol=1e-14, rtol=4 * EPS, maxiter=200)
    return radius * direction


def _invert_law(vf, target, start):
    """
    Solve grad(h) = target by damped Newton with the Hessian as Jacobian

    The step is halved while the residual norm does not decrease.
    """
    h = np.array(start, dtype=float)
    scale = max(1.0, float(np.hypot(*target)))
    residual = vf.gradient(h) - target
    norm = float(np.hypot(*residual))

    for _ in range(NEWTON_MAX_ITER):
        if norm <= NEWTON_TOL * scale:
            return h
        t11, t12, t22 = vf.hessians(h)[0]
        step = np.linalg.solve(np.array([[t11, t12], [t12, t22]]), residual)

        damping = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = h - damping * step
            trial_residual = vf.gradient(trial) - target
            trial_norm = float(np.hypot(*trial_residual))
            if trial_norm < norm:
                break
            damping *= 0.5
        else:
            if norm <= 1e3 * NEWTON_TOL * scale:
                return h
            raise NewtonDiverged(f"no descent after {MAX_HALVINGS} halvings at target {tuple(target)}")

        h, residual, norm = trial, trial_residual, trial_norm

    if norm <= 1e3 * NEWTON_TOL * scale:
        return h
    raise NewtonDiverged(f"law inversion not converged for target {tuple(target)} (residual {norm:.3e})")


def _fields_coenergy_route(coenergy_model, b_magnitude, angles, start=None):
    vf = value_function(coenergy_model)
    targets = b_magnitude * unit_directions(angles)
    fields = np.zeros_like(targets)

    previous = start
    for index, target in enumerate(targets):
        if np.any(target == 0):
            # on an axis the field is parallel to the induction
            previous = _radial_start(vf, target)
        else:
            if previous is None or np.any(previous == 0):
                previous = _radial_start(vf, target)
            previous = _invert_law(vf, target, previous)
        fields[index] = previous
    return fields


def fields_at_angles(pair, b_magnitude, angles, start=None):
    """
    Field h with b(h) = |b| (cos phi, sin phi) for each angle

    Args:
        pair: ModelPair (or a single model)
        b_magnitude: |b| in T
        angles: Angles in radians
        start: Optional starting field for the first angle (coenergy route)

    Returns:
        (N, 2) array of fields in A/m
    """
    pair = ModelPair.of(pair)
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if pair.energy is not None:
        return _fields_energy_route(pair.energy, b_magnitude, angles)
    return _fields_coenergy_route(pair.coenergy, b_magnitude, angles, start)


def locus_constant_induction(pair, b_magnitude, samples=DEFAULT_LOCUS_SAMPLES):
    """
    Locus of fields h producing inductions of fixed magnitude

    The energy side gives h = grad w(b) directly; otherwise b(h) = b is
    inverted by Newton with continuation from the previous angle.

    Args:
        pair: ModelPair (or a single model)
        b_magnitude: |b| > 0 in T
        samples: Number of angles uniformly spaced in [0, 2 pi)

    Returns:
        Closed Polyline of h points
    """
    b_magnitude = float(b_magnitude)
    if not b_magnitude > 0:
        raise NonPositiveLevel(f"induction magnitude must be positive, got {b_magnitude}")

    angles = 2.0 * np.pi * np.arange(samples) / samples
    fields = fields_at_angles(pair, b_magnitude, angles)
    logger.debug(f"Locus at |b|={b_magnitude:g} with {samples} points")
    return Polyline(points=fields, thetas=angles, closed=True)


def hard_axis(pair, b_magnitude, samples=DEFAULT_HARD_AXIS_SAMPLES):
    """
    Direction of hard magnetization

    Maximizes |h(b(phi))| over phi in [0, pi/2]: grid argmax, then a
    bounded scalar search between the neighbouring grid angles.

    Args:
        pair: ModelPair (or a single model)
        b_magnitude: |b| > 0 in T
        samples: Grid size over [0, pi/2]

    Returns:
        HardAxisResult
    """
    b_magnitude = float(b_magnitude)
    if not b_magnitude > 0:
        raise NonPositiveLevel(f"induction magnitude must be positive, got {b_magnitude}")

    angles = np.linspace(0.0, 0.5 * np.pi, samples)
    fields = fields_at_angles(pair, b_magnitude, angles)
    magnitudes = np.hypot(fields[:, 0], fields[:, 1])

    best = int(np.argmax(magnitudes))
    peak = float(magnitudes[best])

    if peak - float(magnitudes.min()) <= DEGENERATE_SPREAD * peak:
        logger.info(f"Hard axis degenerate at |b|={b_magnitude:g}")
        return HardAxisResult(angle=float(angles[best]), field_magnitude=peak, degenerate=True)

    lower = angles[max(best - 1, 0)]
    upper = angles[min(best + 1, samples - 1)]
    start = fields[best]

    def negative_magnitude(phi):
        field = fields_at_angles(pair, b_magnitude, [phi], start=start)[0]
        return -float(np.hypot(*field))

    result = minimize_scalar(negative_magnitude, bounds=(lower, upper), method='bounded',
                             options={'xatol': HARD_AXIS_XATOL})

    angle, magnitude = float(angles[best]), peak
    if -result.fun > peak:
        angle, magnitude = float(result.x), float(-result.fun)

    logger.info(f"Hard axis at phi={angle:.6f} rad (|h|={magnitude:.6g})")
    return HardAxisResult(angle=angle, field_magnitude=magnitude, degenerate=False)
