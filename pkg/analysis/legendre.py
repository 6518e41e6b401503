"""
Legendre
Brute-force convex conjugate on a grid, used as a duality oracle
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from analysis.contours import unit_directions
from analysis.value_function import value_function
from common.errors import ArgmaxOnBoundary, MaxIterExceeded
from common.root_finding import grow_bracket, safeguarded_newton

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 601
BOX_FACTOR = 2.5
EXTENT_DIRECTIONS = 64
EXTENT_RTOL = 1e-6
DUALITY_FACTOR = 5.0


@dataclass
class LegendreSuiteResult:
    """Oracle values against the exact conjugate at many points"""
    spacing: float
    max_deviation: float
    max_scaled_deviation: float
    oracle: List[float] = field(repr=False)
    exact: List[float] = field(repr=False)

    @property
    def passed(self):
        return self.max_scaled_deviation <= DUALITY_FACTOR

    def to_dict(self):
        return {
            'spacing': self.spacing,
            'max_deviation': self.max_deviation,
            'max_scaled_deviation': self.max_scaled_deviation,
            'tolerance_factor': DUALITY_FACTOR,
            'passed': self.passed,
        }


def gradient_extent(energy_model, field_magnitude):
    """
    Largest |b| with |grad w(b)| = field_magnitude over a fan of directions

    Args:
        energy_model: Model or ValueFunction
        field_magnitude: |h| >= 0

    Returns:
        Radius in the model's variable
    """
    if field_magnitude <= 0:
        return 0.0

    vf = value_function(energy_model)
    directions = unit_directions(np.linspace(0.0, 2.0 * np.pi, EXTENT_DIRECTIONS, endpoint=False))
    nan_slope = np.full(EXTENT_DIRECTIONS, np.nan)

    # no slope information: the solver falls back to bisection
    def func(r):
        grads = vf.gradients(r[:, None] * directions)
        return np.hypot(grads[:, 0], grads[:, 1]) - field_magnitude, nan_slope

    lo, hi = grow_bracket(func, np.zeros(EXTENT_DIRECTIONS), np.ones(EXTENT_DIRECTIONS))
    radii, _, converged = safeguarded_newton(func, lo, hi, rtol=EXTENT_RTOL)
    if not converged.all():
        raise MaxIterExceeded("gradient extent did not converge")
    return float(radii.max())


def default_box(energy_model, field_magnitude):
    """Square box of half-width 2.5 times the gradient extent"""
    half = BOX_FACTOR * gradient_extent(energy_model, field_magnitude)
    return (-half, half, -half, half)


def _grid(energy_model, box, resolution):
    x0, x1, y0, y1 = (float(v) for v in box)
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing='ij')
    points = np.stack([grid_x.ravel(), grid_y.ravel()], axis=1)
    values = value_function(energy_model).values(points)
    spacing = max(xs[1] - xs[0], ys[1] - ys[0])
    return points, values, spacing


def _supremum(points, values, resolution, h):
    objective = points @ np.asarray(h, dtype=float) - values
    index = int(np.argmax(objective))
    row, column = divmod(index, resolution)
    if row in (0, resolution - 1) or column in (0, resolution - 1):
        raise ArgmaxOnBoundary(f"supremum for h={tuple(h)} attained on the grid edge at {tuple(points[index])}")
    return float(objective[index])


def legendre_oracle(energy_model, h, box=None, resolution=DEFAULT_RESOLUTION):
    """
    sup over grid points b of <h, b> - w(b)

    Args:
        energy_model: Energy-frame model (or ValueFunction)
        h: Field point (h1, h2)
        box: (x0, x1, y0, y1); defaults to 2.5 times the gradient extent at |h|
        resolution: Grid points per side

    Returns:
        Conjugate value in J/m^3, accurate to a few grid spacings times |h|
    """
    h = np.asarray(h, dtype=float)
    if box is None:
        magnitude = float(np.hypot(*h))
        if magnitude == 0:
            return 0.0
        box = default_box(energy_model, magnitude)

    points, values, spacing = _grid(energy_model, box, resolution)
    result = _supremum(points, values, resolution, h)
    logger.debug(f"Legendre oracle at h={tuple(h)}: {result:.6g} (spacing {spacing:.3e})")
    return result


def legendre_suite(energy_model, coenergy_model, points, box=None, resolution=DEFAULT_RESOLUTION):
    """
    Compare the grid conjugate of energy_model with coenergy_model

    The grid is evaluated once and reused for every field point.

    Args:
        energy_model: Energy-frame model
        coenergy_model: Its claimed conjugate (coenergy frame)
        points: (N, 2) field points
        box: Grid box; defaults to cover the largest |h|
        resolution: Grid points per side

    Returns:
        LegendreSuiteResult with deviations scaled by spacing * |h|
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    magnitudes = np.hypot(points[:, 0], points[:, 1])

    if box is None:
        box = default_box(energy_model, float(magnitudes.max()))
        if box[1] <= 0:
            box = (-1.0, 1.0, -1.0, 1.0)

    grid_points, values, spacing = _grid(energy_model, box, resolution)
    oracle = np.array([_supremum(grid_points, values, resolution, h) for h in points])
    exact = value_function(coenergy_model).values(points)

    deviation = np.abs(oracle - exact)
    scaled = np.divide(deviation, spacing * magnitudes, out=np.zeros_like(deviation),
                       where=magnitudes > 0)

    result = LegendreSuiteResult(
        spacing=float(spacing),
        max_deviation=float(deviation.max()),
        max_scaled_deviation=float(scaled.max()),
        oracle=oracle.tolist(),
        exact=exact.tolist(),
    )
    logger.info(f"Legendre suite over {len(points)} points: max deviation {result.max_deviation:.3e}")
    return result
