"""
Level Solver
Evaluates the implicitly defined (co)energy by solving the level equation
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from common.errors import InvalidPoint, MaxIterExceeded
from common.parallel import chunked_map
from common.root_finding import grow_bracket, safeguarded_newton
from model.level_function import level_state

logger = logging.getLogger(__name__)

NON_MONOTONE_RESIDUAL = 'NonMonotoneResidual'


@dataclass(frozen=True)
class LevelSolution:
    """Solved level with its report channel"""
    level: float
    iterations: int
    residual: float
    warnings: Tuple[str, ...] = ()


def as_points(points):
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(1, 2)
    if points.ndim != 2 or points.shape[1] != 2:
        raise InvalidPoint(f"points must have shape (N, 2), got {points.shape}")
    if not np.all(np.isfinite(points)):
        raise InvalidPoint("points must be finite")
    return points


def _solve_block(model, points):
    """Solve the level equation for an (N, 2) block; returns (levels, iterations, residuals)"""
    abs_x = np.abs(points).T
    count = points.shape[0]
    levels = np.zeros(count)
    residuals = np.zeros(count)

    axis_w = model.axis_energies(abs_x)
    origin = (abs_x[0] == 0) & (abs_x[1] == 0)
    on_axis = ((abs_x[0] == 0) | (abs_x[1] == 0)) & ~origin

    # on an axis the level equation reduces to the axis potential
    levels[on_axis] = axis_w.max(axis=0)[on_axis]

    active = ~(origin | on_axis)
    if not active.any():
        return levels, 0, residuals

    x = abs_x[:, active]
    solver = model.solver

    def func(w):
        state = level_state(model, x, w)
        return state.residual, state.slope

    lo = axis_w[:, active].max(axis=0)
    hi = axis_w[:, active].sum(axis=0)
    lo, hi = grow_bracket(func, lo, np.maximum(hi, lo), decreasing=True)

    solved, iterations, converged = safeguarded_newton(
        func, lo, hi,
        rtol=0.01 * solver.rel_tol,
        xtol=solver.abs_tol,
        ftol=solver.rel_tol,
        max_iter=solver.max_iter,
    )

    final = func(solved)[0]
    certified = converged & (np.abs(final) <= solver.rel_tol)
    if not certified.all():
        worst = float(np.max(np.abs(final[~certified])))
        raise MaxIterExceeded(
            f"level solve not certified for {int((~certified).sum())} points "
            f"(max |F| = {worst:.3e}, rel_tol = {solver.rel_tol:g})"
        )

    levels[active] = solved
    residuals[active] = final
    return levels, iterations, residuals


def solve_levels(model, points):
    """
    Solve the level equation for many points

    Args:
        model: ModelConfig
        points: Array of shape (N, 2)

    Returns:
        Levels in J/m^3, shape (N,)
    """
    points = as_points(points)
    levels = chunked_map(lambda block: _solve_block(model, block)[0], points)
    logger.debug(f"Solved {len(points)} levels")
    return levels


def solve_level(model, point):
    """
    Evaluate the implicit (co)energy at one point

    Args:
        model: ModelConfig
        point: (x1, x2)

    Returns:
        Level in J/m^3 (0 at the origin)
    """
    return float(solve_levels(model, point)[0])


def solve_level_report(model, point):
    """
    Evaluate one point and return the report channel

    Args:
        model: ModelConfig
        point: (x1, x2)

    Returns:
        LevelSolution
    """
    levels, iterations, residuals = _solve_block(model, as_points(point))

    return LevelSolution(
        level=float(levels[0]),
        iterations=iterations,
        residual=float(residuals[0]),
        warnings=level_warnings(model, point),
    )


def level_warnings(model, point):
    """Report tags for a level solved at point (NonMonotoneResidual for flagged models)"""
    if model.screening is None or not model.screening.flagged:
        return ()
    logger.warning(f"{NON_MONOTONE_RESIDUAL}: level at {tuple(point)} may not be unique")
    return (NON_MONOTONE_RESIDUAL,)
