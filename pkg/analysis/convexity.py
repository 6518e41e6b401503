"""
Convexity
Numerical convexity diagnostics: Hessian eigenvalues, midpoint tests, contour polygons
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from analysis.contours import trace_contour
from analysis.value_function import value_function
from law.sym_tensor import min_max_eigenvalues

logger = logging.getLogger(__name__)

AXIS_BAND = 1e-6
MIDPOINT_TOL = 1e-12
CONTOUR_TOL = 1e-10
DEFAULT_GRID = 41
DEFAULT_TRIPLES = 10000
DEFAULT_LEVEL_QUANTILES = (0.1, 0.5, 0.9)


@dataclass
class ConvexityReport:
    """Outcome of a convexity scan over an axis-aligned box"""
    region: Tuple[float, float, float, float]
    min_eigenvalue: float
    min_eig_location: Tuple[float, float]
    midpoint_violations: int
    triples: int
    contour_convex: Dict[float, bool] = field(default_factory=dict)

    @property
    def convex(self):
        return (
            not self.min_eigenvalue < 0
            and self.midpoint_violations == 0
            and all(self.contour_convex.values())
        )

    def to_dict(self):
        return {
            'region': list(self.region),
            'min_eigenvalue': self.min_eigenvalue,
            'min_eig_location': list(self.min_eig_location),
            'midpoint_violations': self.midpoint_violations,
            'triples': self.triples,
            'contour_convex': {repr(level): ok for level, ok in self.contour_convex.items()},
            'convex': self.convex,
        }


def polygon_is_convex(points, tol=CONTOUR_TOL):
    """
    Closed polygon convexity: all turns share one orientation

    Args:
        points: (N, 2) vertices in order
        tol: Relative tolerance on cross products (scaled by the squared extent)

    Returns:
        True when no cross product of consecutive edges has the wrong sign
    """
    points = np.asarray(points, dtype=float)
    edges = np.roll(points, -1, axis=0) - points
    following = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * following[:, 1] - edges[:, 1] * following[:, 0]

    scale = float(np.max(np.abs(points))) ** 2
    threshold = tol * scale
    return bool(np.all(cross >= -threshold) or np.all(cross <= threshold))


def _hessian_scan(vf, region, grid):
    x0, x1, y0, y1 = region
    xs = np.linspace(x0, x1, grid)
    ys = np.linspace(y0, y1, grid)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing='ij')
    points = np.stack([grid_x.ravel(), grid_y.ravel()], axis=1)

    band = AXIS_BAND * max(abs(x0), abs(x1), abs(y0), abs(y1))
    keep = (np.abs(points[:, 0]) > band) & (np.abs(points[:, 1]) > band)
    points = points[keep]
    if not len(points):
        return float('nan'), (float('nan'), float('nan'))

    hessians = vf.hessians(points)
    smallest, _ = min_max_eigenvalues(hessians[:, 0], hessians[:, 1], hessians[:, 2])
    index = int(np.nanargmin(smallest))
    return float(smallest[index]), (float(points[index, 0]), float(points[index, 1]))


def _midpoint_violations(vf, region, triples, seed):
    x0, x1, y0, y1 = region
    rng = np.random.default_rng(seed)
    low = np.array([x0, y0])
    high = np.array([x1, y1])
    first = rng.uniform(low, high, size=(triples, 2))
    second = rng.uniform(low, high, size=(triples, 2))

    average = 0.5 * (vf.values(first) + vf.values(second))
    middle = vf.values(0.5 * (first + second))
    tolerance = MIDPOINT_TOL * np.maximum(1.0, np.abs(average))
    return int(np.count_nonzero(middle > average + tolerance))


def convexity_scan(model, region, grid=DEFAULT_GRID, triples=DEFAULT_TRIPLES, levels=None,
                   contour_samples=256, seed=0):
    """
    Scan a model for convexity over an axis-aligned box

    Args:
        model: ModelConfig, PNormModel or ValueFunction
        region: (x0, x1, y0, y1)
        grid: Hessian grid points per side (axis bands are skipped)
        triples: Random (x, y, midpoint) triples for the midpoint test
        levels: Contour levels to test; defaults to quantiles of the values on the box
        contour_samples: Directions per traced contour
        seed: Random seed for the triples

    Returns:
        ConvexityReport
    """
    region = tuple(float(v) for v in region)
    vf = value_function(model)

    min_eigenvalue, location = _hessian_scan(vf, region, grid)
    violations = _midpoint_violations(vf, region, triples, seed) if triples else 0

    if levels is None:
        corners = np.array([[region[0], region[2]], [region[1], region[3]],
                            [region[0], region[3]], [region[1], region[2]]])
        reach = vf.values(corners)
        levels = [float(q) for q in np.unique(np.quantile(reach, DEFAULT_LEVEL_QUANTILES)) if q > 0]

    contour_convex = {}
    for level in levels:
        polyline = trace_contour(vf, level, contour_samples)
        contour_convex[float(level)] = polygon_is_convex(polyline.points)

    report = ConvexityReport(
        region=region,
        min_eigenvalue=min_eigenvalue,
        min_eig_location=location,
        midpoint_violations=violations,
        triples=int(triples),
        contour_convex=contour_convex,
    )

    if report.convex:
        logger.info(f"Convexity scan passed: min eigenvalue {min_eigenvalue:.6g}")
    else:
        logger.warning(f"Convexity scan failed: min eigenvalue {min_eigenvalue:.6g}, "
                       f"{violations} midpoint violations")
    return report
