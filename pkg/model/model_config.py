"""
Model Config
Immutable description of an implicit (co)energy model
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from common.settings import get_settings
from curves.energy_profile import COENERGY, ENERGY, FRAMES, EnergyProfile
from model.exponent_rule import ExponentRule
from model.level_function import check_uniqueness

logger = logging.getLogger(__name__)

SCREEN_DIRECTIONS = 7
SCREEN_RANGE_FACTOR = 100.0


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances of the level solver"""
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_iter: int = 200

    @classmethod
    def from_settings(cls, settings=None):
        settings = settings or get_settings()
        return cls(abs_tol=settings.abs_tol, rel_tol=settings.rel_tol, max_iter=settings.max_iter)


@dataclass(frozen=True)
class UniquenessScreen:
    """Result of probing a variable-exponent model for non-unique levels"""
    checked: int
    unreliable: int

    @property
    def flagged(self):
        return self.unreliable > 0


@dataclass(frozen=True, eq=False)
class ModelConfig:
    """
    Implicit interpolation model

    axis1 is the rolling direction, axis2 the transverse direction. In the
    coenergy frame points are fields (A/m); in the energy frame they are
    flux densities (T).
    """
    frame: str
    axis1: EnergyProfile
    axis2: EnergyProfile
    exponent: ExponentRule
    solver: SolverSettings = field(default_factory=SolverSettings)
    screening: Optional[UniquenessScreen] = field(init=False, default=None)

    def __post_init__(self):
        if self.frame not in FRAMES:
            raise ValueError(f"frame must be one of {FRAMES}, got {self.frame!r}")
        if self.axis1.frame != self.frame or self.axis2.frame != self.frame:
            raise ValueError("axis profiles must use the model frame")

        if not self.exponent.is_constant:
            object.__setattr__(self, 'screening', screen_model(self))

        logger.info(f"Model initialized ({self.frame}, exponent {self.exponent.describe()})")

    def inverse_functions(self, levels):
        """
        Inverse axis potentials and derivatives at the given levels

        Returns:
            (x_hat, x_hat', x_hat''), each of shape (2,) + levels.shape
        """
        first = self.axis1.inverse_derivatives(levels)
        second = self.axis2.inverse_derivatives(levels)
        return tuple(np.stack([a, b]) for a, b in zip(first, second))

    def axis_energies(self, abs_x):
        """Axis potentials of each component, shape (2, N)"""
        return np.stack([self.axis1.energy(abs_x[0]), self.axis2.energy(abs_x[1])])

    def describe(self):
        return {
            'frame': self.frame,
            'axis1': self.axis1.describe(),
            'axis2': self.axis2.describe(),
            'exponent': self.exponent.describe(),
            'solver': {
                'abs_tol': self.solver.abs_tol,
                'rel_tol': self.solver.rel_tol,
                'max_iter': self.solver.max_iter,
            },
        }


def make_model(frame, curve1, curve2, exponent, solver=None):
    """
    Assemble a ModelConfig from principal curves

    Args:
        frame: 'coenergy' or 'energy'
        curve1: Rolling-direction PrincipalCurve
        curve2: Transverse-direction PrincipalCurve
        exponent: ExponentRule or positive number
        solver: Optional SolverSettings

    Returns:
        ModelConfig
    """
    if not isinstance(exponent, ExponentRule):
        exponent = ExponentRule.constant(exponent)

    return ModelConfig(
        frame=frame,
        axis1=EnergyProfile(curve1, frame),
        axis2=EnergyProfile(curve2, frame),
        exponent=exponent,
        solver=solver or SolverSettings.from_settings(),
    )


def screen_model(model):
    """
    Screen a variable-exponent model for non-monotone residuals

    Test points lie on the contour-like curve (x_hat_1(L) cos t, x_hat_2(L) sin t)
    for every table level L and several off-axis directions t.

    Args:
        model: ModelConfig with a tabulated exponent

    Returns:
        UniquenessScreen
    """
    table = model.exponent.levels
    levels = np.unique(np.concatenate([table, np.sqrt(table[:-1] * table[1:])]))
    levels = levels[levels > 0]
    level_range = (levels.min() / SCREEN_RANGE_FACTOR, levels.max() * SCREEN_RANGE_FACTOR)
    angles = np.linspace(0.0, 0.5 * np.pi, SCREEN_DIRECTIONS + 2)[1:-1]

    x_hat = model.inverse_functions(levels)[0]
    checked = 0
    unreliable = 0

    for column in range(len(levels)):
        for angle in angles:
            point = (x_hat[0, column] * np.cos(angle), x_hat[1, column] * np.sin(angle))
            report = check_uniqueness(model, point, level_range)
            checked += 1
            if not report.reliable:
                unreliable += 1

    if unreliable:
        logger.warning(f"NonMonotoneResidual: {unreliable}/{checked} points of the variable "
                       f"exponent model have non-unique levels")
    else:
        logger.info(f"Variable exponent screened: {checked} points monotone")

    return UniquenessScreen(checked=checked, unreliable=unreliable)


def model_hash(model):
    """Short stable hash of a model description"""
    text = json.dumps(model.describe(), sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:12]
