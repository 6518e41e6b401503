"""
Value Function
Uniform access to implicit and closed-form (co)energy models
"""

import logging
from dataclasses import dataclass
from typing import Optional

from closed_form.pnorm_model import (PNormModel, pnorm_gradient,
                                     pnorm_hessians, pnorm_value)
from curves.energy_profile import COENERGY, ENERGY
from law.material_law import gradients, hessians
from model.level_solver import as_points, solve_levels
from model.model_config import ModelConfig, model_hash

logger = logging.getLogger(__name__)


class ValueFunction:
    """
    Vectorized values, gradients and Hessians of one model

    Wraps either an implicit ModelConfig or a closed-form PNormModel so the
    analysis tools do not care which one they get.
    """

    def __init__(self, model):
        """
        Initialize value function

        Args:
            model: ModelConfig or PNormModel
        """
        if isinstance(model, ModelConfig):
            self._values = lambda points: solve_levels(model, points)
            self._gradients = lambda points: gradients(model, points)
            self._hessians = lambda points: hessians(model, points)
        elif isinstance(model, PNormModel):
            self._values = lambda points: pnorm_value(model, points)
            self._gradients = lambda points: pnorm_gradient(model, points)
            self._hessians = lambda points: pnorm_hessians(model, points)
        else:
            raise TypeError(f"unsupported model type {type(model).__name__}")

        self.model = model
        self.frame = model.frame

    def values(self, points):
        """Levels at an (N, 2) array, shape (N,)"""
        return self._values(as_points(points))

    def gradients(self, points):
        """Gradients at an (N, 2) array, shape (N, 2)"""
        return self._gradients(as_points(points))

    def hessians(self, points):
        """Hessians at an (N, 2) array, shape (N, 3)"""
        return self._hessians(as_points(points))

    def value(self, point):
        return float(self.values(point)[0])

    def gradient(self, point):
        return self.gradients(point)[0]

    def describe(self):
        return self.model.describe()

    def hash(self):
        return model_hash(self.model)


def value_function(model):
    """Wrap a model in a ValueFunction (idempotent)"""
    if isinstance(model, ValueFunction):
        return model
    return ValueFunction(model)


@dataclass(frozen=True)
class ModelPair:
    """
    Coenergy and energy descriptions of one material

    Either side may be missing. When both are given they are expected to
    be convex conjugates of each other.
    """
    coenergy: Optional[object] = None
    energy: Optional[object] = None

    def __post_init__(self):
        if self.coenergy is None and self.energy is None:
            raise ValueError("model pair needs at least one model")
        if self.coenergy is not None and self.coenergy.frame != COENERGY:
            raise ValueError(f"coenergy side has frame {self.coenergy.frame!r}")
        if self.energy is not None and self.energy.frame != ENERGY:
            raise ValueError(f"energy side has frame {self.energy.frame!r}")

    @classmethod
    def of(cls, model):
        """Pair holding a single model on the side matching its frame"""
        if isinstance(model, cls):
            return model
        if model.frame == COENERGY:
            return cls(coenergy=model)
        return cls(energy=model)

    @property
    def primary(self):
        """Model used for provenance: the energy side when present"""
        return self.energy if self.energy is not None else self.coenergy

    def describe(self):
        result = {}
        if self.coenergy is not None:
            result['coenergy'] = self.coenergy.describe()
        if self.energy is not None:
            result['energy'] = self.energy.describe()
        return {'pair': result}
