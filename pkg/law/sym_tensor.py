"""
Symmetric Tensor
Symmetric 2x2 tensor for differential permeability and reluctivity
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SymTensor2:
    """
    Symmetric 2x2 tensor stored as (t11, t12, t22)

    Units are T*m/A for a permeability and A/(T*m) for a reluctivity.
    """
    t11: float
    t12: float
    t22: float

    @classmethod
    def from_matrix(cls, matrix):
        matrix = np.asarray(matrix, dtype=float)
        return cls(float(matrix[0, 0]), float(0.5 * (matrix[0, 1] + matrix[1, 0])), float(matrix[1, 1]))

    def matrix(self):
        return np.array([[self.t11, self.t12], [self.t12, self.t22]])

    def eigenvalues(self):
        """Eigenvalues in ascending order"""
        return min_max_eigenvalues(self.t11, self.t12, self.t22)

    def is_positive_definite(self):
        return bool(self.eigenvalues()[0] > 0)

    def inverse(self):
        det = self.t11 * self.t22 - self.t12 ** 2
        return SymTensor2(self.t22 / det, -self.t12 / det, self.t11 / det)

    def product_error(self, other):
        """Max-norm distance of self * other from the identity"""
        return float(np.max(np.abs(self.matrix() @ other.matrix() - np.eye(2))))

    def to_list(self):
        return [self.t11, self.t12, self.t22]


def min_max_eigenvalues(t11, t12, t22):
    """
    Closed-form eigenvalues of symmetric 2x2 tensors (vectorized)

    Returns:
        (smallest, largest)
    """
    t11, t12, t22 = (np.asarray(v, dtype=float) for v in (t11, t12, t22))
    mean = 0.5 * (t11 + t22)
    radius = np.hypot(0.5 * (t11 - t22), t12)
    return mean - radius, mean + radius
