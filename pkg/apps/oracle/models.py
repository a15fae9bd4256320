"""
Explicit linear system of the radial discretisation.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from apps.grid.models import Field, Grid


@dataclass(frozen=True, eq=False)
class AssembledSystem:
    """
    ``matrix @ x = rhs`` over the unknown (non-Dirichlet) nodes, numbered in linear
    node order. Dirichlet data is folded into ``rhs`` and kept in ``dirichlet_values``.
    """

    grid: Grid
    matrix: sp.csr_matrix
    rhs: np.ndarray
    unknowns: np.ndarray  # linear offsets of the unknown nodes
    dirichlet_values: np.ndarray  # linear order, zero at unknowns
    pure_neumann: bool = False
    a: float = 0.0

    @property
    def size(self) -> int:
        return int(self.unknowns.size)

    def restrict(self, field: Field) -> np.ndarray:
        """Values of ``field`` at the unknowns."""
        return field.linear()[self.unknowns]

    def to_field(self, x: np.ndarray) -> Field:
        values = self.dirichlet_values.copy()
        values[self.unknowns] = x
        return Field.from_linear(self.grid, values)
