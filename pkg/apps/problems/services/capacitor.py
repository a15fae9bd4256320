"""
Electric potential between two plates around a sphere of contrasting conductivity.
"""

import numpy as np

from apps.grid.models import Field, Grid
from apps.grid.services import make_grid
from apps.kernels.models import BoundarySpec, Dirichlet, Neumann
from apps.stencil.models import OperatorCoefficients

from ..models import CapacitorMode, ProblemSpec

SPHERE_RADIUS = 0.2
TRANSITION_WIDTH = 0.1


def conductivity(r, mode: CapacitorMode | str):
    """0.55 +/- 0.45 tanh((r - 0.2) / 0.1) at distance r from the cube centre."""
    sign = CapacitorMode(mode).sign
    return 0.55 + sign * 0.45 * np.tanh((r - SPHERE_RADIUS) / TRANSITION_WIDTH)


def capacitor_sigma(grid: Grid, mode: CapacitorMode | str) -> Field:
    def sigma(x, y, z):
        return conductivity(np.sqrt((x - 0.5) ** 2 + (y - 0.5) ** 2 + (z - 0.5) ** 2), mode)

    return Field.from_function(grid, sigma)


def capacitor_problem(n: int, mode: CapacitorMode | str = CapacitorMode.HIGH) -> ProblemSpec:
    """Plates u = -1 at z = 0 and u = +1 at z = 1, insulated lateral faces, no source."""
    mode = CapacitorMode(mode)
    grid = make_grid(3, n)
    faces = {(axis, side): Neumann() for axis in (0, 1) for side in (0, 1)}
    faces[(2, 0)] = Dirichlet(-1.0)
    faces[(2, 1)] = Dirichlet(1.0)
    return ProblemSpec(
        grid=grid,
        coefficients=OperatorCoefficients(capacitor_sigma(grid, mode)),
        source=Field.zeros(grid),
        boundary=BoundarySpec(3, faces),
        name=f"capacitor_{mode}",
    )
