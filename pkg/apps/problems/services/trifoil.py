"""
Vector potential of a singular vortex filament tied in a trefoil knot.
"""

import numpy as np

from apps.grid.models import Field
from apps.grid.services import make_grid
from apps.kernels.models import BoundarySpec
from apps.stencil.models import OperatorCoefficients

from ..models import Curve, ProblemSpec, TrifoilProblem, VectorField
from .curves import check_inside, deposit_delta, resample_curve, trifoil_curve

CIRCULATION = 1.0


def trifoil_problem(n: int, r: float = 0.14, samples: int = 1024) -> TrifoilProblem:
    """Three Dirichlet Poisson problems lap(psi_c) = -omega_c for a unit-circulation knot."""
    grid = make_grid(3, n)
    curve = resample_curve(trifoil_curve(r, samples), grid.h)
    vorticity = deposit_delta(curve, grid, CIRCULATION * curve.tangents())
    assert isinstance(vorticity, VectorField)
    sigma = Field.full(grid, 1.0)
    problems = tuple(
        ProblemSpec(
            grid=grid,
            coefficients=OperatorCoefficients(sigma),
            source=Field(grid, -component.values),
            boundary=BoundarySpec.dirichlet(3),
            name=f"psi_{'xyz'[axis]}",
        )
        for axis, component in enumerate(vorticity.components)
    )
    return TrifoilProblem(problems, curve, vorticity)


def default_seeds(curve: Curve, h: float) -> np.ndarray:
    """One seed a few cells off the knot and one far from it."""
    start = curve.points[0]
    tangent = curve.tangents()[0]
    normal = np.cross(tangent, [0.0, 0.0, 1.0])
    if np.linalg.norm(normal) < 1e-8:
        normal = np.cross(tangent, [1.0, 0.0, 0.0])
    near = start + 3.0 * h * normal / np.linalg.norm(normal)
    seeds = np.array([near, [0.5, 0.5, 0.85]])
    check_inside(seeds)
    return seeds
