"""
Manufactured Poisson problems and the relative L1 error against their exact solution.
"""

import numpy as np

from apps.core.exceptions import NumericalError
from apps.grid.models import Field
from apps.grid.services import make_grid
from apps.kernels.models import BoundarySpec
from apps.stencil.models import OperatorCoefficients

from ..models import ExactSolution, ProblemSpec


def poisson2d_exact(x, y):
    return -(x**2) * y**2 * (1.0 - x**2) * (1.0 - y**2)


def poisson2d_source(x, y):
    return -((2.0 - 12.0 * x**2) * (y**2 - y**4) + (x**2 - x**4) * (2.0 - 12.0 * y**2))


def poisson3d_exact(x, y, z):
    return np.sin(np.pi * x) * np.sin(np.pi * y) * np.sin(np.pi * z)


def poisson3d_source(x, y, z):
    return -3.0 * np.pi**2 * poisson3d_exact(x, y, z)


def poisson2d_problem(n: int) -> ProblemSpec:
    """Polynomial solution vanishing on the unit square boundary, sigma = 1, a = 0."""
    grid = make_grid(2, n)
    return ProblemSpec(
        grid=grid,
        coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
        source=Field.from_function(grid, poisson2d_source),
        boundary=BoundarySpec.dirichlet(2),
        exact=poisson2d_exact,
        name="poisson2d",
    )


def poisson3d_problem(n: int) -> ProblemSpec:
    """Product-of-sines solution on the unit cube, sigma = 1, a = 0."""
    grid = make_grid(3, n)
    return ProblemSpec(
        grid=grid,
        coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
        source=Field.from_function(grid, poisson3d_source),
        boundary=BoundarySpec.dirichlet(3),
        exact=poisson3d_exact,
        name="poisson3d",
    )


def l1_error(v_h: Field, exact: ExactSolution) -> float:
    """Trapezoidal L1 norm of (u - v_h) relative to that of u."""
    weights = v_h.grid.trapezoid_weights()
    u = np.broadcast_to(exact(*v_h.grid.coordinates()), v_h.grid.shape)
    denominator = float(np.sum(weights * np.abs(u)))
    if denominator == 0.0:
        raise NumericalError("Exact solution has zero L1 norm.")
    return float(np.sum(weights * np.abs(u - v_h.values))) / denominator
