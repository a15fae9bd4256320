"""
Grid deformation driven by the potential of a curve source.

The potential solves a pure-Neumann Helmholtz problem with the zero-mean part of
the deposited curve delta. Nodes then follow v = -grad u / (t f + F) in pseudo-time,
where f is the raw deposited source and F its integral.
"""

import logging

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from apps.core.exceptions import ConfigurationError, NumericalError
from apps.grid.models import Field, Grid
from apps.grid.services import make_grid
from apps.kernels.models import BoundarySpec
from apps.kernels.services import zero_mean_projection
from apps.stencil.models import OperatorCoefficients

from ..models import Curve, DeformationProblem, ProblemSpec, VectorField
from .curves import deposit_delta, resample_curve
from .derivatives import gradient

logger = logging.getLogger(__name__)

# smallest admissible |t f + F|
DENOMINATOR_FLOOR = 1e-14


def deformation_problem(curve: Curve, a: float = 0.1, n: int = 6) -> DeformationProblem:
    if a == 0.0:
        raise ConfigurationError("The deformation potential needs a non-zero Helmholtz coefficient.")
    grid = make_grid(curve.dim, n)
    resampled = resample_curve(curve, grid.h)
    raw = deposit_delta(resampled, grid, np.ones(len(resampled)))
    assert isinstance(raw, Field)
    problem = ProblemSpec(
        grid=grid,
        coefficients=OperatorCoefficients(Field.full(grid, 1.0), a=a),
        source=zero_mean_projection(raw),
        boundary=BoundarySpec.neumann(grid.dim),
        name="deformation",
    )
    return DeformationProblem(problem, raw, raw.integral(), resampled)


def _velocity(grad: np.ndarray, raw: np.ndarray, t: float, raw_integral: float) -> np.ndarray:
    denominator = t * raw + raw_integral
    if np.any(np.abs(denominator) < DENOMINATOR_FLOOR):
        raise NumericalError(f"Deformation velocity denominator vanishes at t={t}.")
    return -grad / denominator[..., None]


def deformation_velocity(
    u: Field,
    raw_source: Field,
    t: float,
    raw_integral: float | None = None,
) -> VectorField:
    if raw_integral is None:
        raw_integral = raw_source.integral()
    velocity = _velocity(gradient(u).as_array(), raw_source.values, t, raw_integral)
    return VectorField(tuple(Field(u.grid, velocity[..., axis]) for axis in range(u.grid.dim)))


def move_nodes(
    grid: Grid,
    u: Field,
    raw_source: Field,
    t_end: float = 1.0,
    steps: int = 20,
    raw_integral: float | None = None,
) -> np.ndarray:
    """
    Forward-Euler motion of every node from t = 0 to ``t_end``, sampling the velocity
    multilinearly at the moving positions. Returns positions in linear node order.
    """
    if steps < 1 or t_end < 0.0:
        raise ConfigurationError("Node motion needs steps >= 1 and a non-negative end time.")
    if raw_integral is None:
        raw_integral = raw_source.integral()
    axes = (grid.axis(),) * grid.dim
    grad = RegularGridInterpolator(axes, gradient(u).as_array(), bounds_error=False, fill_value=None)
    raw = RegularGridInterpolator(axes, raw_source.values, bounds_error=False, fill_value=None)

    positions = np.column_stack([c.ravel(order="F") for c in grid.coordinates()])
    dt = t_end / steps
    for step in range(steps):
        velocity = _velocity(grad(positions), raw(positions), step * dt, raw_integral)
        positions = np.clip(positions + dt * velocity, 0.0, 1.0)
    logger.info("Moved %d nodes over %d steps to t=%.3g", len(positions), steps, t_end)
    return positions
