"""
Full-grid kernels of the single-grid multi-level cycle.

* ``restriction``: a copy pass followed by ``level`` separable averaging passes.
* ``relaxation_interpolation``: one explicit pseudo-time step on the level subset
  and multilinear interpolation of the last variation everywhere else.
* ``residual``, ``zero_mean_projection`` and ``apply_boundary``: helpers the
  cycle driver runs between cycles.

Every kernel partitions its output along axis 0 through a ``KernelExecutor``;
each call of ``restriction`` or ``relaxation_interpolation`` records its work
units on that executor.
"""

import logging

import numpy as np

from apps.core.exceptions import ConfigurationError, NumericalError
from apps.grid.models import Field, Grid
from apps.stencil.models import OperatorCoefficients
from apps.stencil.services import diffusion_array, diffusion_rows, pad, stable_step_rows

from .executor import KernelExecutor
from .models import BoundaryData, BoundarySpec, SolveState

logger = logging.getLogger(__name__)


def _averaging_sweep(values: np.ndarray, axis: int, lam: int, executor: KernelExecutor) -> np.ndarray:
    """0.5 c + 0.25 (c - lam + c + lam) along one axis, mirror images beyond the faces."""
    pad_width = [(0, 0)] * values.ndim
    pad_width[axis] = (lam, lam)
    padded = np.pad(values, pad_width, mode="reflect")
    out = np.empty_like(values)
    length = values.shape[axis]

    def shifted(rows: slice, shift: int) -> np.ndarray:
        index: list[slice] = [rows] + [slice(None)] * (values.ndim - 1)
        if axis == 0:
            index[0] = slice(rows.start + lam + shift, rows.stop + lam + shift)
        else:
            index[axis] = slice(lam + shift, lam + shift + length)
        return padded[tuple(index)]

    def kernel(rows: slice) -> None:
        out[rows] = 0.5 * shifted(rows, 0) + 0.25 * (shifted(rows, -lam) + shifted(rows, lam))

    executor.run(kernel, values.shape[0])
    return out


def restriction_pass(values: np.ndarray, lam: int, executor: KernelExecutor) -> np.ndarray:
    """One averaging pass at distance ``lam``; the tensor-hat weights factor by axis."""
    for axis in range(values.ndim):
        values = _averaging_sweep(values, axis, lam, executor)
    return values


def restriction(f: Field, level: int, executor: KernelExecutor | None = None) -> Field:
    """
    Source smoothed for ``level``: a copy, then averaging at distances 1, 2, ..., 2^(level-1).
    Costs ``level + 1`` work units; ``restriction(f, 0)`` equals ``f``.
    """
    executor = executor or KernelExecutor()
    if not 0 <= level < max(f.grid.n, 1):
        raise ConfigurationError(f"Level {level} is outside 0..{f.grid.n - 1}.")
    values = f.values.copy()
    executor.count_pass()
    for m in range(level):
        values = restriction_pass(values, 2**m, executor)
        executor.count_pass()
    return Field(f.grid, values)


def prolongate_rows(coarse: np.ndarray, lam: int, N: int, rows: slice) -> np.ndarray:
    """Separable multilinear interpolation of a level subset onto ``rows`` of the full grid."""
    result = coarse
    points = coarse.shape[0]
    for axis in range(coarse.ndim):
        fine = np.arange(rows.start, rows.stop) if axis == 0 else np.arange(N)
        lower = np.minimum(fine // lam, points - 2)
        t = fine / lam - lower
        shape = [1] * coarse.ndim
        shape[axis] = fine.size
        t = t.reshape(shape)
        result = (1.0 - t) * np.take(result, lower, axis=axis) + t * np.take(result, lower + 1, axis=axis)
    return result


def prolongate(coarse: np.ndarray, level: int, grid: Grid, executor: KernelExecutor | None = None) -> Field:
    """Interpolate values given on the level subset to every node of ``grid``."""
    executor = executor or KernelExecutor()
    expected = (grid.level_points(level),) * grid.dim
    if coarse.shape != expected:
        raise ConfigurationError(f"Level {level} values must have shape {expected}, got {coarse.shape}.")
    lam = grid.spacing(level)
    out = np.empty(grid.shape)

    def kernel(rows: slice) -> None:
        out[rows] = prolongate_rows(coarse, lam, grid.N, rows)

    executor.run(kernel, grid.N)
    return Field(grid, out)


def relaxation_interpolation(
    state: SolveState,
    coeff: OperatorCoefficients,
    boundary: BoundarySpec | BoundaryData,
    safety: float = 0.9,
    executor: KernelExecutor | None = None,
) -> SolveState:
    """
    One pass at ``state.level``.

    Nodes off the level subset of ``state.variation_level`` first take the interpolated
    variation of the last pass; when the level has just changed this applies the
    outgoing level's final variation. Level-subset nodes off the Dirichlet faces then
    take an explicit pseudo-time step of ``div(sigma grad u) - g`` with the ``a u`` term
    implicit, and Dirichlet nodes take their prescribed values. ``coeff`` supplies ``a``
    and the normalization, ``state.sigma`` the conductivity restricted to the level.
    """
    executor = executor or KernelExecutor()
    grid = state.grid
    data = BoundaryData.coerce(boundary, grid)
    level = state.level
    lam = grid.spacing(level)
    h_eff = lam * grid.h
    index = grid.level_slices(level)

    u1 = state.u.values
    du_level = state.variation_level
    if du_level > 0:
        base = np.empty(grid.shape)
        du_index = grid.level_slices(du_level)
        du_coarse = state.du.values[du_index]
        du_lam = grid.spacing(du_level)

        def interpolation_kernel(rows: slice) -> None:
            base[rows] = u1[rows] + prolongate_rows(du_coarse, du_lam, grid.N, rows)

        executor.run(interpolation_kernel, grid.N)
        # relaxed nodes of that level already hold their variation
        base[du_index] = u1[du_index]
    else:
        base = u1.copy()

    u_coarse = base[index]
    g_coarse = state.g.values[index]
    shape = u_coarse.shape
    u_padded = pad(u_coarse, data.spec)
    sigma_padded = pad(state.sigma.values[index], None)

    diffusion = np.empty(shape)
    steps = np.empty(shape)

    def relax_kernel(rows: slice) -> None:
        diffusion[rows] = diffusion_rows(u_padded, sigma_padded, shape, h_eff, rows, coeff.normalization)
        steps[rows] = stable_step_rows(sigma_padded, shape, h_eff, safety, rows, coeff.normalization)

    executor.run(relax_kernel, shape[0])

    denominator = 1.0 - steps * coeff.a
    if np.any(denominator <= 0.0):
        raise NumericalError(
            f"Reaction coefficient a={coeff.a} makes the pseudo-time step unstable at level {level}."
        )
    relaxed = (u_coarse + steps * (diffusion - g_coarse)) / denominator

    free = ~data.mask[index]
    defect = np.abs(diffusion + coeff.a * u_coarse - g_coarse)[free]
    diagnostic = float(defect.max()) if defect.size else 0.0

    out = base
    du = np.zeros(grid.shape)
    du[index][free] = relaxed[free] - u_coarse[free]
    out[index][free] = relaxed[free]
    out[data.mask] = data.values[data.mask]

    if not np.all(np.isfinite(out)):
        raise NumericalError(f"Non-finite value produced by the pass at level {level}.")
    executor.count_pass()

    return SolveState(
        u=Field(grid, out),
        u_prev=state.u,
        du=Field(grid, du),
        g=state.g,
        sigma=state.sigma,
        level=level,
        diagnostic=diagnostic,
    )


def residual(
    u: Field,
    f: Field,
    coeff: OperatorCoefficients,
    boundary: BoundarySpec | BoundaryData,
) -> Field:
    """f - (div(sigma grad u) + a u) at every node, zero on Dirichlet nodes."""
    data = BoundaryData.coerce(boundary, u.grid)
    diffusion = diffusion_array(u.values, coeff.sigma.values, data.spec, u.grid.h, coeff.normalization)
    values = f.values - (diffusion + coeff.a * u.values)
    values[data.mask] = 0.0
    return Field(u.grid, values)


def zero_mean_projection(f: Field) -> Field:
    """f minus its trapezoidal mean over the unit domain."""
    return Field(f.grid, f.values - f.integral())


def apply_boundary(u: Field, boundary: BoundarySpec | BoundaryData, homogeneous: bool = False) -> Field:
    """Copy of ``u`` with the Dirichlet nodes set to their data (zero when ``homogeneous``)."""
    data = BoundaryData.coerce(boundary, u.grid)
    values = u.values.copy()
    values[data.mask] = 0.0 if homogeneous else data.values[data.mask]
    return Field(u.grid, values)
