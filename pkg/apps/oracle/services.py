"""
Reference solvers for the discrete system the multi-level solver converges to.

``assemble`` builds the same radial stencil as the kernels (spacing h, mirror
images on Neumann faces) as a sparse matrix; ``reference_solve`` factorises it
directly, ``jacobi_solve`` iterates it.
"""

import logging
from typing import Protocol

import numpy as np
import scipy.linalg as sl
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from apps.core.exceptions import NumericalError, OracleSizeError
from apps.grid.models import Field
from apps.grid.services import mirror_index
from apps.problems.models import ProblemSpec
from apps.stencil.models import stencil_offsets

from .models import AssembledSystem

logger = logging.getLogger(__name__)

DEFAULT_MAX_UNKNOWNS = 40_000
# systems up to this size are factorised densely
DENSE_LIMIT = 2_500
RESIDUAL_WARNING = 1e-12
RESIDUAL_LIMIT = 1e-8


def assemble(problem: ProblemSpec, max_unknowns: int = DEFAULT_MAX_UNKNOWNS) -> AssembledSystem:
    grid = problem.grid
    mask = problem.boundary.dirichlet_mask(grid).ravel(order="F")
    dirichlet = np.where(mask, problem.boundary.dirichlet_values(grid).ravel(order="F"), 0.0)
    unknowns = np.flatnonzero(~mask)
    if unknowns.size > max_unknowns:
        raise OracleSizeError(
            f"{unknowns.size} unknowns exceed the assembly limit of {max_unknowns}."
        )
    numbering = np.full(grid.size, -1)
    numbering[unknowns] = np.arange(unknowns.size)

    sigma = problem.coefficients.sigma.linear()
    stencil = stencil_offsets(grid.dim)
    coefficients = stencil.coefficients(problem.coefficients.normalization)
    idx = np.column_stack(np.unravel_index(unknowns, grid.shape, order="F"))
    mirror = np.vectorize(lambda i: mirror_index(int(i), grid.N))
    strides = grid.N ** np.arange(grid.dim)

    rows, cols, data = [], [], []
    diagonal = np.full(unknowns.size, problem.coefficients.a)
    rhs = problem.source.linear()[unknowns].copy()
    for offset, coefficient in zip(stencil.offsets, coefficients, strict=True):
        neighbour = idx + offset
        outside = (neighbour < 0) | (neighbour >= grid.N)
        if np.any(outside):
            neighbour = np.where(outside, mirror(neighbour), neighbour)
        offsets = neighbour @ strides
        weight = coefficient * 0.5 * (sigma[offsets] + sigma[unknowns]) / grid.h**2
        diagonal -= weight
        target = numbering[offsets]
        coupled = target >= 0
        rows.append(np.flatnonzero(coupled))
        cols.append(target[coupled])
        data.append(weight[coupled])
        rhs[~coupled] -= weight[~coupled] * dirichlet[offsets[~coupled]]

    rows.append(np.arange(unknowns.size))
    cols.append(np.arange(unknowns.size))
    data.append(diagonal)
    matrix = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(unknowns.size, unknowns.size),
    ).tocsr()
    logger.debug("Assembled %d unknowns with %d non-zeros", unknowns.size, matrix.nnz)
    return AssembledSystem(
        grid=grid,
        matrix=matrix,
        rhs=rhs,
        unknowns=unknowns,
        dirichlet_values=dirichlet,
        pure_neumann=problem.is_pure_neumann,
        a=problem.coefficients.a,
    )


def _bordered(system: AssembledSystem) -> tuple[np.ndarray, np.ndarray]:
    """Append the constant null vector and the trapezoidal zero-mean constraint."""
    weights = system.grid.trapezoid_weights().ravel(order="F")[system.unknowns]
    n = system.size
    matrix = np.zeros((n + 1, n + 1))
    matrix[:n, :n] = system.matrix.toarray()
    matrix[:n, n] = 1.0
    matrix[n, :n] = weights
    return matrix, np.append(system.rhs, 0.0)


def _check_residual(system: AssembledSystem, x: np.ndarray, rhs: np.ndarray) -> None:
    if not np.all(np.isfinite(x)):
        raise NumericalError("Reference solve produced non-finite values; the system is singular.")
    scale = max(float(np.max(np.abs(rhs), initial=0.0)), 1e-300)
    relative = float(np.max(np.abs(system.matrix @ x - rhs), initial=0.0)) / scale
    if relative > RESIDUAL_LIMIT:
        raise NumericalError(f"Reference solve is inaccurate (relative residual {relative:.2e}); singular system?")
    if relative > RESIDUAL_WARNING:
        logger.warning("Reference solve relative residual %.2e", relative)


def reference_solve(system: AssembledSystem) -> Field:
    """Direct solution; zero-mean for pure-Neumann systems without a reaction term."""
    rhs = system.rhs
    if system.pure_neumann and system.a == 0.0:
        weights = system.grid.trapezoid_weights().ravel(order="F")[system.unknowns]
        # compatible part of the source
        rhs = rhs - np.dot(weights, rhs) / np.sum(weights)
        bordered, bordered_rhs = _bordered(system)
        bordered_rhs[:-1] = rhs
        x = sl.lu_solve(sl.lu_factor(bordered), bordered_rhs)[:-1]
    elif system.size <= DENSE_LIMIT:
        x = sl.lu_solve(sl.lu_factor(system.matrix.toarray()), rhs)
    else:
        try:
            x = sla.splu(system.matrix.tocsc()).solve(rhs)
        except RuntimeError as exc:
            raise NumericalError(f"Sparse factorisation failed: {exc}") from exc
    _check_residual(system, x, rhs)
    return system.to_field(x)


def jacobi_solve(
    system: AssembledSystem,
    omega: float = 0.8,
    max_iterations: int = 1_000_000,
    tol: float = 1e-13,
) -> Field:
    """Damped Jacobi iteration x += omega (b - A x) / diag(A) from zero."""
    diagonal = system.matrix.diagonal()
    if np.any(diagonal == 0.0):
        raise NumericalError("Jacobi iteration needs a non-zero diagonal.")
    rhs = system.rhs
    scale = max(float(np.max(np.abs(rhs), initial=0.0)), 1e-300)
    x = np.zeros(system.size)
    for iteration in range(max_iterations):
        r = rhs - system.matrix @ x
        if float(np.max(np.abs(r), initial=0.0)) <= tol * scale:
            logger.debug("Jacobi converged after %d iterations", iteration)
            break
        x += omega * r / diagonal
    else:
        logger.warning("Jacobi stopped after %d iterations without reaching %.1e", max_iterations, tol)
    return system.to_field(x)


class ReferenceSolverInterface(Protocol):
    def solve(self, problem: ProblemSpec) -> Field: ...


class ReferenceSolver:
    """Assemble-and-factorise oracle for small problems."""

    def __init__(self, max_unknowns: int | None = DEFAULT_MAX_UNKNOWNS):
        self.max_unknowns = max_unknowns or DEFAULT_MAX_UNKNOWNS

    def assemble(self, problem: ProblemSpec) -> AssembledSystem:
        return assemble(problem, self.max_unknowns)

    def solve(self, problem: ProblemSpec) -> Field:
        return reference_solve(self.assemble(problem))
