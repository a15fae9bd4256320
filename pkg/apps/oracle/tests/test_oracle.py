from dataclasses import replace

import numpy as np
import pytest

from apps.core.exceptions import NumericalError, OracleSizeError
from apps.core.tests.factories import RandomFieldFactory
from apps.grid.models import Field
from apps.grid.services import make_grid
from apps.kernels.models import BoundarySpec
from apps.kernels.services import apply_boundary
from apps.oracle.services import ReferenceSolver, assemble, jacobi_solve, reference_solve
from apps.problems.models import ProblemSpec
from apps.problems.services import capacitor_problem, l1_error, poisson2d_problem, poisson3d_problem
from apps.stencil.models import OperatorCoefficients
from apps.stencil.services import operator_field


def random_sigma_problem(dim: int, n: int, boundary: BoundarySpec, a: float = 0.0) -> ProblemSpec:
    grid = make_grid(dim, n)
    sigma = Field(grid, 1.0 + np.abs(RandomFieldFactory(grid=grid, seed=dim).values))
    return ProblemSpec(
        grid=grid,
        coefficients=OperatorCoefficients(sigma, a=a),
        source=RandomFieldFactory(grid=grid, seed=10 + dim),
        boundary=boundary,
    )


class TestAssemble:
    @pytest.mark.parametrize("dim", [2, 3])
    def test_symmetric_for_dirichlet(self, dim):
        matrix = assemble(random_sigma_problem(dim, 3, BoundarySpec.dirichlet(dim))).matrix
        difference = abs(matrix - matrix.T).max()
        assert difference <= 1e-13 * abs(matrix).max()

    @pytest.mark.parametrize("dim", [2, 3])
    def test_gershgorin_discs_in_left_half_line(self, dim):
        matrix = assemble(random_sigma_problem(dim, 2, BoundarySpec.dirichlet(dim))).matrix.toarray()
        diagonal = np.diag(matrix)
        off_diagonal = np.sum(np.abs(matrix), axis=1) - np.abs(diagonal)
        assert np.all(diagonal < 0.0)
        assert np.all(diagonal + off_diagonal <= 1e-10 * np.abs(diagonal))

    @pytest.mark.parametrize("dim", [2, 3])
    def test_matches_kernel_operator(self, dim):
        problem = random_sigma_problem(dim, 3, BoundarySpec.dirichlet(dim, 0.5), a=-0.3)
        system = assemble(problem)
        u = apply_boundary(RandomFieldFactory(grid=problem.grid, seed=5), problem.boundary)
        applied = operator_field(u, problem.coefficients, problem.boundary).ravel(order="F")[system.unknowns]
        # the folded Dirichlet data moves from the operator to the right-hand side
        folded = problem.source.linear()[system.unknowns] - system.rhs
        assert np.allclose(system.matrix @ system.restrict(u) + folded, applied, rtol=1e-12, atol=1e-10)

    def test_matches_kernel_operator_mixed_faces(self):
        problem = capacitor_problem(3)
        system = assemble(problem)
        u = apply_boundary(RandomFieldFactory(grid=problem.grid, seed=6), problem.boundary)
        applied = operator_field(u, problem.coefficients, problem.boundary).ravel(order="F")[system.unknowns]
        folded = problem.source.linear()[system.unknowns] - system.rhs
        assert np.allclose(system.matrix @ system.restrict(u) + folded, applied, rtol=1e-12, atol=1e-10)

    def test_neumann_rows_sum_to_zero(self):
        system = assemble(random_sigma_problem(2, 3, BoundarySpec.neumann(2)))
        assert system.size == 81
        assert np.allclose(system.matrix @ np.ones(system.size), 0.0, atol=1e-10)

    def test_size_guard(self):
        with pytest.raises(OracleSizeError):
            assemble(poisson2d_problem(5), max_unknowns=100)
        with pytest.raises(OracleSizeError):
            ReferenceSolver(max_unknowns=100).solve(poisson2d_problem(5))

    def test_unknowns_exclude_dirichlet_nodes(self):
        system = assemble(poisson2d_problem(3))
        assert system.size == 49
        assert system.to_field(np.zeros(49)).max_abs() == 0.0


class TestReferenceSolve:
    def test_zero_source(self):
        grid = make_grid(2, 3)
        problem = ProblemSpec(
            grid=grid,
            coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
            source=Field.zeros(grid),
            boundary=BoundarySpec.dirichlet(2),
        )
        assert np.all(reference_solve(assemble(problem)).values == 0.0)

    def test_dirichlet_data(self):
        grid = make_grid(2, 3)
        problem = ProblemSpec(
            grid=grid,
            coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
            source=Field.zeros(grid),
            boundary=BoundarySpec.dirichlet(2, lambda x, y: x + 2 * y),
        )
        u = reference_solve(assemble(problem))
        x, y = grid.coordinates()
        assert np.allclose(u.values, x + 2 * y, atol=1e-12)

    def test_sparse_and_dense_agree(self):
        problem = poisson3d_problem(4)
        system = assemble(problem)
        assert system.size > 2_500
        dense = np.linalg.solve(system.matrix.toarray(), system.rhs)
        assert np.allclose(system.restrict(reference_solve(system)), dense, rtol=1e-10, atol=1e-12)

    def test_jacobi_agrees_with_factorisation(self):
        system = assemble(poisson2d_problem(3))
        direct = reference_solve(system)
        iterated = jacobi_solve(system)
        assert np.max(np.abs(direct.values - iterated.values)) <= 1e-8 * direct.max_abs()

    def test_pure_neumann_zero_mean(self):
        grid = make_grid(2, 3)
        problem = ProblemSpec(
            grid=grid,
            coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
            source=Field.from_function(grid, lambda x, y: np.cos(np.pi * x) + 0.2),
            boundary=BoundarySpec.neumann(2),
        )
        system = assemble(problem)
        u = reference_solve(system)
        assert u.integral() == pytest.approx(0.0, abs=1e-12)
        projected = system.rhs - np.dot(grid.trapezoid_weights().ravel(order="F"), system.rhs)
        assert np.allclose(system.matrix @ u.linear(), projected, atol=1e-9)

    def test_singular_system(self):
        grid = make_grid(2, 2)
        problem = ProblemSpec(
            grid=grid,
            coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
            source=Field.full(grid, 1.0),
            boundary=BoundarySpec.neumann(2),
        )
        # without the zero-mean border the constant null space is left in place
        system = replace(assemble(problem), pure_neumann=False)
        with pytest.raises(NumericalError):
            reference_solve(system)

    def test_discretization_order(self):
        errors = []
        for n in (4, 5, 6):
            problem = poisson2d_problem(n)
            errors.append(l1_error(ReferenceSolver().solve(problem), problem.exact))
        assert 3.0 <= errors[0] / errors[1] <= 5.0
        assert 3.0 <= errors[1] / errors[2] <= 5.0
