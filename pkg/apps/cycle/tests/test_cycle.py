import math

import numpy as np
import pytest

from apps.core.exceptions import ConfigurationError
from apps.core.tests.factories import RandomFieldFactory, SolverConfigFactory
from apps.cycle.models import CycleRecord, DiagnosticSample, Relax, Restrict, SolveReport, SolverConfig
from apps.cycle.services import (
    SGMLSolver,
    build_schedule,
    closed_form_work_units,
    pure_neumann_pin,
    relax_count,
)
from apps.grid.models import Field
from apps.grid.services import make_grid
from apps.kernels.executor import KernelExecutor
from apps.kernels.models import BoundarySpec, SolveState
from apps.kernels.services import apply_boundary, residual
from apps.oracle.services import ReferenceSolver
from apps.problems.models import ProblemSpec
from apps.problems.services import capacitor_problem, l1_error, poisson2d_problem, poisson3d_problem
from apps.stencil.models import OperatorCoefficients


def dirichlet_problem(source: Field) -> ProblemSpec:
    grid = source.grid
    return ProblemSpec(
        grid=grid,
        coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
        source=source,
        boundary=BoundarySpec.dirichlet(grid.dim),
    )


def relative_error(u: Field, reference: Field) -> float:
    return float(np.max(np.abs(u.values - reference.values))) / reference.max_abs()


class TestSchedule:
    def test_smallest_schedule(self):
        schedule = build_schedule(2, 1)
        assert schedule.steps == (
            Restrict(1),
            Relax(1, 1),
            Restrict(1),
            Relax(1, 1),
            Restrict(0),
            Relax(0, 1),
            Relax(0, 1),
        )
        assert schedule.work_units == 9

    def test_cap_applies_everywhere(self):
        schedule = build_schedule(5, 2)
        assert {step.count for step in schedule if isinstance(step, Relax)} == {2}

    def test_uncapped_counts_double(self):
        counts = [step.count for step in build_schedule(3, None) if isinstance(step, Relax)]
        assert counts == [2, 4, 4, 8, 8, 8, 8]

    def test_levels_descend_within_each_sweep(self):
        levels = [step.level for step in build_schedule(3, 2) if isinstance(step, Restrict)]
        assert levels == [2, 2, 1, 2, 1, 0]

    @pytest.mark.parametrize("n", range(1, 9))
    @pytest.mark.parametrize("n_r", [1, 2, 8, None])
    def test_closed_form(self, n, n_r):
        assert build_schedule(n, n_r).work_units == closed_form_work_units(n, n_r)

    def test_relax_count(self):
        assert relax_count(4, 2, 3) == 2
        assert relax_count(4, 8, 3) == 2
        assert relax_count(4, None, 0) == 16

    @pytest.mark.parametrize("n, n_r", [(0, 2), (3, 0)])
    def test_rejects_invalid(self, n, n_r):
        with pytest.raises(ConfigurationError):
            build_schedule(n, n_r)


class TestSolverConfig:
    @pytest.mark.parametrize(
        "overrides",
        [{"n_r": 0}, {"tol": 0.0}, {"tol": math.inf}, {"max_cycles": 0}, {"safety": 1.5}, {"stagnation_cycles": 0}],
    )
    def test_rejects_invalid(self, overrides):
        with pytest.raises(ConfigurationError):
            SolverConfigFactory(**overrides)

    def test_uncapped(self):
        assert SolverConfig(n_r=None).n_r is None


class TestReport:
    def test_empty_report(self):
        report = SolveReport()
        assert report.cycles == 0
        assert report.work_units == 0
        assert math.isnan(report.final_residual)

    def test_diag_residual_min(self):
        record = CycleRecord(0, 10, 0.5, (DiagnosticSample(0, 1, 0.3), DiagnosticSample(1, 0, 0.2)))
        assert record.diag_residual_min == 0.2
        assert math.isnan(CycleRecord(0, 0, 1.0).diag_residual_min)


class TestPureNeumannPin:
    def test_constant(self):
        u = pure_neumann_pin(Field.full(make_grid(2, 3), 5.0))
        assert np.allclose(u.values, 0.0, atol=1e-14)

    def test_zero_mean_unchanged(self):
        u = RandomFieldFactory()
        u = Field(u.grid, u.values - u.integral())
        assert np.allclose(pure_neumann_pin(u).values, u.values, atol=1e-14)

    def test_shift_equivariance(self):
        u = RandomFieldFactory()
        shifted = Field(u.grid, u.values + 3.0)
        assert np.allclose(pure_neumann_pin(shifted).values, pure_neumann_pin(u).values, atol=1e-13)


class TestSingleCycle:
    def test_zero_source_leaves_state(self):
        problem = dirichlet_problem(Field.zeros(make_grid(2, 4)))
        solver = SGMLSolver()
        state = SolveState.initial(Field.zeros(problem.grid), problem.source, problem.coefficients.sigma)
        state, _, trace = solver.single_cycle(problem, state, build_schedule(4))
        assert np.all(state.u.values == 0.0)
        assert all(sample.residual == 0.0 for sample in trace)

    @pytest.mark.parametrize("dim, n", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3)])
    @pytest.mark.parametrize("n_r", [1, 2, 8])
    def test_measured_work_units(self, dim, n, n_r):
        problem = poisson2d_problem(n) if dim == 2 else poisson3d_problem(n)
        solver = SGMLSolver(KernelExecutor())
        schedule = build_schedule(n, n_r)
        state = SolveState.initial(
            apply_boundary(Field.zeros(problem.grid), problem.boundary), problem.source, problem.coefficients.sigma
        )
        _, units, trace = solver.single_cycle(problem, state, schedule)
        assert units == closed_form_work_units(n, n_r)
        assert len(trace) == sum(step.count for step in schedule if isinstance(step, Relax))

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [7, 8])
    @pytest.mark.parametrize("n_r", [1, 2, 8])
    def test_measured_work_units_large(self, n, n_r):
        problem = poisson2d_problem(n)
        state = SolveState.initial(Field.zeros(problem.grid), problem.source, problem.coefficients.sigma)
        _, units, _ = SGMLSolver().single_cycle(problem, state, build_schedule(n, n_r))
        assert units == closed_form_work_units(n, n_r)

    def test_last_pass_diagnostic_is_true_residual(self):
        problem = poisson2d_problem(4)
        solver = SGMLSolver()
        reference = solver.reference_norm(problem)
        state = SolveState.initial(Field.zeros(problem.grid), problem.source, problem.coefficients.sigma)
        state, _, trace = solver.single_cycle(problem, state, build_schedule(4), reference_norm=reference)
        true = residual(state.u_prev, problem.source, problem.coefficients, problem.boundary).max_abs()
        assert trace[-1].level == 0
        assert trace[-1].residual == pytest.approx(true / reference, rel=1e-12)

    def test_linear_in_source(self):
        grid = make_grid(2, 4)
        f1 = apply_boundary(RandomFieldFactory(grid=grid, seed=1), BoundarySpec.dirichlet(2), homogeneous=True)
        f2 = apply_boundary(RandomFieldFactory(grid=grid, seed=2), BoundarySpec.dirichlet(2), homogeneous=True)
        schedule = build_schedule(4)
        solver = SGMLSolver()

        def run(source: Field) -> np.ndarray:
            problem = dirichlet_problem(source)
            state = SolveState.initial(Field.zeros(grid), source, problem.coefficients.sigma)
            return solver.single_cycle(problem, state, schedule)[0].u.values

        assert np.allclose(run(f1 + f2), run(f1) + run(f2), rtol=0, atol=1e-12 * np.max(np.abs(run(f1))))


class TestSolve:
    def test_zero_source_converges_in_one_cycle(self):
        u, report = SGMLSolver().solve(dirichlet_problem(Field.zeros(make_grid(2, 4))), SolverConfigFactory())
        assert np.all(u.values == 0.0)
        assert report.converged
        assert report.cycles == 1
        assert report.reference_norm == 1.0

    @pytest.mark.parametrize("problem_factory, n", [(poisson2d_problem, 4), (poisson2d_problem, 5), (poisson3d_problem, 4)])
    def test_matches_reference_solution(self, problem_factory, n):
        problem = problem_factory(n)
        u, report = SGMLSolver().solve(problem, SolverConfigFactory(tol=1e-12))
        assert relative_error(u, ReferenceSolver().solve(problem)) <= 1e-10
        assert report.final_residual <= 1e-10

    def test_residuals_decrease(self):
        _, report = SGMLSolver().solve(poisson2d_problem(5), SolverConfigFactory(tol=1e-11))
        residuals = report.residuals
        assert report.converged
        assert all(later < earlier for earlier, later in zip(residuals, residuals[1:]))

    def test_records_work_units_and_error(self):
        problem = poisson2d_problem(4)
        u, report = SGMLSolver().solve(problem, SolverConfigFactory(tol=1e-6))
        per_cycle = build_schedule(4, 2).work_units
        assert [record.work_units for record in report.records] == [
            per_cycle * (k + 1) for k in range(report.cycles)
        ]
        assert all(record.l1_error is not None for record in report.records)
        assert report.records[-1].l1_error == pytest.approx(l1_error(u, problem.exact))

    def test_max_cycles_reports_not_converged(self):
        _, report = SGMLSolver().solve(poisson2d_problem(5), SolverConfigFactory(max_cycles=1))
        assert not report.converged
        assert report.cycles == 1

    def test_capacitor_matches_reference_solution(self):
        problem = capacitor_problem(3)
        u, report = SGMLSolver().solve(problem, SolverConfigFactory(tol=1e-12))
        assert relative_error(u, ReferenceSolver().solve(problem)) <= 1e-10

    def test_pure_neumann_zero_mean(self):
        grid = make_grid(2, 4)
        problem = ProblemSpec(
            grid=grid,
            coefficients=OperatorCoefficients(Field.full(grid, 1.0)),
            source=Field.from_function(grid, lambda x, y: np.cos(np.pi * x) * np.cos(np.pi * y) + 0.3),
            boundary=BoundarySpec.neumann(2),
        )
        u, report = SGMLSolver().solve(problem, SolverConfigFactory(tol=1e-10, max_cycles=200))
        assert report.converged
        assert u.integral() == pytest.approx(0.0, abs=1e-12)
        assert u.is_finite()

    def test_bit_identical_across_thread_counts(self):
        problem = poisson2d_problem(5)
        config = SolverConfigFactory(tol=1e-12)
        with KernelExecutor(1) as single, KernelExecutor(4) as pool:
            u1, report1 = SGMLSolver(single).solve(problem, config)
            u4, report4 = SGMLSolver(pool).solve(problem, config)
        assert np.array_equal(u1.values, u4.values)
        assert report1.residuals == report4.residuals

    def test_repeated_runs_identical(self):
        problem = poisson2d_problem(4)
        config = SolverConfigFactory(tol=1e-12)
        first = SGMLSolver().solve(problem, config)[1]
        second = SGMLSolver().solve(problem, config)[1]
        assert first.residuals == second.residuals
        assert [r.trace for r in first.records] == [r.trace for r in second.records]

    def test_additivity(self):
        grid = make_grid(2, 4)
        f1 = Field.from_function(grid, lambda x, y: np.sin(np.pi * x) * y)
        f2 = Field.from_function(grid, lambda x, y: x * x - y)
        config = SolverConfigFactory(tol=1e-12)
        solver = SGMLSolver()
        u1 = solver.solve(dirichlet_problem(f1), config)[0]
        u2 = solver.solve(dirichlet_problem(f2), config)[0]
        u12 = solver.solve(dirichlet_problem(f1 + f2), config)[0]
        assert np.allclose(u12.values, u1.values + u2.values, rtol=0, atol=1e-11)

    def test_first_cycle_residual_on_129(self):
        _, report = SGMLSolver().solve(poisson2d_problem(7), SolverConfigFactory(max_cycles=1))
        assert report.residuals[0] <= 0.1

    def test_stagnation_stops_early(self):
        problem = poisson2d_problem(4)
        _, report = SGMLSolver().solve(problem, SolverConfigFactory(tol=1e-30, max_cycles=500))
        assert report.stagnated
        assert report.cycles < 500


@pytest.mark.slow
class TestDeskScale:
    def test_machine_precision(self):
        _, report = SGMLSolver().solve(poisson2d_problem(8), SolverConfigFactory(tol=1e-10, max_cycles=25))
        assert report.converged
        residuals = report.residuals
        assert all(later < earlier for earlier, later in zip(residuals, residuals[1:]))

    def test_precision_floor_on_129(self):
        _, report = SGMLSolver().solve(poisson2d_problem(7), SolverConfigFactory(tol=1e-12, max_cycles=25))
        assert report.converged

    def test_per_cycle_reduction(self):
        _, report = SGMLSolver().solve(poisson2d_problem(8), SolverConfigFactory(tol=1e-30, max_cycles=5))
        residuals = report.residuals
        factor = (1.0 / residuals[4]) ** (1.0 / 5.0)
        assert factor >= 10.0

    def test_first_cycle_residual_on_257(self):
        _, report = SGMLSolver().solve(poisson2d_problem(8), SolverConfigFactory(max_cycles=1))
        assert report.residuals[0] <= 0.1

    def test_discretization_order(self):
        config = SolverConfigFactory(tol=1e-12)
        errors = []
        for n in (6, 7):
            problem = poisson2d_problem(n)
            errors.append(l1_error(SGMLSolver().solve(problem, config)[0], problem.exact))
        assert 3.0 <= errors[0] / errors[1] <= 5.0
