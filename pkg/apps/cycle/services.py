"""
Saw-shaped single cycle and the residual recurrence that drives it to the
algebraic solution.

Cycle 0 solves with the true source and boundary data; every later cycle starts
from zero with homogeneous boundary data and the residual of the accumulated
solution as source, and its result is added to the solution.
"""

import logging
import math
import weakref
from typing import Protocol

from apps.core.exceptions import ConfigurationError, NumericalError
from apps.grid.models import Field
from apps.kernels.executor import KernelExecutor
from apps.kernels.models import BoundaryData, SolveState
from apps.kernels.services import (
    apply_boundary,
    relaxation_interpolation,
    residual,
    restriction,
    zero_mean_projection,
)
from apps.problems.models import ProblemSpec
from apps.problems.services import l1_error

from .models import (
    CycleRecord,
    CycleSchedule,
    DiagnosticSample,
    Relax,
    Restrict,
    SolveReport,
    SolverConfig,
    Step,
)

logger = logging.getLogger(__name__)


def relax_count(n: int, n_r: int | None, sweep: int) -> int:
    count = 2 ** (n - sweep)
    return count if n_r is None else min(n_r, count)


def build_schedule(n: int, n_r: int | None = 2) -> CycleSchedule:
    """
    For each sweep v1 = n-1 .. 0 visit levels n-1 down to v1, restricting then
    relaxing at each; finish with extra relaxations at level 0.
    """
    if n < 1:
        raise ConfigurationError(f"Schedule needs n >= 1, got {n}.")
    if n_r is not None and n_r < 1:
        raise ConfigurationError(f"n_r must be at least 1, got {n_r}.")
    steps: list[Step] = []
    for sweep in range(n - 1, -1, -1):
        count = relax_count(n, n_r, sweep)
        for level in range(n - 1, sweep - 1, -1):
            steps.append(Restrict(level))
            steps.append(Relax(level, count))
    steps.append(Relax(0, relax_count(n, n_r, 0)))
    return CycleSchedule(n=n, n_r=n_r, steps=tuple(steps))


def closed_form_work_units(n: int, n_r: int | None = 2) -> int:
    """Work units of one cycle: sum over sweeps of restriction and relaxation costs."""
    total = relax_count(n, n_r, 0)
    for sweep in range(n):
        levels = range(sweep, n)
        total += sum(level + 1 for level in levels) + len(levels) * relax_count(n, n_r, sweep)
    return total


def pure_neumann_pin(u: Field) -> Field:
    """Zero-mean representative of a solution defined up to a constant."""
    return Field(u.grid, u.values - u.integral())


class SolverInterface(Protocol):
    def solve(self, problem: ProblemSpec, config: SolverConfig) -> tuple[Field, SolveReport]: ...


class SGMLSolver:
    """Single-grid multi-level solver running its passes on one executor."""

    def __init__(self, executor: KernelExecutor | None = None):
        self.executor = executor or KernelExecutor()
        self._sigma_levels: weakref.WeakKeyDictionary[ProblemSpec, list[Field]] = (
            weakref.WeakKeyDictionary()
        )

    def sigma_levels(self, problem: ProblemSpec) -> list[Field]:
        """Conductivity restricted to every level, computed once per problem."""
        levels = self._sigma_levels.get(problem)
        if levels is None:
            sigma = problem.coefficients.sigma
            scratch = KernelExecutor(self.executor.threads)
            try:
                levels = [restriction(sigma, level, scratch) for level in problem.grid.levels]
            finally:
                scratch.close()
            self._sigma_levels[problem] = levels
        return levels

    def cycle_source(self, problem: ProblemSpec, source: Field) -> Field:
        if problem.is_pure_neumann:
            return zero_mean_projection(source)
        return source

    def reference_norm(self, problem: ProblemSpec) -> float:
        """Max-norm of the residual of the boundary-only initial state; 1 if that vanishes."""
        u0 = apply_boundary(Field.zeros(problem.grid), problem.boundary)
        source = self.cycle_source(problem, problem.source)
        norm = residual(u0, source, problem.coefficients, problem.boundary).max_abs()
        return norm if norm > 0.0 else 1.0

    def single_cycle(
        self,
        problem: ProblemSpec,
        state: SolveState,
        schedule: CycleSchedule,
        *,
        source: Field | None = None,
        homogeneous: bool = False,
        safety: float = 0.9,
        reference_norm: float = 1.0,
    ) -> tuple[SolveState, int, list[DiagnosticSample]]:
        """
        Run ``schedule`` once from ``state``. Returns the final state, the work units
        spent and the normalized diagnostic residual of every relaxation pass.
        """
        sigma_levels = self.sigma_levels(problem)
        boundary_spec = problem.boundary.homogeneous() if homogeneous else problem.boundary
        boundary = BoundaryData.from_spec(boundary_spec, problem.grid)
        source = problem.source if source is None else source
        coeff = problem.coefficients
        trace: list[DiagnosticSample] = []
        start = self.executor.passes

        for step in schedule:
            if isinstance(step, Restrict):
                g = restriction(source, step.level, self.executor)
                # the outgoing level's last variation is applied by the next pass
                state = SolveState(
                    u=state.u,
                    u_prev=state.u,
                    du=state.du,
                    g=g,
                    sigma=sigma_levels[step.level],
                    level=step.level,
                    du_level=state.variation_level,
                )
                continue
            for _ in range(step.count):
                state = relaxation_interpolation(state, coeff, boundary, safety, self.executor)
                sample = DiagnosticSample(len(trace), step.level, state.diagnostic / reference_norm)
                trace.append(sample)
                logger.debug("pass %d level %d diagnostic %.3e", sample.index, sample.level, sample.residual)

        return state, self.executor.passes - start, trace

    def solve(self, problem: ProblemSpec, config: SolverConfig) -> tuple[Field, SolveReport]:
        grid = problem.grid
        schedule = build_schedule(grid.n, config.n_r)
        sigma_levels = self.sigma_levels(problem)
        reference = self.reference_norm(problem)
        report = SolveReport(reference_norm=reference)
        logger.info(
            "Solving %s on %s^%d nodes: n_r=%s tol=%.1e, %d work units per cycle",
            problem.name or "problem",
            grid.N,
            grid.dim,
            config.n_r,
            config.tol,
            schedule.work_units,
        )

        u: Field | None = None
        source = problem.source
        work_units = 0
        best = math.inf
        stalled = 0
        for cycle in range(config.max_cycles):
            homogeneous = cycle > 0
            cycle_source = self.cycle_source(problem, source)
            start = apply_boundary(Field.zeros(grid), problem.boundary, homogeneous)
            state = SolveState.initial(start, cycle_source, sigma_levels[0])
            state, units, trace = self.single_cycle(
                problem,
                state,
                schedule,
                source=cycle_source,
                homogeneous=homogeneous,
                safety=config.safety,
                reference_norm=reference,
            )
            u = state.u if u is None else u + state.u
            source = residual(u, problem.source, problem.coefficients, problem.boundary)
            if not source.is_finite():
                raise NumericalError(f"Residual became non-finite in cycle {cycle}.")
            value = self.cycle_source(problem, source).max_abs() / reference
            work_units += units

            error = None
            if problem.exact is not None:
                error = l1_error(pure_neumann_pin(u) if problem.is_pure_neumann else u, problem.exact)
            report.records.append(CycleRecord(cycle, work_units, value, tuple(trace), error))
            logger.info("cycle %d: residual %.3e after %d work units", cycle, value, work_units)

            if value <= config.tol:
                report.converged = True
                break
            if value >= best:
                stalled += 1
                if stalled >= config.stagnation_cycles:
                    report.stagnated = True
                    break
            else:
                best = value
                stalled = 0

        if not report.converged:
            logger.warning(
                "%s did not converge: residual %.3e after %d cycles%s",
                problem.name or "problem",
                report.final_residual,
                report.cycles,
                " (stagnated)" if report.stagnated else "",
            )
        assert u is not None
        if problem.is_pure_neumann:
            u = pure_neumann_pin(u)
        return u, report
