"""
Subcommands reproducing the experiments. Each writes its files under ``config.out``
and returns the process exit code: 0 when every solve converged, 2 otherwise.
"""

import logging
import time

import numpy as np

from apps.core.containers import AppContainer, container
from apps.cycle.models import SolveReport, SolverConfig
from apps.cycle.services import SGMLSolver, build_schedule, closed_form_work_units
from apps.grid.models import Field
from apps.kernels.models import SolveState
from apps.kernels.services import apply_boundary
from apps.problems.models import CapacitorMode, Curve, VectorField
from apps.problems.services import (
    capacitor_problem,
    circle_curve,
    curl,
    default_seeds,
    deformation_problem,
    divergence,
    gradient,
    integrate_streamline,
    move_nodes,
    poisson2d_problem,
    poisson3d_problem,
    trifoil_problem,
)

from .models import RunConfig
from .writers import (
    read_points_csv,
    write_field_vtk,
    write_points_csv,
    write_report_csv,
    write_table_csv,
    write_trace_csv,
)

logger = logging.getLogger(__name__)

SUCCESS = 0
NOT_CONVERGED = 2


class BaseCommand:
    """Base class of the subcommands."""

    help = ""
    # per-command fallbacks for flags the user did not give
    initial: dict[str, object] = {}

    def __init__(self, app: AppContainer | None = None):
        self.app = app or container

    def solver(self):
        return self.app.solver()

    def solver_config(self, config: RunConfig) -> SolverConfig:
        return self.app.solver_config(
            n_r=config.n_r,
            tol=config.tol,
            max_cycles=config.max_cycles,
            safety=config.safety,
        )

    def exit_code(self, *reports: SolveReport) -> int:
        return SUCCESS if all(report.converged for report in reports) else NOT_CONVERGED

    def write_reports(self, report: SolveReport, config: RunConfig, suffix: str = "") -> None:
        write_report_csv(report, config.out / f"report{suffix}.csv")
        write_trace_csv(report, config.out / f"trace{suffix}.csv")

    def handle(self, config: RunConfig) -> int:
        raise NotImplementedError


class ConvergenceCommand(BaseCommand):
    help = "2D Poisson problem with a polynomial exact solution; residual and L1 error per cycle."
    initial = {"n": 7, "dim": 2}

    def handle(self, config: RunConfig) -> int:
        problem = poisson2d_problem(config.n)
        u, report = self.solver().solve(problem, self.solver_config(config))
        self.write_reports(report, config)
        write_field_vtk(u, config.out / "u.vtk", "u")
        return self.exit_code(report)


class DeformCommand(BaseCommand):
    help = "Potential of a curve source and the nodes it attracts."
    initial = {"n": 6, "dim": 2, "a": 0.1, "t": 1.0, "steps": 20}

    def curve(self, config: RunConfig) -> Curve:
        if config.curve is None:
            return circle_curve()
        return Curve(read_points_csv(config.curve), closed=config.closed)

    def handle(self, config: RunConfig) -> int:
        deformation = deformation_problem(self.curve(config), config.a, config.n)
        problem = deformation.problem
        u, report = self.solver().solve(problem, self.solver_config(config))
        self.write_reports(report, config)
        write_field_vtk(u, config.out / "potential.vtk", "u")
        positions = move_nodes(
            problem.grid,
            u,
            deformation.raw_source,
            config.t,
            config.steps,
            deformation.raw_integral,
        )
        write_points_csv(positions, config.out / "nodes.csv")
        write_points_csv(deformation.curve.points, config.out / "curve.csv")
        return self.exit_code(report)


class TrifoilCommand(BaseCommand):
    help = "Vector potential, velocity and streamlines of a trefoil-knot vortex."
    initial = {"n": 5, "dim": 3, "r": 0.14, "steps": 4000}

    def handle(self, config: RunConfig) -> int:
        trifoil = trifoil_problem(config.n, config.r)
        solver = self.solver()
        solver_config = self.solver_config(config)
        components, reports = [], []
        for problem in trifoil.problems:
            psi, report = solver.solve(problem, solver_config)
            self.write_reports(report, config, f"_{problem.name}")
            components.append(psi)
            reports.append(report)

        psi = VectorField(tuple(components))
        velocity = curl(psi)
        write_field_vtk(psi, config.out / "psi.vtk", "psi")
        write_field_vtk(velocity, config.out / "velocity.vtk", "v")
        write_field_vtk(divergence(velocity), config.out / "div_v.vtk", "div_v")
        write_points_csv(trifoil.curve.points, config.out / "curve.csv")

        grid = trifoil.problems[0].grid
        seeds = read_points_csv(config.seeds) if config.seeds else default_seeds(trifoil.curve, grid.h)
        for index, seed in enumerate(seeds):
            line = integrate_streamline(velocity, seed, 0.5 * grid.h, config.steps)
            logger.info("Streamline %d: %d points, %s", index, len(line), line.reason)
            write_points_csv(line.points, config.out / f"streamline_{index}.csv")
        return self.exit_code(*reports)


class CapacitorCommand(BaseCommand):
    help = "Potential and force lines between two plates around a conductivity sphere."
    initial = {"n": 5, "dim": 3}

    def handle(self, config: RunConfig) -> int:
        modes = [config.mode] if config.mode else list(CapacitorMode)
        solver = self.solver()
        reports = []
        for mode in modes:
            problem = capacitor_problem(config.n, mode)
            u, report = solver.solve(problem, self.solver_config(config))
            self.write_reports(report, config, f"_{mode}")
            write_field_vtk(u, config.out / f"u_{mode}.vtk", "u")
            write_field_vtk(gradient(u), config.out / f"force_{mode}.vtk", "F")
            reports.append(report)
        return self.exit_code(*reports)


class BenchCommand(BaseCommand):
    help = "Work units and wall time of one cycle for a range of grid sizes."
    initial = {"n": 9, "n_min": 5, "dim": 2}

    def handle(self, config: RunConfig) -> int:
        rows = []
        for n in range(config.n_min, config.n + 1):
            problem = poisson2d_problem(n) if config.dim == 2 else poisson3d_problem(n)
            solver: SGMLSolver = self.solver()
            schedule_units = closed_form_work_units(n, config.n_r)
            schedule = build_schedule(n, config.n_r)
            solver.sigma_levels(problem)
            start = apply_boundary(Field.zeros(problem.grid), problem.boundary)
            state = SolveState.initial(start, problem.source, problem.coefficients.sigma)

            clock = time.perf_counter()
            _, units, _ = solver.single_cycle(problem, state, schedule, safety=config.safety)
            elapsed = time.perf_counter() - clock

            nodes = problem.grid.size
            rows.append(
                {
                    "n": n,
                    "nodes": nodes,
                    "work_units": units,
                    "schedule_work_units": schedule_units,
                    "node_updates": units * nodes,
                    "wall_time_s": float(elapsed),
                    "nodes_per_second": float(units * nodes / elapsed) if elapsed > 0 else float(np.inf),
                }
            )
            logger.info("n=%d: %d work units in %.3fs", n, units, elapsed)
        write_table_csv(rows, config.out / "bench.csv")
        return SUCCESS
