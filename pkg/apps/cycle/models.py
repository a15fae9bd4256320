"""
Schedule steps, solver configuration and per-cycle reports.
"""

import math
from dataclasses import dataclass, field

from apps.core.exceptions import ConfigurationError


@dataclass(frozen=True)
class Restrict:
    """Recompute the working source at ``level``; costs level + 1 work units."""

    level: int

    @property
    def work_units(self) -> int:
        return self.level + 1


@dataclass(frozen=True)
class Relax:
    """``count`` relaxation-interpolation passes at ``level``."""

    level: int
    count: int

    @property
    def work_units(self) -> int:
        return self.count


Step = Restrict | Relax


@dataclass(frozen=True)
class CycleSchedule:
    n: int
    n_r: int | None
    steps: tuple[Step, ...]

    @property
    def work_units(self) -> int:
        return sum(step.work_units for step in self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class SolverConfig:
    """
    Stopping and relaxation parameters of a solve.
    ``n_r=None`` removes the cap on relaxations per level.
    """

    n_r: int | None = 2
    tol: float = 1e-12
    max_cycles: int = 50
    safety: float = 0.9
    stagnation_cycles: int = 3

    def __post_init__(self) -> None:
        if self.n_r is not None and self.n_r < 1:
            raise ConfigurationError(f"n_r must be at least 1, got {self.n_r}.")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ConfigurationError(f"Tolerance must be positive, got {self.tol}.")
        if self.max_cycles < 1:
            raise ConfigurationError(f"max_cycles must be at least 1, got {self.max_cycles}.")
        if not 0.0 < self.safety <= 1.0:
            raise ConfigurationError(f"Safety factor must lie in (0, 1], got {self.safety}.")
        if self.stagnation_cycles < 1:
            raise ConfigurationError(
                f"stagnation_cycles must be at least 1, got {self.stagnation_cycles}."
            )


@dataclass(frozen=True)
class DiagnosticSample:
    """Normalized diagnostic residual read off one relaxation pass."""

    index: int
    level: int
    residual: float


@dataclass(frozen=True)
class CycleRecord:
    cycle: int
    work_units: int  # cumulative
    residual: float
    trace: tuple[DiagnosticSample, ...] = ()
    l1_error: float | None = None

    @property
    def diag_residual_min(self) -> float:
        return min((sample.residual for sample in self.trace), default=math.nan)


@dataclass
class SolveReport:
    records: list[CycleRecord] = field(default_factory=list)
    converged: bool = False
    stagnated: bool = False
    reference_norm: float = 1.0

    @property
    def cycles(self) -> int:
        return len(self.records)

    @property
    def residuals(self) -> list[float]:
        return [record.residual for record in self.records]

    @property
    def final_residual(self) -> float:
        return self.records[-1].residual if self.records else math.nan

    @property
    def work_units(self) -> int:
        return self.records[-1].work_units if self.records else 0
