"""
Validated parameters of one command-line run.
"""

from dataclasses import dataclass
from pathlib import Path

from apps.problems.models import CapacitorMode


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int
    n_r: int | None
    tol: float
    max_cycles: int
    safety: float
    threads: int
    out: Path
    dim: int = 2
    n_min: int = 5
    a: float = 0.1
    r: float = 0.14
    mode: CapacitorMode | None = None
    t: float = 1.0
    steps: int = 20
    curve: Path | None = None
    closed: bool = True
    seeds: Path | None = None
