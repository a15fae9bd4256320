"""
Problem definitions, curves and vector fields of the experiments.
"""

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from apps.core.exceptions import ConfigurationError, DomainError
from apps.grid.models import Field, Grid
from apps.kernels.models import BoundarySpec
from apps.stencil.models import OperatorCoefficients

ExactSolution = Callable[..., np.ndarray]


@dataclass(eq=False)
class ProblemSpec:
    """div(sigma grad u) + a u = source on the unit domain with per-face boundary conditions."""

    grid: Grid
    coefficients: OperatorCoefficients
    source: Field
    boundary: BoundarySpec
    exact: ExactSolution | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if self.coefficients.sigma.grid != self.grid or self.source.grid != self.grid:
            raise ConfigurationError("Coefficients and source must live on the problem grid.")
        if self.boundary.dim != self.grid.dim:
            raise ConfigurationError(
                f"Boundary is {self.boundary.dim}D but the grid is {self.grid.dim}D."
            )

    @property
    def is_pure_neumann(self) -> bool:
        return self.boundary.is_pure_neumann


@dataclass(frozen=True, eq=False)
class Curve:
    """
    Ordered sample points in the unit domain with an optional per-sample payload
    (strength or vector, one row per sample).
    """

    points: np.ndarray
    closed: bool = False
    payload: np.ndarray | None = None

    def __post_init__(self) -> None:
        points = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if points.shape[0] < 2 or points.shape[1] not in (2, 3):
            raise DomainError(f"A curve needs at least two 2D or 3D points, got shape {points.shape}.")
        if np.any(np.all(np.diff(points, axis=0) == 0.0, axis=1)):
            raise DomainError("Consecutive curve samples must be distinct.")
        object.__setattr__(self, "points", points)
        if self.payload is not None:
            payload = np.asarray(self.payload, dtype=np.float64)
            if payload.shape[0] != points.shape[0]:
                raise ConfigurationError("Curve payload needs one row per sample.")
            object.__setattr__(self, "payload", payload)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def path(self) -> np.ndarray:
        """Polyline vertices, with the first point repeated at the end of a closed curve."""
        if self.closed:
            return np.vstack([self.points, self.points[:1]])
        return self.points

    def segment_lengths(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self.path(), axis=0), axis=1)

    def length(self) -> float:
        return float(np.sum(self.segment_lengths()))

    def arc_elements(self) -> np.ndarray:
        """Arc length carried by each sample: half of each adjacent segment."""
        segments = self.segment_lengths()
        if self.closed:
            return 0.5 * (segments + np.roll(segments, 1))
        elements = np.zeros(len(self))
        elements[:-1] += 0.5 * segments
        elements[1:] += 0.5 * segments
        return elements

    def tangents(self) -> np.ndarray:
        """Unit tangents by central differences (one-sided at the ends of an open curve)."""
        if self.closed:
            delta = np.roll(self.points, -1, axis=0) - np.roll(self.points, 1, axis=0)
        else:
            delta = np.gradient(self.points, axis=0)
        norms = np.linalg.norm(delta, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            raise DomainError("Curve tangent is undefined at a sample.")
        return delta / norms

    def with_payload(self, payload: np.ndarray) -> "Curve":
        return Curve(self.points, self.closed, payload)


@dataclass(frozen=True)
class VectorField:
    """One field per component, all on the same grid."""

    components: tuple[Field, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ConfigurationError("A vector field needs at least one component.")
        if len({component.grid for component in self.components}) != 1:
            raise ConfigurationError("Vector field components must share one grid.")

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, component: int) -> Field:
        return self.components[component]

    def as_array(self) -> np.ndarray:
        """Components stacked along a trailing axis: shape grid.shape + (len,)."""
        return np.stack([component.values for component in self.components], axis=-1)

    def magnitude(self) -> Field:
        return Field(self.grid, np.linalg.norm(self.as_array(), axis=-1))


class CapacitorMode(StrEnum):
    HIGH = "high"
    LOW = "low"

    @property
    def sign(self) -> float:
        # low: sigma -> 0.1 inside the sphere, 1.0 far away
        return 1.0 if self is CapacitorMode.LOW else -1.0


class Termination(StrEnum):
    EXITED = "exited"
    MAX_STEPS = "max_steps"
    STAGNATED = "stagnated"


@dataclass(frozen=True, eq=False)
class Streamline:
    points: np.ndarray
    reason: Termination

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class DeformationProblem:
    """Neumann potential problem of a curve plus the raw source kept for the velocity."""

    problem: ProblemSpec
    raw_source: Field
    raw_integral: float
    curve: Curve


@dataclass(frozen=True, eq=False)
class TrifoilProblem:
    """One vector-potential Poisson problem per component of the knotted vortex."""

    problems: tuple[ProblemSpec, ...]
    curve: Curve
    vorticity: VectorField
