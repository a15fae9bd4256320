"""
Boundary conditions and the working state of the relaxation-interpolation pass.
"""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from apps.core.exceptions import ConfigurationError
from apps.grid.models import Field, Grid

Face = tuple[int, int]  # (axis, side) with side 0 at x_axis = 0 and side 1 at x_axis = 1

DirichletValue = float | Callable[..., np.ndarray]


@dataclass(frozen=True)
class Dirichlet:
    """Prescribed value on a face: a constant or a function of the node coordinates."""

    value: DirichletValue = 0.0


@dataclass(frozen=True)
class Neumann:
    """Zero normal derivative, realised with mirror images."""

    gradient: float = 0.0

    def __post_init__(self) -> None:
        if self.gradient != 0.0:
            raise ConfigurationError("Only homogeneous Neumann faces are supported.")


FaceCondition = Dirichlet | Neumann


@dataclass(frozen=True)
class BoundarySpec:
    """One condition per face of the unit square or cube."""

    dim: int
    faces: dict[Face, FaceCondition] = field(default_factory=dict)

    def __post_init__(self) -> None:
        expected = {(axis, side) for axis in range(self.dim) for side in (0, 1)}
        if set(self.faces) != expected:
            missing = sorted(expected - set(self.faces))
            extra = sorted(set(self.faces) - expected)
            raise ConfigurationError(
                f"Boundary needs exactly one condition per face (missing {missing}, unexpected {extra})."
            )

    @classmethod
    def dirichlet(cls, dim: int, value: DirichletValue = 0.0) -> "BoundarySpec":
        return cls(dim, {(axis, side): Dirichlet(value) for axis in range(dim) for side in (0, 1)})

    @classmethod
    def neumann(cls, dim: int) -> "BoundarySpec":
        return cls(dim, {(axis, side): Neumann() for axis in range(dim) for side in (0, 1)})

    def condition(self, axis: int, side: int) -> FaceCondition:
        return self.faces[(axis, side)]

    def is_dirichlet(self, axis: int, side: int) -> bool:
        return isinstance(self.faces[(axis, side)], Dirichlet)

    @property
    def is_pure_neumann(self) -> bool:
        return all(isinstance(condition, Neumann) for condition in self.faces.values())

    @property
    def is_homogeneous(self) -> bool:
        return all(
            isinstance(condition, Neumann)
            or (not callable(condition.value) and condition.value == 0.0)
            for condition in self.faces.values()
        )

    def homogeneous(self) -> "BoundarySpec":
        """Same face kinds with zero Dirichlet data."""
        return BoundarySpec(
            self.dim,
            {
                face: Dirichlet(0.0) if isinstance(condition, Dirichlet) else condition
                for face, condition in self.faces.items()
            },
        )

    @staticmethod
    def face_slices(grid: Grid, axis: int, side: int) -> tuple[slice | int, ...]:
        index: list[slice | int] = [slice(None)] * grid.dim
        index[axis] = 0 if side == 0 else grid.N - 1
        return tuple(index)

    def dirichlet_mask(self, grid: Grid) -> np.ndarray:
        mask = np.zeros(grid.shape, dtype=bool)
        for (axis, side), condition in self.faces.items():
            if isinstance(condition, Dirichlet):
                mask[self.face_slices(grid, axis, side)] = True
        return mask

    def dirichlet_values(self, grid: Grid) -> np.ndarray:
        """Prescribed values on Dirichlet nodes, zero elsewhere; later faces win at shared edges."""
        values = np.zeros(grid.shape)
        coordinates = grid.coordinates()
        for (axis, side), condition in sorted(self.faces.items()):
            if not isinstance(condition, Dirichlet):
                continue
            index = self.face_slices(grid, axis, side)
            if callable(condition.value):
                face_coordinates = [c[index] for c in coordinates]
                values[index] = condition.value(*face_coordinates)
            else:
                values[index] = condition.value
        return values


@dataclass
class SolveState:
    """
    Buffers of the relaxation-interpolation pass at one level.

    ``u_prev`` is the snapshot read by the pass, ``du`` the variation recorded at
    relaxed nodes on the previous pass (zero elsewhere and before the first pass of a cycle).
    ``du_level`` is the level ``du`` was recorded at when it differs from ``level``; the next
    pass interpolates it onto that level's complement before relaxing.
    ``diagnostic`` is the max-norm defect of the relaxed nodes measured by the last pass.
    """

    u: Field
    u_prev: Field
    du: Field
    g: Field
    sigma: Field
    level: int = 0
    diagnostic: float = 0.0
    du_level: int | None = None

    def __post_init__(self) -> None:
        grids = {self.u.grid, self.u_prev.grid, self.du.grid, self.g.grid, self.sigma.grid}
        if len(grids) != 1:
            raise ConfigurationError("All state buffers must live on the same grid.")

    @property
    def grid(self) -> Grid:
        return self.u.grid

    @property
    def variation_level(self) -> int:
        return self.level if self.du_level is None else self.du_level

    @classmethod
    def initial(cls, u: Field, g: Field, sigma: Field, level: int = 0) -> "SolveState":
        return cls(
            u=u,
            u_prev=u.copy(),
            du=Field.zeros(u.grid),
            g=g,
            sigma=sigma,
            level=level,
        )


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """A boundary spec evaluated once on a grid: Dirichlet mask and values."""

    spec: BoundarySpec
    mask: np.ndarray
    values: np.ndarray

    @classmethod
    def from_spec(cls, spec: BoundarySpec, grid: Grid) -> "BoundaryData":
        if spec.dim != grid.dim:
            raise ConfigurationError(f"Boundary is {spec.dim}D but the grid is {grid.dim}D.")
        return cls(spec, spec.dirichlet_mask(grid), spec.dirichlet_values(grid))

    @classmethod
    def coerce(cls, boundary: "BoundarySpec | BoundaryData", grid: Grid) -> "BoundaryData":
        if isinstance(boundary, BoundaryData):
            return boundary
        return cls.from_spec(boundary, grid)
