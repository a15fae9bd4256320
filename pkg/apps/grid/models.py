"""
Grid geometry and node fields.

Fields store one float64 per node in an ndarray indexed ``values[i, j(, k)]``
with axis 0 along x. The documented linear order is row-major with x fastest,
i.e. ``offset = i + N*j + N*N*k``, which is numpy's Fortran order of that array.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import ConfigurationError

NodeIndex = tuple[int, ...]


@dataclass(frozen=True)
class Grid:
    """
    Regular node lattice on the unit square or cube with N = 2^n + 1 nodes per axis.
    """

    dim: int
    n: int

    @property
    def N(self) -> int:
        return 2**self.n + 1

    @property
    def h(self) -> float:
        return 1.0 / (self.N - 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.dim

    @property
    def size(self) -> int:
        return self.N**self.dim

    @property
    def levels(self) -> range:
        return range(self.n)

    def spacing(self, level: int) -> int:
        """Index stride 2^level of the level subset."""
        return 2**level

    def level_points(self, level: int) -> int:
        """Nodes per axis of the level subset."""
        return 2 ** (self.n - level) + 1

    def level_count(self, level: int) -> int:
        return self.level_points(level) ** self.dim

    def level_slices(self, level: int) -> tuple[slice, ...]:
        stride = self.spacing(level)
        return (slice(None, None, stride),) * self.dim

    def axis(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.N)

    def coordinates(self) -> tuple[np.ndarray, ...]:
        axis = self.axis()
        return tuple(np.meshgrid(*([axis] * self.dim), indexing="ij"))

    def trapezoid_weights(self) -> np.ndarray:
        """Tensor trapezoidal quadrature weights, h^dim included."""
        weights_1d = np.full(self.N, self.h)
        weights_1d[[0, -1]] *= 0.5
        weights = weights_1d
        for _ in range(self.dim - 1):
            weights = np.multiply.outer(weights, weights_1d)
        return weights

    def contains(self, idx: NodeIndex) -> bool:
        return len(idx) == self.dim and all(0 <= i < self.N for i in idx)

    def linear_offset(self, idx: NodeIndex) -> int:
        if not self.contains(idx):
            raise ConfigurationError(f"Node {idx} is not on the {self.N}^{self.dim} grid.")
        return sum(int(i) * self.N**axis for axis, i in enumerate(idx))

    def node_index(self, offset: int) -> NodeIndex:
        if not 0 <= offset < self.size:
            raise ConfigurationError(f"Offset {offset} is outside [0, {self.size}).")
        idx = []
        for _ in range(self.dim):
            offset, i = divmod(offset, self.N)
            idx.append(i)
        return tuple(idx)


@dataclass(eq=False)
class Field:
    """One finite real value per grid node."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ConfigurationError(
                f"Field shape {self.values.shape} does not match grid shape {self.grid.shape}."
            )

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def full(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid, function: Callable[..., np.ndarray]) -> "Field":
        """Sample ``function(x, y[, z])`` at every node."""
        values = np.broadcast_to(function(*grid.coordinates()), grid.shape)
        return cls(grid, np.array(values, dtype=np.float64))

    @classmethod
    def from_linear(cls, grid: Grid, data: np.ndarray) -> "Field":
        return cls(grid, np.reshape(np.asarray(data, dtype=np.float64), grid.shape, order="F"))

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def linear(self) -> np.ndarray:
        return self.values.ravel(order="F")

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def integral(self) -> float:
        """Trapezoidal-rule integral over the unit domain."""
        return float(np.sum(self.grid.trapezoid_weights() * self.values))

    def mean(self) -> float:
        # unit domain: mean equals integral
        return self.integral()

    def __getitem__(self, idx: NodeIndex) -> float:
        return float(self.values[tuple(idx)])

    def __add__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values - other.values)
