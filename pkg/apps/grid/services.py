"""
Grid construction and index arithmetic.
"""

import numpy as np

from apps.core.exceptions import ConfigurationError, DomainError

from .models import Field, Grid, NodeIndex

MAX_LEVEL = 13


def make_grid(dim: int, n: int) -> Grid:
    """Build the (2^n + 1)^dim grid on the unit square or cube."""
    if dim not in (2, 3):
        raise ConfigurationError(f"Dimension must be 2 or 3, got {dim}.")
    if not 1 <= n <= MAX_LEVEL:
        raise ConfigurationError(f"Level exponent must lie in [1, {MAX_LEVEL}], got {n}.")
    return Grid(dim=dim, n=n)


def in_level_subset(idx: NodeIndex, level: int) -> bool:
    """True iff every coordinate is a multiple of 2^level."""
    if level < 0:
        raise ConfigurationError(f"Level must be non-negative, got {level}.")
    stride = 2**level
    return all(int(i) % stride == 0 for i in idx)


def mirror_index(i: int, N: int) -> int:
    """
    Reflect an out-of-range index about the nearest boundary node:
    -k maps to k and (N-1)+k maps to (N-1)-k.
    """
    last = N - 1
    if 0 <= i <= last:
        return i
    if -last <= i < 0:
        return -i
    if last < i <= 2 * last:
        return 2 * last - i
    raise DomainError(f"Index {i} cannot be mirrored into [0, {last}].")


def level_view(field: Field, level: int) -> np.ndarray:
    """Strided view of the level subset; writes go through to the field."""
    return field.values[field.grid.level_slices(level)]
