"""
Central-difference derivative fields, second-order one-sided on the faces.
"""

import numpy as np

from apps.core.exceptions import ConfigurationError
from apps.grid.models import Field

from ..models import VectorField


def _partials(values: np.ndarray, h: float) -> list[np.ndarray]:
    return list(np.gradient(values, h, edge_order=2))


def gradient(u: Field) -> VectorField:
    return VectorField(tuple(Field(u.grid, partial) for partial in _partials(u.values, u.grid.h)))


def curl(psi: VectorField) -> VectorField:
    if len(psi) != 3 or psi.grid.dim != 3:
        raise ConfigurationError("curl needs a three-component field on a 3D grid.")
    h = psi.grid.h
    d = [_partials(component.values, h) for component in psi.components]  # d[c][axis]
    return VectorField(
        (
            Field(psi.grid, d[2][1] - d[1][2]),
            Field(psi.grid, d[0][2] - d[2][0]),
            Field(psi.grid, d[1][0] - d[0][1]),
        )
    )


def divergence(v: VectorField) -> Field:
    if len(v) != v.grid.dim:
        raise ConfigurationError(f"divergence needs {v.grid.dim} components, got {len(v)}.")
    h = v.grid.h
    total = np.zeros(v.grid.shape)
    for axis, component in enumerate(v.components):
        total += np.gradient(component.values, h, axis=axis, edge_order=2)
    return Field(v.grid, total)
