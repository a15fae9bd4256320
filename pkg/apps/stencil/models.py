"""
Stencil geometry and operator coefficients for L = div(sigma grad) + a.
"""

from dataclasses import dataclass
from enum import StrEnum
from functools import cache
from itertools import product

import numpy as np

from apps.core.exceptions import ConfigurationError
from apps.grid.models import Field


class Normalization(StrEnum):
    """
    Radial stencil normalisation.

    CONSISTENT divides each radial difference by (lambda h l)^2 and reproduces the
    Laplacian of quadratics exactly. PRINTED divides by (lambda h)^2 l, which scales
    the Laplacian by about 1.416; it is kept for diagnostics only.
    """

    CONSISTENT = "consistent"
    PRINTED = "printed"


# Prefactor of the radial sum: 1/2 on the 9-point, 3/13 on the 27-point molecule.
PREFACTORS = {2: 1.0 / 2.0, 3: 3.0 / 13.0}


@dataclass(frozen=True)
class StencilOffsets:
    """All neighbours in {-1, 0, 1}^dim except the origin, with their distance factors."""

    dim: int
    offsets: np.ndarray
    lengths: np.ndarray

    @property
    def count(self) -> int:
        return len(self.offsets)

    def coefficients(self, normalization: Normalization = Normalization.CONSISTENT) -> np.ndarray:
        """Per-offset weight before the sigma average and the 1/(lambda h)^2 factor."""
        power = 2 if normalization == Normalization.CONSISTENT else 1
        return PREFACTORS[self.dim] / self.lengths**power

    def diagonal_constant(self, normalization: Normalization = Normalization.CONSISTENT) -> float:
        """Sum of the coefficients: 3 in 2D and 44/13 in 3D for the consistent stencil."""
        return float(np.sum(self.coefficients(normalization)))


@cache
def stencil_offsets(dim: int) -> StencilOffsets:
    if dim not in PREFACTORS:
        raise ConfigurationError(f"No radial stencil for dimension {dim}.")
    offsets = np.array([p for p in product((-1, 0, 1), repeat=dim) if any(p)], dtype=int)
    lengths = np.sqrt(np.sum(offsets**2, axis=1).astype(float))
    offsets.setflags(write=False)
    lengths.setflags(write=False)
    return StencilOffsets(dim=dim, offsets=offsets, lengths=lengths)


@dataclass(frozen=True)
class OperatorCoefficients:
    """Conductivity field, Helmholtz constant and stencil normalisation."""

    sigma: Field
    a: float = 0.0
    normalization: Normalization = Normalization.CONSISTENT

    def __post_init__(self) -> None:
        if not np.all(self.sigma.values > 0.0):
            raise ConfigurationError("Conductivity sigma must be positive everywhere.")

    @property
    def dim(self) -> int:
        return self.sigma.grid.dim
