"""
Pointwise and array forms of the hat function, restriction weights,
the radial finite-difference operator and its stable pseudo-time step.

The pointwise functions are the reference definitions; the array functions are
what the kernels run. Both resolve out-of-range neighbours the same way:
mirror images on Neumann faces, odd reflection about the face value on
Dirichlet faces, axis by axis in increasing axis order.
"""

from itertools import product

import numpy as np

from apps.core.exceptions import ConfigurationError
from apps.grid.models import Field, NodeIndex
from apps.grid.services import mirror_index
from apps.kernels.models import BoundarySpec, Dirichlet

from .models import Normalization, OperatorCoefficients, stencil_offsets


def hat(x):
    """Linear interpolation kernel max(0, 1 - |x|)."""
    return np.maximum(0.0, 1.0 - np.abs(x))


def restriction_weights(dim: int) -> dict[tuple[int, ...], float]:
    """Tensor-hat weights (1/2^dim) prod hat(p/2): they sum to one."""
    scale = 0.5**dim
    return {
        p: scale * float(np.prod([hat(-q / 2.0) for q in p]))
        for p in product((-1, 0, 1), repeat=dim)
    }


def _sample(values: np.ndarray, idx: NodeIndex, boundary: BoundarySpec | None) -> float:
    """Value at a possibly out-of-range index, resolving the outermost padded axis first."""
    N = values.shape[0]
    for axis in reversed(range(values.ndim)):
        i = idx[axis]
        if 0 <= i < N:
            continue
        side = 0 if i < 0 else 1
        mirrored = list(idx)
        mirrored[axis] = mirror_index(i, N)
        image = _sample(values, tuple(mirrored), boundary)
        if boundary is not None and isinstance(boundary.condition(axis, side), Dirichlet):
            face = list(idx)
            face[axis] = 0 if side == 0 else N - 1
            return 2.0 * _sample(values, tuple(face), boundary) - image
        return image
    return float(values[tuple(idx)])


def restrict_at(f: Field, idx: NodeIndex, lam: int) -> float:
    """Weighted average of the neighbours at distance lam*h; images at every face."""
    total = 0.0
    for p, weight in restriction_weights(f.grid.dim).items():
        neighbour = tuple(i + lam * q for i, q in zip(idx, p, strict=True))
        total += weight * _sample(f.values, neighbour, None)
    return total


def apply_operator(
    u: Field,
    coeff: OperatorCoefficients,
    idx: NodeIndex,
    lam: int,
    boundary: BoundarySpec | None = None,
) -> float:
    """
    Radial discretisation of div(sigma grad u) + a u at one node, neighbours at lam*h.
    Without a boundary spec every face uses mirror images.
    """
    grid = u.grid
    stencil = stencil_offsets(grid.dim)
    coefficients = stencil.coefficients(coeff.normalization)
    u_center = float(u.values[tuple(idx)])
    sigma_center = float(coeff.sigma.values[tuple(idx)])
    total = 0.0
    for offset, coefficient in zip(stencil.offsets, coefficients, strict=True):
        neighbour = tuple(int(i + lam * q) for i, q in zip(idx, offset, strict=True))
        u_neighbour = _sample(u.values, neighbour, boundary)
        sigma_neighbour = _sample(coeff.sigma.values, neighbour, None)
        total += coefficient * 0.5 * (sigma_neighbour + sigma_center) * (u_neighbour - u_center)
    return total / (lam * grid.h) ** 2 + coeff.a * u_center


def stable_step(
    coeff: OperatorCoefficients,
    lam: int,
    h: float,
    safety: float = 0.9,
    idx: NodeIndex | None = None,
) -> float:
    """
    Pseudo-time step safety * 2 / G with G the Gershgorin bound of the diffusion part.
    With ``idx`` the bound uses the largest face-averaged sigma of that node's footprint,
    otherwise the global sigma maximum.
    """
    if not 0.0 < safety <= 1.0:
        raise ConfigurationError(f"Safety factor must lie in (0, 1], got {safety}.")
    stencil = stencil_offsets(coeff.dim)
    if idx is None:
        sigma_max = float(np.max(coeff.sigma.values))
    else:
        sigma_center = float(coeff.sigma.values[tuple(idx)])
        neighbours = [
            _sample(coeff.sigma.values, tuple(int(i + lam * q) for i, q in zip(idx, p, strict=True)), None)
            for p in stencil.offsets
        ]
        sigma_max = 0.5 * (sigma_center + max(neighbours))
    gershgorin = 2.0 * stencil.diagonal_constant(coeff.normalization) * sigma_max / (lam * h) ** 2
    return safety * 2.0 / gershgorin


# Array forms


def pad(values: np.ndarray, boundary: BoundarySpec | None, width: int = 1) -> np.ndarray:
    """
    Ghost layer of ``width`` on every side. Dirichlet faces get odd reflection
    about the face value, all other faces (or every face when ``boundary`` is None)
    get mirror images.
    """
    padded = values
    for axis in range(values.ndim):
        for side in (0, 1):
            pad_width = [(0, 0)] * values.ndim
            pad_width[axis] = (width, 0) if side == 0 else (0, width)
            odd = boundary is not None and boundary.is_dirichlet(axis, side)
            padded = np.pad(
                padded, pad_width, mode="reflect", reflect_type="odd" if odd else "even"
            )
    return padded


def _window(offset: tuple[int, ...], rows: slice, shape: tuple[int, ...], width: int = 1):
    """Slice of a padded array holding the neighbours at ``offset`` of output ``rows``."""
    window = [slice(rows.start + width + offset[0], rows.stop + width + offset[0])]
    for axis in range(1, len(shape)):
        start = width + offset[axis]
        window.append(slice(start, start + shape[axis]))
    return tuple(window)


def diffusion_rows(
    u_padded: np.ndarray,
    sigma_padded: np.ndarray,
    shape: tuple[int, ...],
    h_eff: float,
    rows: slice,
    normalization: Normalization = Normalization.CONSISTENT,
) -> np.ndarray:
    """div(sigma grad u) on ``rows`` (axis 0) of an array of ``shape`` with unit ghost layers."""
    stencil = stencil_offsets(len(shape))
    coefficients = stencil.coefficients(normalization)
    center = _window((0,) * len(shape), rows, shape)
    u_center = u_padded[center]
    sigma_center = sigma_padded[center]
    total = np.zeros(u_center.shape)
    for offset, coefficient in zip(stencil.offsets, coefficients, strict=True):
        neighbour = _window(tuple(offset), rows, shape)
        total += (
            coefficient
            * (0.5 * (sigma_padded[neighbour] + sigma_center))
            * (u_padded[neighbour] - u_center)
        )
    return total / h_eff**2


def diffusion_array(
    u: np.ndarray,
    sigma: np.ndarray,
    boundary: BoundarySpec | None,
    h_eff: float,
    normalization: Normalization = Normalization.CONSISTENT,
) -> np.ndarray:
    """Whole-array form of :func:`diffusion_rows`."""
    return diffusion_rows(
        pad(u, boundary),
        pad(sigma, None),
        u.shape,
        h_eff,
        slice(0, u.shape[0]),
        normalization,
    )


def operator_field(
    u: Field,
    coeff: OperatorCoefficients,
    boundary: BoundarySpec | None = None,
    level: int = 0,
) -> np.ndarray:
    """
    ``apply_operator`` at every node of the level subset, returned on the subset shape.
    ``coeff.sigma`` is taken as already restricted to that level.
    """
    grid = u.grid
    lam = grid.spacing(level)
    index = grid.level_slices(level)
    u_coarse = u.values[index]
    diffusion = diffusion_array(
        u_coarse, coeff.sigma.values[index], boundary, lam * grid.h, coeff.normalization
    )
    return diffusion + coeff.a * u_coarse


def stable_step_rows(
    sigma_padded: np.ndarray,
    shape: tuple[int, ...],
    h_eff: float,
    safety: float,
    rows: slice,
    normalization: Normalization = Normalization.CONSISTENT,
) -> np.ndarray:
    """Local :func:`stable_step` on ``rows`` of a level subset with mirror-padded sigma."""
    stencil = stencil_offsets(len(shape))
    center = _window((0,) * len(shape), rows, shape)
    sigma_center = sigma_padded[center]
    sigma_neighbour = np.zeros(sigma_center.shape)
    for offset in stencil.offsets:
        np.maximum(sigma_neighbour, sigma_padded[_window(tuple(offset), rows, shape)], out=sigma_neighbour)
    sigma_max = 0.5 * (sigma_center + sigma_neighbour)
    return safety * h_eff**2 / (stencil.diagonal_constant(normalization) * sigma_max)
