"""
Curve construction, arc-length resampling and delta deposition on the grid.
"""

import logging
from itertools import product

import numpy as np

from apps.core.exceptions import DomainError
from apps.grid.models import Field, Grid

from ..models import Curve, VectorField

logger = logging.getLogger(__name__)

# tolerance for samples sitting on the domain faces
DOMAIN_SLACK = 1e-12


def circle_curve(center=(0.5, 0.5), radius: float = 0.25, samples: int = 256) -> Curve:
    """Closed polygon through ``samples`` points of a circle in the plane."""
    if samples < 3 or radius <= 0.0:
        raise DomainError("A circle needs a positive radius and at least three samples.")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    points = np.column_stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)])
    curve = Curve(points, closed=True)
    check_inside(curve.points)
    return curve


def trifoil_curve(r: float = 0.14, samples: int = 512, center=(0.5, 0.5, 0.5)) -> Curve:
    """Trefoil knot scaled by ``r`` and translated to ``center``; rejected if it leaves the open cube."""
    if samples < 3 or r <= 0.0:
        raise DomainError("A trifoil needs a positive radius and at least three samples.")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    points = np.column_stack(
        [
            r * (np.sin(theta) + 2.0 * np.sin(2.0 * theta)),
            r * (np.cos(theta) - 2.0 * np.cos(2.0 * theta)),
            -2.0 * r * np.sin(3.0 * theta),
        ]
    ) + np.asarray(center)
    if np.any(points <= 0.0) or np.any(points >= 1.0):
        raise DomainError(f"Trifoil with r={r} does not fit inside the unit cube.")
    return Curve(points, closed=True)


def check_inside(points: np.ndarray) -> None:
    points = np.atleast_2d(points)
    if np.any(points < -DOMAIN_SLACK) or np.any(points > 1.0 + DOMAIN_SLACK):
        outside = points[np.any((points < -DOMAIN_SLACK) | (points > 1.0 + DOMAIN_SLACK), axis=1)]
        raise DomainError(f"{len(outside)} point(s) lie outside the unit domain, e.g. {outside[0].tolist()}.")


def resample_curve(curve: Curve, h: float) -> Curve:
    """
    Equidistant samples along the piecewise-linear arc length, with the spacing
    closest to ``h`` that divides the total length evenly. The first point is kept.
    """
    if h <= 0.0:
        raise DomainError(f"Resampling spacing must be positive, got {h}.")
    path = curve.path()
    arc = np.concatenate([[0.0], np.cumsum(curve.segment_lengths())])
    length = arc[-1]
    if length <= 0.0:
        raise DomainError("Cannot resample a curve of zero length.")
    intervals = max(1, round(length / h))
    targets = length * np.arange(intervals + (0 if curve.closed else 1)) / intervals
    points = np.column_stack([np.interp(targets, arc, path[:, axis]) for axis in range(curve.dim)])
    payload = None
    if curve.payload is not None:
        source = curve.payload.reshape(len(curve), -1)
        if curve.closed:
            source = np.vstack([source, source[:1]])
        payload = np.column_stack([np.interp(targets, arc, column) for column in source.T])
        if curve.payload.ndim == 1:
            payload = payload[:, 0]
    return Curve(points, curve.closed, payload)


def deposit_delta(curve: Curve, grid: Grid, strengths: np.ndarray | None = None) -> Field | VectorField:
    """
    Spread each sample's mass strength * ds / h^dim onto its surrounding nodes with
    tensor-hat weights. Scalar strengths (default 1) give a Field, vector strengths
    one Field per component.
    """
    if curve.dim != grid.dim:
        raise DomainError(f"Curve is {curve.dim}D but the grid is {grid.dim}D.")
    check_inside(curve.points)
    if strengths is None:
        strengths = curve.payload if curve.payload is not None else np.ones(len(curve))
    strengths = np.asarray(strengths, dtype=np.float64)
    vector = strengths.ndim == 2
    strengths = strengths.reshape(len(curve), -1)

    mass = strengths * curve.arc_elements()[:, None] / grid.h**grid.dim
    scaled = np.clip(curve.points, 0.0, 1.0) / grid.h
    base = np.clip(np.floor(scaled).astype(int), 0, grid.N - 2)
    fraction = scaled - base
    values = np.zeros((strengths.shape[1], *grid.shape))
    for corner in product((0, 1), repeat=grid.dim):
        corner = np.asarray(corner)
        weights = np.prod(np.where(corner == 1, fraction, 1.0 - fraction), axis=1)
        nodes = tuple((base + corner).T)
        for component in range(strengths.shape[1]):
            np.add.at(values[component], nodes, weights * mass[:, component])

    logger.debug("Deposited %d samples of a %s curve", len(curve), "closed" if curve.closed else "open")
    if vector:
        return VectorField(tuple(Field(grid, component) for component in values))
    return Field(grid, values[0])
