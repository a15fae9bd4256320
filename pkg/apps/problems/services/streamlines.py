"""
Streamlines of a gridded velocity field by classical Runge-Kutta with
multilinear velocity sampling.
"""

import logging

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from apps.core.exceptions import ConfigurationError, DomainError

from ..models import Streamline, Termination, VectorField

logger = logging.getLogger(__name__)

MIN_SPEED = 1e-12


def _inside(x: np.ndarray) -> bool:
    return bool(np.all(x >= 0.0) and np.all(x <= 1.0))


def integrate_streamline(
    v: VectorField,
    seed,
    step: float,
    max_steps: int,
    min_speed: float = MIN_SPEED,
) -> Streamline:
    """March from ``seed`` until the path leaves the domain, stalls or runs out of steps."""
    seed = np.asarray(seed, dtype=np.float64)
    if seed.shape != (v.grid.dim,) or not _inside(seed):
        raise DomainError(f"Seed {seed.tolist()} is not a point of the unit domain.")
    if step <= 0.0 or max_steps < 1:
        raise ConfigurationError("Streamlines need a positive step and max_steps >= 1.")

    axes = (v.grid.axis(),) * v.grid.dim
    sampler = RegularGridInterpolator(axes, v.as_array(), bounds_error=False, fill_value=None)

    def velocity(x: np.ndarray) -> np.ndarray:
        return sampler(x[None, :])[0]

    points = [seed]
    x = seed
    reason = Termination.MAX_STEPS
    for _ in range(max_steps):
        k1 = velocity(x)
        if np.linalg.norm(k1) < min_speed:
            reason = Termination.STAGNATED
            break
        k2 = velocity(x + 0.5 * step * k1)
        k3 = velocity(x + 0.5 * step * k2)
        k4 = velocity(x + step * k3)
        x = x + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not _inside(x):
            reason = Termination.EXITED
            break
        points.append(x)

    logger.debug("Streamline from %s: %d points, %s", seed.tolist(), len(points), reason)
    return Streamline(np.array(points), reason)
