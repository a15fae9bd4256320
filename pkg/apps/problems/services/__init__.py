# Problems Services Package
from .capacitor import capacitor_problem, capacitor_sigma, conductivity
from .curves import check_inside, circle_curve, deposit_delta, resample_curve, trifoil_curve
from .deformation import deformation_problem, deformation_velocity, move_nodes
from .derivatives import curl, divergence, gradient
from .poisson import l1_error, poisson2d_problem, poisson3d_problem
from .streamlines import integrate_streamline
from .trifoil import default_seeds, trifoil_problem

__all__ = [
    "capacitor_problem",
    "capacitor_sigma",
    "check_inside",
    "circle_curve",
    "conductivity",
    "curl",
    "default_seeds",
    "deformation_problem",
    "deformation_velocity",
    "deposit_delta",
    "divergence",
    "gradient",
    "integrate_streamline",
    "l1_error",
    "move_nodes",
    "poisson2d_problem",
    "poisson3d_problem",
    "resample_curve",
    "trifoil_curve",
    "trifoil_problem",
]
