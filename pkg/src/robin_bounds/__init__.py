"""Sharp bounds for the first Robin eigenvalue of the anisotropic p-Laplacian,
with desk-scale 2D solvers to check them."""

from . import bounds, finsler, geometry, oned, pde, ptrig
from .bounds import (
    BoundReport,
    assemble_report,
    dirichlet_bound,
    lower_bound_inradius,
    lower_bound_torsion,
    s0_from_torsion,
    torsion_max_bounds,
    upper_bound_beta_only,
    upper_bound_exponential,
    upper_bound_inradius,
)
from .errors import ConvergenceError, DomainError, WrongBranchError
from .finsler import FinslerNorm, euclidean, lq_norm, parse_norm, weighted_quadratic
from .geometry import GridDomain, distance_field, inradius, make_disk, make_polygon, make_rectangle, make_slab, make_square, make_wulff
from .oned import OneDEigenResult, mu1, mu1_negative, mu1_positive, variational_oracle
from .ptrig import PExponent, arccos_p, arccosh_p, cos_p, cosh_p, pi_p

__version__ = "0.1.0"
