"""Desk-scale 2D solvers on raster grids."""

from .eigen import BETA_NEGATIVE_CAP, robin_functionals, solve_robin_eig
from .fields import EigenSolveResult, ScalarField
from .pfunction import PFunctionReport, pfunction_check
from .slab import SlabRecord, separable_slab_ratio, slab_experiment
from .torsion import solve_torsion

__all__ = [
    "BETA_NEGATIVE_CAP",
    "EigenSolveResult",
    "PFunctionReport",
    "ScalarField",
    "SlabRecord",
    "pfunction_check",
    "robin_functionals",
    "separable_slab_ratio",
    "slab_experiment",
    "solve_robin_eig",
    "solve_torsion",
]
