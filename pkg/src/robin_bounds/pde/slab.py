"""Slab experiment: ratio of the 2D eigenvalue to the 1D comparison value.

On ``(-a/2, a/2) x (-l/2, l/2)`` the 1D comparison value ``mu_l`` uses
``s_l = (p' M_l)^{1/p'}`` for beta > 0 and ``s_l = R_F`` for beta < 0.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .. import geometry, oned
from ..bounds import s0_from_torsion
from ..errors import ConvergenceError, DomainError
from ..ptrig import as_pexponent
from .eigen import solve_robin_eig
from .oracles import interval_robin_p2, rectangle_torsion_max
from .torsion import solve_torsion


@dataclass
class SlabRecord:
    ell: float
    lambda_numeric: float = None
    mu_ell: float = None
    ratio: float = None
    s_ell: float = None
    error: str = None

    def as_dict(self):
        return asdict(self)


def slab_experiment(p, beta, a, ell_list, norm, h):
    """One record per ``l``; a solver failure fills ``error`` and the loop continues."""
    pe = as_pexponent(p)
    beta = float(beta)
    if beta == 0:
        raise DomainError("slab experiment needs beta != 0")
    ells = [float(x) for x in ell_list]
    if any(b <= a_ for a_, b in zip(ells, ells[1:])):
        raise DomainError("l values must be strictly increasing")
    records = []
    for ell in ells:
        rec = SlabRecord(ell)
        try:
            dom = geometry.make_slab(a, ell, h)
            if beta > 0:
                _, M = solve_torsion(dom, norm, pe)
                rec.s_ell = s0_from_torsion(pe, M)
            else:
                rec.s_ell = geometry.inradius(dom, norm)
            rec.mu_ell = oned.mu1(pe, beta, rec.s_ell).mu1
            rec.lambda_numeric = solve_robin_eig(dom, norm, pe, beta).lam
            rec.ratio = rec.lambda_numeric / rec.mu_ell
        except (ConvergenceError, DomainError) as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
        records.append(rec)
    return records


def separable_slab_ratio(beta, a, ell):
    """Exact p = 2 Euclidean ratio from separation of variables.

    ``lambda = mu(a) + mu(l)`` with ``mu(L)`` the Robin-Robin interval
    eigenvalue; ``mu_l`` is the Robin-Robin value on ``2 s_l`` with
    ``s_l = sqrt(2 M_l)`` (series for M) or ``s_l = a/2``.
    """
    lam = interval_robin_p2(a, beta) + interval_robin_p2(ell, beta)
    if beta > 0:
        s = np.sqrt(2.0 * rectangle_torsion_max(a, ell))
    else:
        s = 0.5 * min(a, ell)
    return lam / interval_robin_p2(2.0 * s, beta)
