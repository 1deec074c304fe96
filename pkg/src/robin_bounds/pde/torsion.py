"""Anisotropic p-torsion function by energy minimization."""

import numpy as np
import scipy.sparse.linalg as spla

from ..finsler import euclidean
from ..errors import ConvergenceError, DomainError
from ..ptrig import as_pexponent
from .discretize import gradient_energy, staircase
from .fields import ScalarField, max_iterations


def torsion_energy(disc, norm, p, w, need_hessian=True):
    """``J(w) = sum_c w_c F(grad w)^p / p - h^2 sum w`` on the staircase discretization."""
    h2 = disc.domain.h ** 2
    e, g, H = gradient_energy(disc, norm, p, w, need_hessian, scale_by=1.0 / p)
    return e - h2 * float(w.sum()), g - h2, H


def solve_torsion(domain, norm, p, tol=1e-10, max_iter=200, return_info=False):
    """Minimize the discrete torsion functional; returns ``(ScalarField, M)``.

    Newton iterations on the smoothed Hessian with Armijo backtracking on
    the exact functional. The first iterate is the p = 2 solution rescaled
    to minimize J along its ray. Converged when a full Newton step lowers J
    by less than ``tol`` relative, or when the Newton model predicts such a
    decrease.
    """
    pe = as_pexponent(p)
    if not 1.2 - 1e-12 <= pe.p <= 5.0 + 1e-12:
        raise DomainError("torsion solver accepts 1.2 <= p <= 5")
    p = pe.p
    disc = staircase(domain)
    if disc.size == 0:
        raise DomainError("domain has no inside nodes")
    max_iter = max_iterations(max_iter)
    h2 = domain.h**2

    # quadratic start: one linear solve with a p = 2 operator (the norm
    # itself when it is quadratic, else the Euclidean one)
    start_norm = norm if norm.kind != "lq" else euclidean(norm.dim)
    _, _, K = gradient_energy(disc, start_norm, 2.0, np.zeros(disc.size), scale_by=0.5)
    w2 = spla.splu(K.tocsc()).solve(np.full(disc.size, h2))
    a = gradient_energy(disc, norm, p, w2, need_hessian=False)[0]
    b = h2 * float(w2.sum())
    w = w2 * (b / a) ** (1.0 / (p - 1.0))

    J, g, H = torsion_energy(disc, norm, p, w)
    history = [J]
    converged = False
    for it in range(1, max_iter + 1):
        d = spla.splu(H).solve(-g)
        slope = float(d @ g)
        if slope >= 0:
            d, slope = -g, -float(g @ g)
        # predicted decrease of the quadratic model
        if -0.5 * slope <= tol * abs(J):
            converged = True
            break
        t = 1.0
        while True:
            trial = w + t * d
            Jt = torsion_energy(disc, norm, p, trial, need_hessian=False)[0]
            if Jt <= J + 1e-4 * t * slope or t < 1e-12:
                break
            t *= 0.5
        if Jt > J:
            # no representable decrease left along a descent direction
            converged = -0.5 * slope <= 1e3 * tol * abs(J)
            break
        decrease = J - Jt
        w = trial
        J, g, H = torsion_energy(disc, norm, p, w)
        history.append(J)
        if decrease <= tol * abs(J) and t == 1.0:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            "torsion solver did not converge",
            {"iterations": it, "J": J, "history": history[-10:], "M": float(w.max())},
        )
    field = ScalarField(domain, disc.nodes, w)
    M = float(w.max())
    if return_info:
        return field, M, {"iterations": it, "history": history}
    return field, M
