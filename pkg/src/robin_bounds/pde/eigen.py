"""First Robin eigenvalue of the anisotropic p-Laplacian on a GridDomain."""

import numpy as np
import scipy.sparse as sp

from .._descent import normalized_descent
from ..errors import ConvergenceError, DomainError
from ..ptrig import as_pexponent
from .discretize import cut_cell, gradient_energy, power_sum
from .fields import EigenSolveResult, ScalarField, max_iterations

BETA_NEGATIVE_CAP = 10.0
# values this small relative to max|u| are below what the quotient resolves
# (strongly negative beta makes u decay by many orders toward the interior)
SIGN_NOISE = 1e-8
MAX_SIGN_RESTARTS = 3


def robin_functionals(disc, norm, p, beta):
    """Numerator and denominator of the discrete Rayleigh quotient.

    Numerator: ``sum_c area_c/4 sum_corners F(grad u)^p + beta sum_s w_s F(nu_s) |u(x_s)|^p``.
    Denominator: ``sum_n m_n |u_n|^p`` with the dual-box lumped mass.
    """
    trace = disc.trace
    tw = disc.trace_weight

    def energy(u, need_hessian=True):
        e, g, H = gradient_energy(disc, norm, p, u, need_hessian)
        if beta != 0.0:
            tu = trace @ u
            be, bg, bh = power_sum(tw, tu, p, need_hessian, reg_scale=float(np.max(np.abs(u))))
            e += beta * be
            g = g + beta * (trace.T @ bg)
            if need_hessian:
                H = (H + beta * (trace.T @ sp.diags(bh) @ trace)).tocsc()
        return e, g, H

    def constraint(u, need_hessian=True):
        val, grad, hess = power_sum(disc.mass, u, p, need_hessian)
        return val, grad, (sp.diags(hess, format="csc") if need_hessian else None)

    return energy, constraint


def solve_robin_eig(domain, norm, p, beta, u0=None, tol=1e-11, max_iter=500, check_sign=True):
    """Minimize the discrete Rayleigh quotient from ``u0`` (default: constant 1).

    A limit that changes sign on the strictly-inside nodes by more than
    ``SIGN_NOISE * max|u|`` is a saddle; the descent restarts from ``|u|``
    up to ``MAX_SIGN_RESTARTS`` times. Raises ConvergenceError on
    non-convergence or when the sign change persists.
    """
    pe = as_pexponent(p)
    beta = float(beta)
    if not np.isfinite(beta):
        raise DomainError("beta must be finite")
    if beta < -BETA_NEGATIVE_CAP:
        raise DomainError(f"beta < 0 is restricted to |beta| <= {BETA_NEGATIVE_CAP:g}")
    disc = cut_cell(domain, norm)
    energy, constraint = robin_functionals(disc, norm, pe.p, beta)
    start = np.ones(disc.size) if u0 is None else np.asarray(u0, dtype=float)
    if start.shape != (disc.size,):
        raise DomainError(f"initial iterate must have {disc.size} entries")
    iterations, history = 0, []
    for restart in range(MAX_SIGN_RESTARTS + 1):
        res = normalized_descent(
            energy, constraint, start, pe.p, tol=tol, max_iter=max_iterations(max_iter)
        )
        iterations += res.iterations
        history += res.history if not history else res.history[1:]
        u = res.u if np.sum(res.u) >= 0 else -res.u
        field = ScalarField(domain, disc.nodes, u)
        inside = field.on_inside()
        floor = SIGN_NOISE * float(np.max(np.abs(u)))
        if not np.any(inside < -floor):
            break
        # a sign-changing critical point is a saddle; |u| is not critical and
        # its quotient does not exceed lam (the norm is even)
        start = np.abs(u)
        lam_abs = energy(start, need_hessian=False)[0] / constraint(start, need_hessian=False)[0]
        if restart == MAX_SIGN_RESTARTS or not lam_abs <= res.value:
            if check_sign:
                raise ConvergenceError(
                    "converged eigenfunction is not one-signed",
                    {"lambda": res.value, "min": float(inside.min()), "max": float(inside.max())},
                )
            break
        history.append(lam_abs)
    return EigenSolveResult(res.value, field, iterations, history)
