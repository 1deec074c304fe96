"""Normalized descent for p-homogeneous Rayleigh quotients.

Minimizes ``N(u) / D(u)`` where both functionals are positively
p-homogeneous. Each iterate is scaled to ``D(u) = 1``, so the quotient is
``lam = N(u)``. The search direction solves

    (H_N - lam * H_D + sigma * H_D) d = -(grad N - lam * grad D)

with regularized Hessians, i.e. a damped Newton step on the Lagrangian. For
p = 2 and small ``sigma`` this is shifted inverse iteration. The step is
halved until the renormalized quotient does not increase, so the quotient
history is monotone. ``sigma`` grows when the direction fails to be a
descent direction and shrinks after full steps. The shift uses ``H_D``
plus a small multiple of the identity so that unknowns carrying no mass
(cut-cell corners outside the domain) are damped as well.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError


@dataclass
class DescentResult:
    value: float
    u: np.ndarray
    iterations: int
    history: list = field(default_factory=list)


def _normalize(u, constraint, p):
    d = constraint(u, need_hessian=False)[0]
    return u * d ** (-1.0 / p)


def normalized_descent(energy, constraint, u0, p, tol=1e-11, max_iter=500, sigma_min=None, max_halvings=60):
    """Minimize ``energy(u) / constraint(u)``.

    ``energy`` and ``constraint`` map ``(u, need_hessian)`` to
    ``(value, gradient, hessian_or_None)`` with a sparse Hessian.
    """
    u = _normalize(np.asarray(u0, dtype=float), constraint, p)
    lam, g_n, h_n = energy(u, need_hessian=True)
    _, g_d, h_d = constraint(u, need_hessian=True)
    scale = max(abs(lam), 1.0)
    sigma = scale
    sigma_min = 1e-6 * scale if sigma_min is None else sigma_min
    history = [lam]
    for it in range(1, max_iter + 1):
        r = g_n - lam * g_d
        if not np.any(r):
            return DescentResult(lam, u, it - 1, history)
        while True:
            diag = h_d.diagonal()
            floor = 1e-6 * float(np.mean(np.abs(diag))) if len(diag) else 0.0
            mat = (h_n - lam * h_d + sigma * (h_d + floor * sp.identity(len(u)))).tocsc()
            try:
                d = spla.splu(mat).solve(-r)
                ok = np.all(np.isfinite(d)) and float(d @ r) < 0
            except RuntimeError:
                ok = False
            if ok:
                break
            sigma *= 4.0
            if sigma > 1e30 * scale:
                raise ConvergenceError(
                    "no descent direction found", {"iterations": it, "lambda": lam, "history": history}
                )
        t = 1.0
        accepted = False
        for halving in range(max_halvings):
            trial = u + t * d
            trial_d = constraint(trial, need_hessian=False)[0]
            if trial_d > 0 and np.isfinite(trial_d):
                trial = trial * trial_d ** (-1.0 / p)
                trial_lam = energy(trial, need_hessian=False)[0]
                if trial_lam <= lam:
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            # no decrease representable in floating point: stationary
            return DescentResult(lam, u, it, history)
        if halving == 0:
            sigma = max(0.5 * sigma, sigma_min)
        else:
            sigma *= 2.0
        change = lam - trial_lam
        u = trial
        lam, g_n, h_n = energy(u, need_hessian=True)
        _, g_d, h_d = constraint(u, need_hessian=True)
        history.append(lam)
        # a tiny change after heavy step halving is stagnation, not convergence
        if (change <= tol * max(abs(lam), 1e-300) and halving <= 1) or lam == 0.0:
            return DescentResult(lam, u, it, history)
    raise ConvergenceError(
        f"quotient descent did not converge in {max_iter} iterations",
        {"iterations": max_iter, "lambda": lam, "last_change": change, "history": history[-20:]},
    )
