"""The one-dimensional Robin eigenvalue problem on ``(0, s0)``.

The problem is ``(|X'|^{p-2} X')' + mu |X|^{p-2} X = 0`` with ``X'(0) = 0``
and the Robin condition ``|X'|^{p-2} X' + beta |X|^{p-2} X = 0`` at ``s0``.
Its first eigenvalue is the root of a transcendental equation in
``mu_tilde = mu / (p - 1)``:

* beta > 0: ``mu_tilde (cos_p(mu_tilde^{1/p} s0)^{-p} - 1) = beta^{p'}``,
  first root in ``(0, (pi_p / (2 s0))^p)``;
* beta < 0: ``x (1 - cosh_p(x^{1/p} s0)^{-p}) = |beta|^{p'}`` with
  ``x = -mu_tilde``, unique positive root.

``variational_oracle`` minimizes a discrete Rayleigh quotient instead and
shares nothing with the root finders except the problem statement.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._descent import normalized_descent
from .errors import DomainError, WrongBranchError
from .ptrig import _cos_parts, _cosh_log_parts, as_pexponent, cos_p, cosh_p, pi_p

POSITIVE = "positive"
NEGATIVE = "negative"
NEUMANN = "neumann"

_MARCH_STEPS = 1024


@dataclass(frozen=True)
class OneDEigenResult:
    p: object
    beta: float
    s0: float
    mu1: float
    mu_tilde: float
    branch: str
    residual: float = 0.0

    def eigenfunction(self, s):
        return eigenfunction(self, s)


def _check_s0(s0):
    s0 = float(s0)
    if not (np.isfinite(s0) and s0 > 0):
        raise DomainError(f"s0 must be positive and finite, got {s0}")
    return s0


def positive_residual(p, beta, s0, mu_tilde):
    """``mu_tilde (cos_p(mu_tilde^{1/p} s0)^{-p} - 1) - beta^{p'}`` (vectorized in mu_tilde)."""
    pe = as_pexponent(p)
    m = np.asarray(mu_tilde, dtype=float)
    c, one_minus_c = _cos_parts(pe.p, m ** (1.0 / pe.p) * s0)
    # cos^{-p} - 1 = (1 - cos^p) / cos^p, numerator via expm1 for accuracy near cos = 1
    # at or past the pole of cos_p^{-p} (rounding near pi_p/2) the residual is +inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(c > 0, -np.expm1(pe.p * np.log1p(-one_minus_c)) / c**pe.p, np.inf)
    out = m * ratio - beta**pe.p_conj
    return float(out) if np.ndim(mu_tilde) == 0 else out


def negative_residual(p, beta, s0, x):
    """``x (1 - cosh_p(x^{1/p} s0)^{-p}) - |beta|^{p'}`` (vectorized in x)."""
    pe = as_pexponent(p)
    xa = np.asarray(x, dtype=float)
    _, logx = _cosh_log_parts(pe.p, xa ** (1.0 / pe.p) * s0)
    factor = -np.expm1(-pe.p * logx)
    out = xa * factor - abs(beta) ** pe.p_conj
    return float(out) if np.ndim(x) == 0 else out


def _bisect(f, lo, hi, max_iter=2000):
    """Bisection for an increasing sign change ``f(lo) < 0 <= f(hi)``."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def mu1_positive(p, beta, s0):
    """First eigenvalue for beta > 0 (first root of the p-cosine equation)."""
    pe = as_pexponent(p)
    beta = float(beta)
    if not beta > 0:
        raise WrongBranchError(f"mu1_positive needs beta > 0, got {beta}")
    s0 = _check_s0(s0)
    top = (pi_p(pe) / (2.0 * s0)) ** pe.p
    grid = top * np.arange(1, _MARCH_STEPS) / _MARCH_STEPS
    r = positive_residual(pe, beta, s0, grid)
    hits = np.flatnonzero(r >= 0)
    if len(hits):
        k = hits[0]
        lo = grid[k - 1] if k > 0 else 0.0
        hi = grid[k]
    else:
        lo, hi = grid[-1], top
    lo, hi = _bisect(lambda m: positive_residual(pe, beta, s0, m), lo, hi)
    # the bracket is one ulp wide; keep the end with the smaller residual
    r_lo = positive_residual(pe, beta, s0, lo) if lo > 0 else -np.inf
    r_hi = positive_residual(pe, beta, s0, hi)
    m, res = (lo, r_lo) if abs(r_lo) < abs(r_hi) else (hi, r_hi)
    return OneDEigenResult(pe, beta, s0, float((pe.p - 1.0) * m), float(m), POSITIVE, float(res))


def mu1_negative(p, beta, s0):
    """First (negative) eigenvalue for beta < 0 (unique root of the p-cosh equation)."""
    pe = as_pexponent(p)
    beta = float(beta)
    if not beta < 0:
        raise WrongBranchError(f"mu1_negative needs beta < 0, got {beta}")
    s0 = _check_s0(s0)
    f = lambda x: negative_residual(pe, beta, s0, x)
    lo = abs(beta) ** pe.p_conj
    hi = 2.0 * lo
    while f(hi) < 0:
        lo, hi = hi, 2.0 * hi
        if not np.isfinite(hi):
            raise DomainError("could not bracket the negative-branch root")
    lo, hi = _bisect(f, lo, hi)
    r_lo, r_hi = f(lo), f(hi)
    x, res = (lo, r_lo) if abs(r_lo) < abs(r_hi) else (hi, r_hi)
    return OneDEigenResult(pe, beta, s0, float(-(pe.p - 1.0) * x), float(-x), NEGATIVE, float(res))


def mu1(p, beta, s0):
    """Dispatch on the sign of beta; beta = 0 gives the Neumann value 0."""
    pe = as_pexponent(p)
    if beta > 0:
        return mu1_positive(pe, beta, s0)
    if beta < 0:
        return mu1_negative(pe, beta, s0)
    s0 = _check_s0(s0)
    return OneDEigenResult(pe, 0.0, s0, 0.0, 0.0, NEUMANN, 0.0)


def eigenfunction(res, s):
    """X(s) normalized by X(0) = 1."""
    sa = np.asarray(s, dtype=float)
    if np.any(~(sa >= 0) | ~(sa <= res.s0)):
        raise DomainError(f"eigenfunction is defined on [0, {res.s0}]")
    p = res.p.p
    if res.branch == POSITIVE:
        return cos_p(p, res.mu_tilde ** (1.0 / p) * sa)
    if res.branch == NEGATIVE:
        return cosh_p(p, (-res.mu_tilde) ** (1.0 / p) * sa)
    return np.ones_like(sa) if np.ndim(s) else 1.0


def robin_flux_residual(res, step=1e-7):
    """``|X'|^{p-2} X' + beta |X|^{p-2} X`` at s0 with a one-sided difference quotient.

    The condition is homogeneous of degree p - 1. On the negative branch X
    grows past 1 (and can overflow), so the residual is evaluated for
    ``X / X(s0)``, built from ``log cosh_p``; the positive branch uses X itself.
    The step is ``step`` in units of the eigenfunction's length scale
    ``min(s0, |mu_tilde|^{-1/p})``, raised to the cube root of the rounding
    level of the sampled values when that is larger.
    """
    p = res.p.p
    s0 = res.s0
    scale = s0 / max(1.0, abs(res.mu_tilde) ** (1.0 / p) * s0)
    if res.branch == NEGATIVE:
        arg = (-res.mu_tilde) ** (1.0 / p)
        _, log_end = _cosh_log_parts(p, arg * s0)
        eps = np.spacing(max(1.0, float(log_end)))
        h = max(step, np.cbrt(3.0 * eps)) * scale
        _, logx = _cosh_log_parts(p, arg * np.array([s0 - h, s0 - 2 * h]))
        x_end = 1.0
        x1, x2 = np.exp(logx - log_end)
    else:
        h = max(step, np.cbrt(3.0 * np.spacing(1.0))) * scale
        x_end, x1, x2 = eigenfunction(res, np.array([s0, s0 - h, s0 - 2 * h]))
    slope = (3.0 * x_end - 4.0 * x1 + x2) / (2.0 * h)
    return float(abs(slope) ** (p - 2.0) * slope + res.beta * abs(x_end) ** (p - 2.0) * x_end)


# -- discrete variational oracle ----------------------------------------------


def graded_mesh(s0, n, grading=5.0):
    """Nodes on [0, s0] clustered at both ends by a tanh map."""
    t = np.linspace(0.0, 1.0, n + 1)
    s = 0.5 * s0 * (1.0 + np.tanh(grading * (2.0 * t - 1.0)) / np.tanh(grading))
    s[0], s[-1] = 0.0, s0
    return s


def layer_mesh(s0, n, width, fraction=0.9):
    """Piecewise-uniform mesh putting ``fraction`` of the cells in ``[s0 - w, s0]``.

    ``w = min(s0/2, width * log n)`` as for a Shishkin mesh, where ``width``
    is the expected boundary-layer thickness.
    """
    w = min(0.5 * s0, width * np.log(n))
    n_layer = int(round(fraction * n))
    left = np.linspace(0.0, s0 - w, n - n_layer + 1)
    right = np.linspace(s0 - w, s0, n_layer + 1)
    nodes = np.concatenate([left, right[1:]])
    nodes[-1] = s0
    return nodes


def _oned_functionals(nodes, p, beta):
    # Hessian regularization: p < 2 needs a cap on the blow-up at zero
    # slope, p > 2 a floor on the degeneracy there
    reg = 1e-6 if p < 2 else 1e-3
    lengths = np.diff(nodes)
    span = nodes[-1] - nodes[0]
    n = len(nodes)
    mass = np.zeros(n)
    mass[:-1] += 0.5 * lengths
    mass[1:] += 0.5 * lengths
    first = np.arange(n - 1)

    def energy(v, need_hessian=True):
        g = np.diff(v) / lengths
        a = np.abs(g)
        val = float(np.sum(lengths * a**p) + beta * abs(v[-1]) ** p)
        flux = p * a ** (p - 1.0) * np.sign(g)
        grad = np.zeros(n)
        grad[:-1] -= flux
        grad[1:] += flux
        grad[-1] += beta * p * abs(v[-1]) ** (p - 1.0) * np.sign(v[-1])
        if not need_hessian:
            return val, grad, None
        vmax = max(np.max(np.abs(v)), 1e-300)
        delta = reg * max(np.max(a), vmax / span)
        k = p * (p - 1.0) * (g * g + delta * delta) ** (0.5 * p - 1.0) / lengths
        diag = np.zeros(n)
        diag[:-1] += k
        diag[1:] += k
        vend = abs(v[-1])
        dv = reg * vmax
        diag[-1] += beta * p * (p - 1.0) * (vend * vend + dv * dv) ** (0.5 * p - 1.0)
        hess = sp.diags([diag, -k, -k], [0, 1, -1], format="csc")
        return val, grad, hess

    def constraint(v, need_hessian=True):
        a = np.abs(v)
        val = float(np.sum(mass * a**p))
        grad = p * mass * a ** (p - 1.0) * np.sign(v)
        if not need_hessian:
            return val, grad, None
        dv = reg * max(np.max(a), 1e-300)
        hess = sp.diags(p * (p - 1.0) * mass * (v * v + dv * dv) ** (0.5 * p - 1.0), format="csc")
        return val, grad, hess

    return energy, constraint, first


def variational_oracle(p, beta, s0, n=4096, return_result=False):
    """Discrete first eigenvalue from the Rayleigh quotient on P1 elements.

    Minimizes ``(sum_e h_e |v'_e|^p + beta |v(s0)|^p) / sum_i m_i |v_i|^p``
    (lumped mass ``m_i``) over piecewise-linear ``v`` on ``n`` cells,
    starting from ``v = 1``. For beta > 0 the mesh is tanh-graded toward both
    ends. For beta < 0 the eigenfunction grows like ``exp(k s)`` with
    ``k >= |beta|^{1/(p-1)}``, so a layer-adapted mesh of thickness ``1/k``
    is used instead.
    """
    pe = as_pexponent(p)
    if n < 64:
        raise DomainError("variational oracle needs at least 64 cells")
    s0 = _check_s0(s0)
    beta = float(beta)
    if beta == 0.0:
        return (0.0, None) if return_result else 0.0
    if beta > 0:
        nodes = graded_mesh(s0, n)
    else:
        nodes = layer_mesh(s0, n, abs(beta) ** (-1.0 / (pe.p - 1.0)))
    energy, constraint, _ = _oned_functionals(nodes, pe.p, beta)
    res = normalized_descent(energy, constraint, np.ones(n + 1), pe.p, tol=1e-12, max_iter=1000)
    if return_result:
        return res.value, (nodes, res)
    return res.value
