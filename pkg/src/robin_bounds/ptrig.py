"""Generalized p-trigonometric and p-hyperbolic functions.

``arccos_p`` and ``arccosh_p`` are integrals with an algebraic singularity
at ``t = 1``. Both are evaluated after the substitution ``t = 1 -+ w**p'``,
which turns the integrand into the bounded function ``p' * phi(w**p')**(-1/p)``
with ``phi`` a ratio computed through ``expm1``/``log1p``. The resulting
smooth integrals are handled by nested tanh-sinh quadrature.

``cos_p`` and ``cosh_p`` invert these integrals by Newton's method with a
bisection safeguard. The Newton variable is chosen so the derivative stays
bounded away from zero and infinity (``w`` near the singular end, ``log x``
for large hyperbolic arguments), so the inversion never sees the blow-up
of the original slope.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._quad import integrate
from .errors import DomainError

__all__ = [
    "PExponent",
    "as_pexponent",
    "pi_p",
    "arccos_p",
    "cos_p",
    "arccosh_p",
    "cosh_p",
]

_LOG2 = np.log(2.0)


@dataclass(frozen=True)
class PExponent:
    """An exponent ``p > 1`` together with its conjugate ``p' = p/(p-1)``."""

    p: float
    p_conj: float = field(init=False)

    def __post_init__(self):
        p = float(self.p)
        if not np.isfinite(p) or p <= 1.0:
            raise DomainError(f"exponent p must satisfy 1 < p < inf, got {self.p!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "p_conj", p / (p - 1.0))


def as_pexponent(p):
    """Accept either a PExponent or a bare number."""
    return p if isinstance(p, PExponent) else PExponent(p)


def _scalar_or_array(values, like):
    values = np.asarray(values, dtype=float)
    return float(values) if np.ndim(like) == 0 else values


@lru_cache(maxsize=256)
def _pi_p(p):
    return 2.0 * np.pi / (p * np.sin(np.pi / p))


def pi_p(p):
    """Half period of ``cos_p``: ``2 pi / (p sin(pi/p))``."""
    return _pi_p(as_pexponent(p).p)


# -- integrals ---------------------------------------------------------------


def _phi(z, p):
    # (1 - (1 - z)**p) / z, continuous at z = 0 with value p
    z = np.asarray(z, dtype=float)
    safe = np.where(z > 0, z, 1.0)
    with np.errstate(divide="ignore"):
        out = -np.expm1(p * np.log1p(-np.minimum(safe, 1.0))) / safe
    return np.where(z > 0, out, p)


def _psi(z, p):
    # ((1 + z)**p - 1) / z, continuous at z = 0 with value p
    z = np.asarray(z, dtype=float)
    safe = np.where(z > 0, z, 1.0)
    out = np.expm1(p * np.log1p(safe)) / safe
    return np.where(z > 0, out, p)


def _a_integral(y, p, q):
    """arccos_p(1 - y**q) for y in [0, 1]."""
    return integrate(lambda w: q * _phi(w**q, p) ** (-1.0 / p), 0.0, y)


def _a_slope(y, p, q):
    return q * _phi(y**q, p) ** (-1.0 / p)


def _c_integral(x, p):
    """int_0^x (1 - s**p)**(-1/p) ds for x in [0, 1/2]."""
    return integrate(lambda s: (-np.expm1(p * np.log(np.maximum(s, 1e-300)))) ** (-1.0 / p), 0.0, x)


def _b_integral(y, p, q):
    """arccosh_p(1 + y**q) for y in [0, 1]."""
    return integrate(lambda w: q * _psi(w**q, p) ** (-1.0 / p), 0.0, y)


def _b_slope(y, p, q):
    return q * _psi(y**q, p) ** (-1.0 / p)


def _tail_integrand(u, p):
    # (1 - e^{-pu})^{-1/p} - 1 without cancellation
    return np.expm1(-np.log1p(-np.exp(-p * u)) / p)


@lru_cache(maxsize=256)
def _b_one(p):
    q = p / (p - 1.0)
    return float(_b_integral(1.0, p, q))


def _log_tail(v, p):
    """arccosh_p(e**v) for v >= log 2."""
    upper = np.minimum(v, _LOG2 + 40.0 / p)
    return _b_one(p) + (v - _LOG2) + integrate(lambda u: _tail_integrand(u, p), _LOG2, upper)


def _log_tail_slope(v, p):
    return 1.0 + _tail_integrand(v, p)


def arccos_p(p, x):
    """``int_x^1 (1 - t**p)**(-1/p) dt`` for ``0 <= x <= 1`` (vectorized in x)."""
    pe = as_pexponent(p)
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa >= 0.0) | ~(xa <= 1.0)):
        raise DomainError("arccos_p is defined for 0 <= x <= 1")
    out = np.empty(xa.shape)
    hi = xa >= 0.5
    if np.any(hi):
        y = (1.0 - xa[hi]) ** (1.0 / pe.p_conj)
        out[hi] = _a_integral(y, pe.p, pe.p_conj)
    if np.any(~hi):
        out[~hi] = 0.5 * _pi_p(pe.p) - _c_integral(xa[~hi], pe.p)
    return _scalar_or_array(out, x)


def arccosh_p(p, x):
    """``int_1^x (t**p - 1)**(-1/p) dt`` for ``x >= 1`` (vectorized in x)."""
    pe = as_pexponent(p)
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa >= 1.0)):
        raise DomainError("arccosh_p is defined for x >= 1")
    out = np.empty(xa.shape)
    small = xa <= 2.0
    if np.any(small):
        y = (xa[small] - 1.0) ** (1.0 / pe.p_conj)
        out[small] = _b_integral(y, pe.p, pe.p_conj)
    if np.any(~small):
        out[~small] = _log_tail(np.log(xa[~small]), pe.p)
    return _scalar_or_array(out, x)


# -- inversion ---------------------------------------------------------------


def _safeguarded_newton(value, slope, target, lo, hi, x0, max_iter=60):
    """Solve ``value(x) = target`` for an increasing ``value`` on ``[lo, hi]``."""
    shape = np.shape(target)
    target = np.atleast_1d(target).ravel()
    lo = np.atleast_1d(lo).astype(float).ravel()
    hi = np.atleast_1d(hi).astype(float).ravel()
    x = np.clip(np.atleast_1d(x0).astype(float).ravel(), lo, hi)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(max_iter):
        if not np.any(active):
            break
        xa = x[active]
        r = value(xa) - target[active]
        d = slope(xa)
        above = r > 0
        hi[active] = np.where(above, xa, hi[active])
        lo[active] = np.where(above, lo[active], xa)
        step = xa - r / d
        bad = ~((step > lo[active]) & (step < hi[active]))
        step = np.where(bad, 0.5 * (lo[active] + hi[active]), step)
        scale = np.maximum(1.0, np.abs(step))
        done = (np.abs(step - xa) <= 2e-16 * scale) | (np.abs(r) <= 1e-16 * np.maximum(1.0, np.abs(target[active])))
        x[active] = np.where(np.abs(r) <= 1e-16 * np.maximum(1.0, np.abs(target[active])), xa, step)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return x.reshape(shape)


def _cos_first_quarter(p, t):
    """Return ``(x, 1 - x)`` with ``arccos_p(x) = t`` for t in [0, pi_p/2]."""
    q = p / (p - 1.0)
    t = np.asarray(t, dtype=float)
    lo = np.zeros(t.shape)
    hi = np.ones(t.shape)
    y0 = np.clip(t / (0.5 * _pi_p(p)), 0.0, 1.0)
    y = _safeguarded_newton(
        lambda yy: _a_integral(yy, p, q), lambda yy: _a_slope(yy, p, q), t, lo, hi, y0
    )
    c = y**q
    return 1.0 - c, c


def _cos_parts(p, t):
    """``(cos_p(t), 1 - cos_p(t))`` elementwise."""
    half = 0.5 * _pi_p(p)
    t = np.abs(np.asarray(t, dtype=float))
    t = np.mod(t, 4.0 * half)
    t = np.where(t > 2.0 * half, 4.0 * half - t, t)
    upper = t > half
    arg = np.where(upper, 2.0 * half - t, t)
    x, c = _cos_first_quarter(p, np.minimum(arg, half))
    return np.where(upper, -x, x), np.where(upper, 1.0 + x, c)


def cos_p(p, t):
    """The even, ``2 pi_p``-periodic p-cosine (vectorized in t)."""
    pe = as_pexponent(p)
    x, _ = _cos_parts(pe.p, t)
    return _scalar_or_array(x, t)


def _cosh_log_parts(p, t):
    """``(cosh_p(t) - 1, log cosh_p(t))`` elementwise; the log never overflows."""
    q = p / (p - 1.0)
    t = np.abs(np.asarray(t, dtype=float))
    b1 = _b_one(p)
    xm1 = np.empty(t.shape)
    logx = np.empty(t.shape)
    small = t <= b1
    if np.any(small):
        ts = t[small]
        y0 = np.clip(ts / b1, 0.0, 1.0)
        y = _safeguarded_newton(
            lambda yy: _b_integral(yy, p, q),
            lambda yy: _b_slope(yy, p, q),
            ts,
            np.zeros(ts.shape),
            np.ones(ts.shape),
            y0,
        )
        c = y**q
        xm1[small] = c
        logx[small] = np.log1p(c)
    if np.any(~small):
        tl = t[~small]
        cmax = (1.0 - 2.0**-p) ** (-1.0 / p)
        lo = _LOG2 + (tl - b1) / cmax
        hi = _LOG2 + (tl - b1)
        v = _safeguarded_newton(
            lambda vv: _log_tail(vv, p), lambda vv: _log_tail_slope(vv, p), tl, lo, hi, hi.copy()
        )
        with np.errstate(over="ignore"):
            xm1[~small] = np.expm1(v)
        logx[~small] = v
    return xm1, logx


def _cosh_parts(p, t):
    """``(cosh_p(t), cosh_p(t) - 1)`` elementwise (infinite past the float range)."""
    xm1, logx = _cosh_log_parts(p, t)
    with np.errstate(over="ignore"):
        x = np.where(logx > 1.0, np.exp(logx), 1.0 + xm1)
    return x, xm1


def cosh_p(p, t):
    """The even p-hyperbolic cosine, inverse of ``arccosh_p`` on ``[0, inf)``."""
    pe = as_pexponent(p)
    x, _ = _cosh_parts(pe.p, t)
    return _scalar_or_array(x, t)
