"""Numpy implementations of the hot kernels (fallback for the Cython module)."""

import numpy as np

QUADRATIC = 0
LQ = 1

_CHUNK = 1 << 22


def _norm_rows(dx, dy, family, params):
    if family == QUADRATIC:
        a11, a12, a22 = params[0], params[1], params[2]
        return a11 * dx * dx + 2.0 * a12 * dx * dy + a22 * dy * dy
    q = params[0]
    return np.abs(dx) ** q + np.abs(dy) ** q


def min_norm_distance(points, samples, family, params):
    """For every point, the minimum over samples of G(point - sample).

    G is the quadratic (a11, a12, a22) or l_q (q) norm selected by ``family``.
    """
    points = np.ascontiguousarray(points, dtype=float)
    samples = np.ascontiguousarray(samples, dtype=float)
    params = np.asarray(params, dtype=float)
    out = np.empty(len(points))
    rows = max(1, _CHUNK // max(1, len(samples)))
    for start in range(0, len(points), rows):
        block = points[start : start + rows]
        dx = block[:, 0:1] - samples[None, :, 0]
        dy = block[:, 1:2] - samples[None, :, 1]
        out[start : start + rows] = _norm_rows(dx, dy, family, params).min(axis=1)
    if family == QUADRATIC:
        return np.sqrt(np.maximum(out, 0.0))
    return out ** (1.0 / params[0])


def fp_eval(g, family, params, p, delta):
    # with delta = 0 the Hessian is infinite or undefined at g = 0, as in the compiled kernel
    with np.errstate(divide="ignore", invalid="ignore"):
        return _fp_eval(g, family, params, p, delta)


def _fp_eval(g, family, params, p, delta):
    """F(g)^p, its gradient, and the Hessian of a smoothed F^p.

    Returns ``(value, grad, hess)`` with ``hess`` packed as (h11, h12, h22).
    The value and gradient are exact; the Hessian is that of
    ``(F^2 + delta^2)^(p/2)`` (quadratic family) or of ``F^p`` with every
    ``|g_i|`` replaced by ``sqrt(g_i^2 + delta^2)`` (l_q family).
    """
    g = np.asarray(g, dtype=float)
    params = np.asarray(params, dtype=float)
    gx = g[:, 0]
    gy = g[:, 1]
    n = len(g)
    grad = np.zeros((n, 2))
    hess = np.empty((n, 3))
    d2 = delta * delta
    if family == QUADRATIC:
        a11, a12, a22 = params[0], params[1], params[2]
        ax = a11 * gx + a12 * gy
        ay = a12 * gx + a22 * gy
        s = np.maximum(gx * ax + gy * ay, 0.0)
        value = s ** (0.5 * p)
        nz = s > 0
        coef = np.zeros(n)
        coef[nz] = p * s[nz] ** (0.5 * p - 1.0)
        grad[:, 0] = coef * ax
        grad[:, 1] = coef * ay
        sr = s + d2
        c1 = p * sr ** (0.5 * p - 1.0)
        c2 = p * (p - 2.0) * sr ** (0.5 * p - 2.0) if p != 2.0 else np.zeros(n)
        hess[:, 0] = c1 * a11 + c2 * ax * ax
        hess[:, 1] = c1 * a12 + c2 * ax * ay
        hess[:, 2] = c1 * a22 + c2 * ay * ay
        return value, grad, hess
    q = params[0]
    ux = np.abs(gx)
    uy = np.abs(gy)
    scale = np.maximum(ux, uy)
    nz = scale > 0
    safe = np.where(nz, scale, 1.0)
    f = np.where(nz, safe * ((ux / safe) ** q + (uy / safe) ** q) ** (1.0 / q), 0.0)
    value = f**p
    fs = np.where(nz, f, 1.0)
    coef = np.where(nz, p * fs ** (p - 1.0), 0.0)
    grad[:, 0] = coef * np.sign(gx) * (ux / fs) ** (q - 1.0)
    grad[:, 1] = coef * np.sign(gy) * (uy / fs) ** (q - 1.0)
    axr = np.sqrt(gx * gx + d2)
    ayr = np.sqrt(gy * gy + d2)
    big_s = axr**q + ayr**q
    vx = axr ** (q - 2.0) * gx
    vy = ayr ** (q - 2.0) * gy
    c1 = p * (p - q) * big_s ** (p / q - 2.0)
    c2 = p * big_s ** (p / q - 1.0)
    hess[:, 0] = c1 * vx * vx + c2 * axr ** (q - 4.0) * (d2 + (q - 1.0) * gx * gx)
    hess[:, 1] = c1 * vx * vy
    hess[:, 2] = c1 * vy * vy + c2 * ayr ** (q - 4.0) * (d2 + (q - 1.0) * gy * gy)
    return value, grad, hess
