# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the distance and F^p kernels.

Powers go through one exp/log pair each and share logarithms; the libm
``pow`` is several times slower than numpy's vectorized power.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, exp, log, INFINITY

cnp.import_array()


cdef inline double _pw(double x, double y) noexcept nogil:
    """x**y for x >= 0."""
    if x > 0.0:
        return exp(y * log(x))
    if y > 0.0:
        return 0.0
    return 1.0 if y == 0.0 else INFINITY


def min_norm_distance(points, samples, int family, params):
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] smp = np.ascontiguousarray(samples, dtype=np.float64)
    cdef double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0], m = smp.shape[0], i, j
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double best, reach, v, dx, dy, x, y
    cdef double a11 = prm[0], a12 = prm[1], a22 = prm[2], q = prm[0]
    with nogil:
        for i in range(n):
            x = pts[i, 0]
            y = pts[i, 1]
            best = INFINITY
            if family == 0:
                for j in range(m):
                    dx = x - smp[j, 0]
                    dy = y - smp[j, 1]
                    v = a11 * dx * dx + 2.0 * a12 * dx * dy + a22 * dy * dy
                    if v < best:
                        best = v
                out[i] = sqrt(best) if best > 0 else 0.0
            else:
                # |dx|^q + |dy|^q >= max(|dx|, |dy|)^q, so samples with a
                # coordinate gap of at least the current best norm cannot win
                reach = INFINITY
                for j in range(m):
                    dx = fabs(x - smp[j, 0])
                    dy = fabs(y - smp[j, 1])
                    if dx >= reach or dy >= reach:
                        continue
                    v = _pw(dx, q) + _pw(dy, q)
                    if v < best:
                        best = v
                        reach = _pw(best, 1.0 / q)
                out[i] = _pw(best, 1.0 / q)
    return out_arr


def fp_eval(g, int family, params, double p, double delta):
    cdef double[:, ::1] gg = np.ascontiguousarray(g, dtype=np.float64)
    cdef double[::1] prm = np.ascontiguousarray(params, dtype=np.float64)
    cdef Py_ssize_t n = gg.shape[0], i
    value_arr = np.empty(n)
    grad_arr = np.empty((n, 2))
    hess_arr = np.empty((n, 3))
    cdef double[::1] value = value_arr
    cdef double[:, ::1] grad = grad_arr
    cdef double[:, ::1] hess = hess_arr
    cdef double d2 = delta * delta
    cdef double a11 = prm[0], a12 = prm[1], a22 = prm[2], q = prm[0]
    cdef double gx, gy, ax, ay, s, sr, coef, c1, c2, ux, uy, f, lf, vp
    cdef double scale, rx, ry, axq, ayq, bs, vx, vy, sx, sy, hx, hy
    with nogil:
        for i in range(n):
            gx = gg[i, 0]
            gy = gg[i, 1]
            if family == 0:
                ax = a11 * gx + a12 * gy
                ay = a12 * gx + a22 * gy
                s = gx * ax + gy * ay
                if s < 0:
                    s = 0.0
                if s > 0:
                    vp = exp(0.5 * p * log(s))
                    value[i] = vp
                    coef = p * vp / s
                else:
                    value[i] = 0.0 if p > 0 else 1.0
                    coef = 0.0
                grad[i, 0] = coef * ax
                grad[i, 1] = coef * ay
                sr = s + d2
                c1 = p * _pw(sr, 0.5 * p - 1.0)
                c2 = (p - 2.0) * c1 / sr if p != 2.0 else 0.0
                hess[i, 0] = c1 * a11 + c2 * ax * ax
                hess[i, 1] = c1 * a12 + c2 * ax * ay
                hess[i, 2] = c1 * a22 + c2 * ay * ay
            else:
                ux = fabs(gx)
                uy = fabs(gy)
                scale = ux if ux > uy else uy
                if scale > 0:
                    f = scale * _pw(_pw(ux / scale, q) + _pw(uy / scale, q), 1.0 / q)
                    lf = log(f)
                    vp = exp(p * lf)
                    value[i] = vp
                    coef = p * vp / f
                    sx = 1.0 if gx > 0 else (-1.0 if gx < 0 else 0.0)
                    sy = 1.0 if gy > 0 else (-1.0 if gy < 0 else 0.0)
                    grad[i, 0] = coef * sx * (exp((q - 1.0) * (log(ux) - lf)) if ux > 0 else 0.0)
                    grad[i, 1] = coef * sy * (exp((q - 1.0) * (log(uy) - lf)) if uy > 0 else 0.0)
                else:
                    value[i] = 0.0
                    grad[i, 0] = 0.0
                    grad[i, 1] = 0.0
                rx = gx * gx + d2
                ry = gy * gy + d2
                if rx > 0 and ry > 0:
                    axq = _pw(rx, 0.5 * q)
                    ayq = _pw(ry, 0.5 * q)
                    bs = axq + ayq
                    vx = axq / rx * gx
                    vy = ayq / ry * gy
                    c2 = p * _pw(bs, p / q - 1.0)
                    c1 = (p - q) * c2 / bs
                    hx = axq / (rx * rx)
                    hy = ayq / (ry * ry)
                else:
                    # a zero component with delta = 0: same infinities and NaNs as the numpy kernel
                    rx = sqrt(rx)
                    ry = sqrt(ry)
                    bs = _pw(rx, q) + _pw(ry, q)
                    vx = _pw(rx, q - 2.0) * gx
                    vy = _pw(ry, q - 2.0) * gy
                    c1 = p * (p - q) * _pw(bs, p / q - 2.0)
                    c2 = p * _pw(bs, p / q - 1.0)
                    hx = _pw(rx, q - 4.0)
                    hy = _pw(ry, q - 4.0)
                hess[i, 0] = c1 * vx * vx + c2 * hx * (d2 + (q - 1.0) * gx * gx)
                hess[i, 1] = c1 * vx * vy
                hess[i, 2] = c1 * vy * vy + c2 * hy * (d2 + (q - 1.0) * gy * gy)
    return value_arr, grad_arr, hess_arr
