"""Nested tanh-sinh quadrature on batches of finite intervals.

The double-exponential change of variables clusters nodes at both ends of
the interval, so bounded integrands with algebraic endpoint behaviour
(``w**1.5`` and the like) still converge geometrically in the level.
Abscissae near an endpoint are formed from the complement ``1 - tanh(u)``
so a node at distance 1e-17 from ``a`` is represented as such.
"""

import numpy as np

# weights beyond |t| = 3.2 are below 1e-16 relative
_T_MAX = 3.2


def _node_data(t):
    u = 0.5 * np.pi * np.sinh(t)
    comp = np.exp(-np.abs(u)) / np.cosh(u)
    weight = 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
    return np.sign(t), comp, weight


def integrate(f, a, b, tol=1e-14, min_level=3, max_level=9):
    """Integrate ``f`` over ``[a, b]`` elementwise for broadcastable ``a``, ``b``.

    ``f`` is called with a 2D array of abscissae (one row per interval) and
    must be vectorized. The level is refined until two consecutive nested
    estimates agree to ``tol * max(1, |I|)`` for every interval.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    shape = a.shape
    a = a.reshape(-1, 1)
    b = b.reshape(-1, 1)
    half = 0.5 * (b - a)

    def partial_sum(t):
        sgn, comp, weight = _node_data(t)
        x = np.where(sgn < 0, a + half * comp, b - half * comp)
        x = np.where(sgn == 0, a + half, x)
        return (f(x) * weight).sum(axis=1) * half[:, 0]

    h = 2.0 ** -min_level
    k = np.arange(-int(np.ceil(_T_MAX / h)), int(np.ceil(_T_MAX / h)) + 1)
    total = partial_sum(k * h)
    estimate = h * total
    for _ in range(min_level, max_level):
        h *= 0.5
        n = int(np.ceil(_T_MAX / h))
        odd = np.arange(-n + (1 - n % 2), n + 1, 2)
        total = total + partial_sum(odd * h)
        refined = h * total
        done = np.all(np.abs(refined - estimate) <= tol * np.maximum(1.0, np.abs(refined)))
        estimate = refined
        if done:
            break
    return estimate.reshape(shape)
