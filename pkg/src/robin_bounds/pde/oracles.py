"""Independent reference values for the 2D solvers.

* ``five_point_torsion``: direct sparse solve of the five-point Poisson
  problem on the strictly-inside nodes (p = 2, Euclidean).
* ``p2_eigen_oracle``: the p = 2 quotient assembled as a generalized sparse
  eigenproblem ``K u = lam M u`` and solved by shift-invert Lanczos
  (ARPACK) with a shift below the spectrum.
* separable formulas for rectangles and the radial torsion of a disk.
"""

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import bisect

from .discretize import cut_cell


def five_point_torsion(domain):
    """Solve ``4 u_ij - sum(neighbours) = h^2`` with zero outside; returns (values, M)."""
    inside = domain.inside
    nx, ny = inside.shape
    index = -np.ones((nx, ny), dtype=int)
    idx = np.argwhere(inside)
    index[inside] = np.arange(len(idx))
    rows, cols, vals = [np.arange(len(idx))], [np.arange(len(idx))], [np.full(len(idx), 4.0)]
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        ni, nj = idx[:, 0] + di, idx[:, 1] + dj
        ok = (ni >= 0) & (ni < nx) & (nj >= 0) & (nj < ny)
        nb = np.full(len(idx), -1)
        nb[ok] = index[ni[ok], nj[ok]]
        keep = nb >= 0
        rows.append(np.flatnonzero(keep))
        cols.append(nb[keep])
        vals.append(np.full(keep.sum(), -1.0))
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(len(idx),) * 2)
    u = spla.spsolve(A.tocsc(), np.full(len(idx), domain.h**2))
    return u, float(u.max())


def p2_system(domain, norm, beta):
    """``(disc, K, M)`` for a quadratic norm ``F(x)^2 = x^T A x`` at p = 2."""
    if norm.kind == "lq":
        raise ValueError("the p = 2 oracle needs a quadratic norm")
    disc = cut_cell(domain, norm)
    A = np.eye(2) if norm.kind == "euclidean" else np.asarray(norm.matrix)
    W = sp.diags(disc.corner_weight)
    gx, gy = disc.gx, disc.gy
    K = A[0, 0] * gx.T @ W @ gx + A[0, 1] * (gx.T @ W @ gy + gy.T @ W @ gx) + A[1, 1] * gy.T @ W @ gy
    K = K + beta * disc.trace.T @ sp.diags(disc.trace_weight) @ disc.trace
    M = sp.diags(disc.mass)
    return disc, K.tocsc(), M.tocsc()


def p2_eigen_oracle(domain, norm, beta):
    """Smallest eigenvalue of the assembled p = 2 system."""
    disc, K, M = p2_system(domain, norm, beta)
    # every eigenvalue lies above this shift (corner Robin eigenvalues are
    # bounded below by -beta^2 / sin^2(angle/2) <= -2 beta^2 for convex polygons)
    shift = -1.0 if beta >= 0 else -(8.0 * beta * beta + 1.0)
    vals, vecs = spla.eigsh(K, k=1, M=M, sigma=shift, which="LM", tol=1e-14)
    return float(vals[0]), vecs[:, 0]


def interval_robin_p2(length, beta):
    """First eigenvalue of ``-X'' = lam X`` on an interval with Robin ends (outward flux ``-beta X``)."""
    half = 0.5 * length
    if beta == 0:
        return 0.0
    if beta > 0:
        k = bisect(lambda k: k * np.tan(k * half) - beta, 1e-300, np.pi / length * (1 - 1e-15), xtol=1e-15, rtol=1e-15, maxiter=2000)
        return k * k
    b = -beta
    hi = b + 1.0 / half + 1.0
    k = bisect(lambda k: k * np.tanh(k * half) - b, 1e-300, hi, xtol=1e-15, rtol=1e-15, maxiter=2000)
    return -k * k


def rectangle_robin_p2(a, b, beta):
    """Separable first Robin eigenvalue of an ``a x b`` rectangle (p = 2, Euclidean)."""
    return interval_robin_p2(a, beta) + interval_robin_p2(b, beta)


def rectangle_dirichlet_p2(a, b):
    return np.pi**2 * (1.0 / a**2 + 1.0 / b**2)


def rectangle_torsion_max(a, b, terms=200):
    """Maximum of the solution of ``-lap w = 1`` on an ``a x b`` rectangle (series)."""
    if b < a:
        a, b = b, a
    k = np.arange(1, 2 * terms, 2, dtype=float)
    signs = np.where(((k - 1) / 2) % 2 == 0, 1.0, -1.0)
    # 1/cosh written through exp to avoid overflow for long rectangles
    x = k * np.pi * b / (2 * a)
    sech = 2.0 * np.exp(-x) / (1.0 + np.exp(-2.0 * x))
    return a * a / 8.0 - 4.0 * a * a / np.pi**3 * float(np.sum(signs * sech / k**3))


def disk_torsion_max(radius, dim=2):
    """``R^2 / (2N)`` from the radial solution ``(R^2 - r^2) / (2N)``."""
    return radius * radius / (2.0 * dim)
