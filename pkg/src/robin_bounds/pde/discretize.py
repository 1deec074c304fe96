"""Bilinear (Q1) discretizations on the raster grid of a GridDomain.

Gradients are taken at the four corners of every cell: at corner ``(a, b)``
of cell ``(i, j)`` the bilinear interpolant has gradient

    gx = (u[i+1, j+b] - u[i, j+b]) / h,   gy = (u[i+a, j+1] - u[i+a, j]) / h.

A functional ``sum_cells weight_c / 4 * sum_corners f(grad)`` is therefore
a corner-rule quadrature of ``int f(grad u)``. Two variants are built:

* staircase (torsion): unknowns are the nodes strictly inside the polygon,
  all other nodes are fixed to zero, every cell touching an unknown gets
  weight h^2. For ``f = |g|^2 / 2`` this is exactly the five-point scheme.
* cut cell (Robin): every cell meeting the polygon is active with weight
  ``area(cell & polygon)``, unknowns are all corners of active cells, the
  lumped mass of a node is the area of its dual box inside the polygon and
  boundary integrals use the polygon trace samples.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import shapely

from .. import kernels


@dataclass(frozen=True, eq=False)
class Discretization:
    domain: object
    nodes: np.ndarray  # flat grid indices of the unknowns
    gx: sp.csr_matrix  # corner gradients, one row per (cell, corner)
    gy: sp.csr_matrix
    corner_weight: np.ndarray
    mass: np.ndarray = None
    trace: sp.csr_matrix = None  # boundary sample values from unknowns
    trace_weight: np.ndarray = None  # arclength * F(normal), set per norm

    @property
    def size(self):
        return len(self.nodes)

    def node_points(self):
        d = self.domain
        i, j = np.divmod(self.nodes, d.ny)
        return np.stack([d.x0 + d.h * i, d.y0 + d.h * j], axis=1)


def _cell_arrays(domain, cells):
    """Rows of (gx, gy) for the four corners of each listed cell (flat node ids)."""
    ny, h = domain.ny, domain.h
    i, j = cells[:, 0], cells[:, 1]
    rows_x, rows_y = [], []
    for a in (0, 1):
        for b in (0, 1):
            rows_x.append(((i + 1) * ny + j + b, i * ny + j + b))
            rows_y.append(((i + a) * ny + j + 1, (i + a) * ny + j))
    n = len(cells)
    plus_x = np.concatenate([r[0] for r in rows_x])
    minus_x = np.concatenate([r[1] for r in rows_x])
    plus_y = np.concatenate([r[0] for r in rows_y])
    minus_y = np.concatenate([r[1] for r in rows_y])
    return n, (plus_x, minus_x), (plus_y, minus_y), 1.0 / h


def _difference_matrix(pairs, scale, column_of, n_rows):
    plus, minus = pairs
    rows = np.arange(n_rows)
    cp, cm = column_of[plus], column_of[minus]
    keep_p = cp >= 0
    keep_m = cm >= 0
    r = np.concatenate([rows[keep_p], rows[keep_m]])
    c = np.concatenate([cp[keep_p], cm[keep_m]])
    v = np.concatenate([np.full(keep_p.sum(), scale), np.full(keep_m.sum(), -scale)])
    n_cols = column_of.max() + 1
    return sp.csr_matrix((v, (r, c)), shape=(n_rows, n_cols))


def _all_cells(domain):
    ci, cj = np.meshgrid(np.arange(domain.nx - 1), np.arange(domain.ny - 1), indexing="ij")
    return np.stack([ci.ravel(), cj.ravel()], axis=1)


def staircase(domain):
    """Torsion discretization: zero outside the strictly-inside nodes."""
    inside = domain.inside
    cells = _all_cells(domain)
    i, j = cells[:, 0], cells[:, 1]
    touched = inside[i, j] | inside[i + 1, j] | inside[i, j + 1] | inside[i + 1, j + 1]
    cells = cells[touched]
    nodes = np.flatnonzero(inside.ravel())
    column_of = np.full(domain.nx * domain.ny, -1)
    column_of[nodes] = np.arange(len(nodes))
    n, px, py, scale = _cell_arrays(domain, cells)
    gx = _difference_matrix(px, scale, column_of, 4 * n)
    gy = _difference_matrix(py, scale, column_of, 4 * n)
    weight = np.full(4 * n, 0.25 * domain.h**2)
    return Discretization(domain, nodes, gx, gy, weight)


def _polygon(domain):
    return shapely.Polygon(domain.vertices)


def cut_cell(domain, norm):
    """Robin discretization with cut-cell areas and polygon trace samples."""
    h = domain.h
    poly = _polygon(domain)
    cells = _all_cells(domain)
    x0 = domain.x0 + h * cells[:, 0]
    y0 = domain.y0 + h * cells[:, 1]
    areas = shapely.area(shapely.intersection(shapely.box(x0, y0, x0 + h, y0 + h), poly))
    active = areas > 1e-14 * h * h
    cells = cells[active]
    areas = areas[active]
    ny = domain.ny
    i, j = cells[:, 0], cells[:, 1]
    corner_ids = np.concatenate([i * ny + j, (i + 1) * ny + j, i * ny + j + 1, (i + 1) * ny + j + 1])
    nodes = np.unique(corner_ids)
    column_of = np.full(domain.nx * domain.ny, -1)
    column_of[nodes] = np.arange(len(nodes))
    n, px, py, scale = _cell_arrays(domain, cells)
    gx = _difference_matrix(px, scale, column_of, 4 * n)
    gy = _difference_matrix(py, scale, column_of, 4 * n)
    weight = np.tile(0.25 * areas, 4)

    ni, nj = np.divmod(nodes, ny)
    cx = domain.x0 + h * ni
    cy = domain.y0 + h * nj
    mass = shapely.area(
        shapely.intersection(shapely.box(cx - 0.5 * h, cy - 0.5 * h, cx + 0.5 * h, cy + 0.5 * h), poly)
    )

    # trace: bilinear interpolation at boundary samples, nudged into the polygon
    pts = domain.boundary_pts - 1e-9 * h * domain.boundary_normals
    fx = (pts[:, 0] - domain.x0) / h
    fy = (pts[:, 1] - domain.y0) / h
    ci = np.clip(np.floor(fx).astype(int), 0, domain.nx - 2)
    cj = np.clip(np.floor(fy).astype(int), 0, domain.ny - 2)
    xi = fx - ci
    eta = fy - cj
    m = len(pts)
    rows = np.tile(np.arange(m), 4)
    ids = np.concatenate([ci * ny + cj, (ci + 1) * ny + cj, ci * ny + cj + 1, (ci + 1) * ny + cj + 1])
    vals = np.concatenate([(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta])
    cols = column_of[ids]
    keep = (cols >= 0) & (vals != 0)
    trace = sp.csr_matrix((vals[keep], (rows[keep], cols[keep])), shape=(m, len(nodes)))
    trace_weight = domain.boundary_weights * norm.eval(domain.boundary_normals)
    return Discretization(domain, nodes, gx, gy, weight, mass, trace, trace_weight)


# -- shared functional pieces -------------------------------------------------


def hessian_reg(p):
    """Relative smoothing for Hessians: cap the p < 2 blow-up, floor the p > 2 degeneracy."""
    return 1e-6 if p < 2 else 1e-1


def gradient_energy(disc, norm, p, u, need_hessian=True, scale_by=1.0):
    """``scale_by * sum_c w_c F(G u)^p`` with gradient and smoothed Hessian."""
    gxu = disc.gx @ u
    gyu = disc.gy @ u
    g = np.stack([gxu, gyu], axis=1)
    family, params = norm.kernel_params()
    gmax = float(np.max(np.abs(g))) if len(g) else 0.0
    umax = float(np.max(np.abs(u))) if len(u) else 0.0
    vmin, vmax = disc.domain.vertices.min(axis=0), disc.domain.vertices.max(axis=0)
    diam = float(np.hypot(*(vmax - vmin)))
    delta = hessian_reg(p) * max(gmax, umax / diam, 1e-300)
    value, grad, hess = kernels.fp_eval(g, family, params, p, delta if need_hessian else 0.0)
    w = disc.corner_weight * scale_by
    energy = float(np.dot(w, value))
    gradient = disc.gx.T @ (w * grad[:, 0]) + disc.gy.T @ (w * grad[:, 1])
    if not need_hessian:
        return energy, gradient, None
    h11 = sp.diags(w * hess[:, 0])
    h12 = sp.diags(w * hess[:, 1])
    h22 = sp.diags(w * hess[:, 2])
    gx, gy = disc.gx, disc.gy
    H = gx.T @ h11 @ gx + gx.T @ h12 @ gy + gy.T @ h12 @ gx + gy.T @ h22 @ gy
    return energy, gradient, H.tocsc()


def power_sum(weights, v, p, need_hessian=True, reg_scale=None):
    """``sum_k weights_k |v_k|^p`` with gradient and smoothed diagonal Hessian."""
    a = np.abs(v)
    value = float(np.dot(weights, a**p))
    grad = p * weights * a ** (p - 1.0) * np.sign(v)
    if not need_hessian:
        return value, grad, None
    ref = reg_scale if reg_scale is not None else (float(a.max()) if len(a) else 0.0)
    d = hessian_reg(p) * max(ref, 1e-300)
    hess = p * (p - 1.0) * weights * (v * v + d * d) ** (0.5 * p - 1.0)
    return value, grad, hess
