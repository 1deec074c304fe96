"""Rasterized convex polygons, anisotropic distance and inradius."""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .errors import DomainError

POLYGON_NOTE = (
    "convex polygon: corners are not C^2, so the curvature hypothesis of the "
    "bounds is taken in the limiting (convex) sense"
)


@dataclass(frozen=True, eq=False)
class GridDomain:
    """A convex polygon sampled on a uniform grid.

    Grid node ``(i, j)`` sits at ``(x0 + i*h, y0 + j*h)``; ``inside`` has
    shape ``(nx, ny)`` and marks nodes strictly inside the polygon. The
    boundary is resampled into pieces of length at most ``h/2``: ``boundary_pts``
    are the piece midpoints, ``boundary_weights`` their lengths and
    ``boundary_normals`` the exact outward unit normal of the parent edge.
    """

    vertices: np.ndarray
    h: float
    x0: float
    y0: float
    nx: int
    ny: int
    inside: np.ndarray
    boundary_pts: np.ndarray
    boundary_normals: np.ndarray
    boundary_weights: np.ndarray
    boundary_edge: np.ndarray
    boundary_nodes: np.ndarray
    name: str = "polygon"

    @property
    def bbox(self):
        v = self.vertices
        return (v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max())

    @property
    def edge_normals(self):
        e = np.roll(self.vertices, -1, axis=0) - self.vertices
        n = np.stack([e[:, 1], -e[:, 0]], axis=1)
        return n / np.linalg.norm(n, axis=1, keepdims=True)

    @property
    def area(self):
        return abs(_signed_area(self.vertices))

    @property
    def perimeter(self):
        e = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.linalg.norm(e, axis=1).sum())

    def node_coords(self):
        """Coordinates of every grid node, shape ``(nx, ny, 2)``."""
        xs = self.x0 + self.h * np.arange(self.nx)
        ys = self.y0 + self.h * np.arange(self.ny)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return np.stack([gx, gy], axis=-1)

    @property
    def inside_index(self):
        """``(i, j)`` indices of inside nodes in C order."""
        return np.argwhere(self.inside)

    def inside_points(self):
        idx = self.inside_index
        return np.stack([self.x0 + self.h * idx[:, 0], self.y0 + self.h * idx[:, 1]], axis=1)

    @property
    def n_inside(self):
        return int(self.inside.sum())

    def signed_edge_distances(self, pts):
        """``n_e . (x - v_e)`` for every point and edge; negative inside."""
        pts = np.asarray(pts, dtype=float)
        n = self.edge_normals
        return pts @ n.T - np.sum(n * self.vertices, axis=1)

    def contains(self, pts, tol=0.0):
        return np.all(self.signed_edge_distances(pts) < -tol, axis=-1)

    hypothesis_note = POLYGON_NOTE


@dataclass(frozen=True, eq=False)
class DistanceField:
    values: np.ndarray
    argmax_node: tuple
    points: np.ndarray

    @property
    def max(self):
        return float(self.values.max()) if len(self.values) else 0.0


def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _validate_convex(vertices):
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise DomainError("a polygon needs at least 3 vertices in 2D")
    if not np.all(np.isfinite(v)):
        raise DomainError("polygon vertices must be finite")
    if np.allclose(v[0], v[-1]):
        v = v[:-1]
    if len(v) < 3:
        raise DomainError("a polygon needs at least 3 distinct vertices")
    scale = np.ptp(v, axis=0).max()
    e = np.roll(v, -1, axis=0) - v
    if np.any(np.linalg.norm(e, axis=1) <= 1e-12 * scale):
        raise DomainError("polygon has repeated consecutive vertices")
    area = _signed_area(v)
    if abs(area) <= 1e-12 * scale**2:
        raise DomainError("polygon is degenerate (zero area)")
    if area < 0:
        v = v[::-1].copy()
        e = np.roll(v, -1, axis=0) - v
    e_next = np.roll(e, -1, axis=0)
    cross = e[:, 0] * e_next[:, 1] - e[:, 1] * e_next[:, 0]
    lengths = np.linalg.norm(e, axis=1) * np.linalg.norm(e_next, axis=1)
    if np.any(cross < -1e-12 * lengths):
        raise DomainError("polygon is not convex")
    # a polygon with only left turns is simple iff it turns exactly once
    turning = np.arctan2(cross, np.sum(e * e_next, axis=1)).sum()
    if abs(turning - 2.0 * np.pi) > 1e-8:
        raise DomainError("polygon is self-intersecting")
    return np.ascontiguousarray(v)


def euclidean_inradius(vertices):
    """Radius of the largest Euclidean disk in a convex polygon (LP)."""
    v = np.asarray(vertices, dtype=float)
    e = np.roll(v, -1, axis=0) - v
    n = np.stack([e[:, 1], -e[:, 0]], axis=1)
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.hstack([n, np.ones((len(n), 1))]),
        b_ub=np.sum(n * v, axis=1),
        bounds=[(None, None), (None, None), (0, None)],
        method="highs",
    )
    return float(res.x[2])


def exact_anisotropic_inradius(vertices, norm):
    """R_F of a convex polygon from its edges, as a linear program.

    For a point x inside, the F°-distance to the line of edge e is
    ``n_e . (v_e - x) / F(n_e)``; R_F maximizes the smallest of these.
    """
    v = np.asarray(vertices, dtype=float)
    e = np.roll(v, -1, axis=0) - v
    n = np.stack([e[:, 1], -e[:, 0]], axis=1)
    n /= np.linalg.norm(n, axis=1, keepdims=True)
    fn = norm.eval(n)
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=np.hstack([n / fn[:, None], np.ones((len(n), 1))]),
        b_ub=np.sum(n * v, axis=1) / fn,
        bounds=[(None, None), (None, None), (0, None)],
        method="highs",
    )
    return float(res.x[2])


def make_polygon(vertices, h, name="polygon"):
    """Rasterize a convex polygon with grid spacing ``h``."""
    if not h > 0:
        raise DomainError("mesh spacing h must be positive")
    v = _validate_convex(vertices)
    r_in = euclidean_inradius(v)
    if r_in < 10.0 * h * (1.0 - 1e-9):
        raise DomainError(f"h={h} too coarse: inradius {r_in:.4g} spans fewer than 10 nodes")
    xmin, ymin = v.min(axis=0)
    xmax, ymax = v.max(axis=0)
    nx = int(math.ceil((xmax - xmin) / h - 1e-9)) + 1
    ny = int(math.ceil((ymax - ymin) / h - 1e-9)) + 1

    e = np.roll(v, -1, axis=0) - v
    lengths = np.linalg.norm(e, axis=1)
    normals = np.stack([e[:, 1], -e[:, 0]], axis=1) / lengths[:, None]

    xs = xmin + h * np.arange(nx)
    ys = ymin + h * np.arange(ny)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    signed = pts @ normals.T - np.sum(normals * v, axis=1)
    inside = np.all(signed < -1e-9 * h, axis=1).reshape(nx, ny)

    mids, weights, owner, nodes = [], [], [], []
    for k in range(len(v)):
        pieces = max(1, int(math.ceil(lengths[k] / (0.5 * h) - 1e-9)))
        s = (np.arange(pieces) + 0.5) / pieces
        mids.append(v[k] + s[:, None] * e[k])
        weights.append(np.full(pieces, lengths[k] / pieces))
        owner.append(np.full(pieces, k))
        nodes.append(v[k] + (np.arange(pieces) / pieces)[:, None] * e[k])
    owner = np.concatenate(owner)
    return GridDomain(
        vertices=v,
        h=float(h),
        x0=float(xmin),
        y0=float(ymin),
        nx=nx,
        ny=ny,
        inside=inside,
        boundary_pts=np.concatenate(mids),
        boundary_normals=normals[owner],
        boundary_weights=np.concatenate(weights),
        boundary_edge=owner,
        boundary_nodes=np.concatenate(nodes),
        name=name,
    )


def make_rectangle(width, height, h, center=(0.0, 0.0), name=None):
    if not (width > 0 and height > 0):
        raise DomainError("rectangle sides must be positive")
    cx, cy = center
    w, t = 0.5 * width, 0.5 * height
    verts = [(cx - w, cy - t), (cx + w, cy - t), (cx + w, cy + t), (cx - w, cy + t)]
    return make_polygon(verts, h, name=name or f"rect:a={width:g},b={height:g}")


def make_slab(a, ell, h):
    """The slab ``(-a/2, a/2) x (-ell/2, ell/2)``."""
    if not (a > 0 and ell > 0 and h > 0):
        raise DomainError("slab parameters a, l, h must be positive")
    return make_rectangle(a, ell, h, name=f"slab:a={a:g},l={ell:g}")


def make_square(h):
    return make_polygon([(0, 0), (1, 0), (1, 1), (0, 1)], h, name="square")


def make_disk(h, n=64, radius=1.0):
    """Regular n-gon inscribed in the circle of the given radius."""
    theta = 2.0 * np.pi * np.arange(n) / n
    verts = radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return make_polygon(verts, h, name=f"disk{n}" if radius == 1.0 else f"disk{n}:r={radius:g}")


def make_wulff(norm, h, radius=1.0, n=256):
    """Polygon through n points of the Wulff boundary ``{F° = radius}``."""
    theta = 2.0 * np.pi * np.arange(n) / n
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    verts = radius * dirs / norm.polar_eval(dirs)[:, None]
    return make_polygon(verts, h, name=f"wulff:{norm.to_spec()}")


def distance_field(domain, norm):
    """Brute-force ``d_F(x) = min_y F°(x - y)`` over boundary samples, per inside node."""
    pts = domain.inside_points()
    samples = np.concatenate([domain.boundary_pts, domain.boundary_nodes])
    family, params = norm.polar().kernel_params()
    values = kernels.min_norm_distance(pts, samples, family, params)
    if len(values):
        k = int(np.argmax(values))
        arg = tuple(int(i) for i in domain.inside_index[k])
    else:
        arg = None
    return DistanceField(values=values, argmax_node=arg, points=pts)


def inradius(domain, norm):
    """R_F as the maximum of the nodal distance field."""
    return distance_field(domain, norm).max


def _parse_params(text, allowed):
    params = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip().lower()
        if not sep or key not in allowed:
            raise DomainError(f"bad domain parameter {item!r}; expected {sorted(allowed)}")
        try:
            params[key] = float(value)
        except ValueError:
            raise DomainError(f"non-numeric domain parameter {item!r}") from None
    missing = set(allowed) - set(params)
    if missing:
        raise DomainError(f"missing domain parameters {sorted(missing)}")
    return params


def read_polygon_file(path):
    verts = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DomainError(f"{path}:{lineno}: expected 'x y'")
        try:
            verts.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise DomainError(f"{path}:{lineno}: non-numeric vertex") from None
    return verts


def parse_domain(text, h):
    """Builtin names ``square``, ``disk64``, ``slab:a=..,l=..``, ``rect:a=..,b=..`` or a vertex file."""
    raw = text.strip()
    name, _, rest = raw.lower().partition(":")
    if name == "square" and not rest:
        return make_square(h)
    if name == "disk64" and not rest:
        return make_disk(h, 64)
    if name == "slab":
        prm = _parse_params(rest, {"a", "l"})
        return make_slab(prm["a"], prm["l"], h)
    if name == "rect":
        prm = _parse_params(rest, {"a", "b"})
        return make_rectangle(prm["a"], prm["b"], h)
    path = Path(raw)
    if path.is_file():
        return make_polygon(read_polygon_file(path), h, name=str(path))
    raise DomainError(f"unknown domain {text!r}: not a builtin name or a readable file")
