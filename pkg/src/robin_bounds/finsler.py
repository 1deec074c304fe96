"""Finsler norm families with closed-form polars and gradients.

Three families are supported: the Euclidean norm, weighted quadratic norms
``sqrt(xi^T A xi)`` with ``A`` symmetric positive definite, and ``l_q`` norms.
All methods broadcast over leading axes; the last axis is the vector index.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError

EUCLIDEAN = "euclidean"
QUADRATIC = "quadratic"
LQ = "lq"

# family codes understood by the compiled kernels
KERNEL_QUADRATIC = 0
KERNEL_LQ = 1


@dataclass(frozen=True)
class FinslerNorm:
    kind: str
    dim: int = 2
    matrix: tuple = None
    matrix_inv: tuple = None
    q: float = None
    q_dual: float = None

    # -- evaluation ----------------------------------------------------------

    def _check(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.ndim == 0 or xi.shape[-1] != self.dim:
            raise DomainError(f"expected vectors of dimension {self.dim}, got shape {xi.shape}")
        return xi

    def eval(self, xi):
        """F(xi), broadcasting over leading axes."""
        xi = self._check(xi)
        if self.kind == EUCLIDEAN:
            return np.linalg.norm(xi, axis=-1)
        if self.kind == QUADRATIC:
            a = np.asarray(self.matrix)
            return np.sqrt(np.maximum(np.einsum("...i,ij,...j->...", xi, a, xi), 0.0))
        return _lq_eval(xi, self.q)

    def __call__(self, xi):
        return self.eval(xi)

    def grad(self, xi):
        """Gradient of F; undefined (DomainError) at the origin."""
        xi = self._check(xi)
        value = self.eval(xi)
        if np.any(value == 0):
            raise DomainError("the gradient of a norm is undefined at the origin")
        if self.kind == EUCLIDEAN:
            return xi / value[..., None]
        if self.kind == QUADRATIC:
            a = np.asarray(self.matrix)
            return (xi @ a) / value[..., None]
        q = self.q
        ratio = np.abs(xi) / value[..., None]
        return np.sign(xi) * ratio ** (q - 1.0)

    # -- polar ---------------------------------------------------------------

    def polar(self):
        """The dual norm as a FinslerNorm (closed form per family)."""
        if self.kind == EUCLIDEAN:
            return self
        if self.kind == QUADRATIC:
            return FinslerNorm(QUADRATIC, self.dim, matrix=self.matrix_inv, matrix_inv=self.matrix)
        return FinslerNorm(LQ, self.dim, q=self.q_dual, q_dual=self.q)

    def polar_eval(self, eta):
        return self.polar().eval(eta)

    def grad_polar(self, eta):
        return self.polar().grad(eta)

    # -- metadata ------------------------------------------------------------

    @property
    def lower_constant(self):
        """Largest ``a`` with ``a |xi| <= F(xi)``."""
        if self.kind == EUCLIDEAN:
            return 1.0
        if self.kind == QUADRATIC:
            return float(np.sqrt(np.linalg.eigvalsh(np.asarray(self.matrix)).min()))
        return float(min(1.0, self.dim ** (1.0 / self.q - 0.5)))

    @property
    def smooth_strongly_convex(self):
        """Whether F^p is smooth and strongly convex away from the origin.

        Fails for l_q with q != 2, whose Hessian degenerates (q > 2) or blows
        up (q < 2) on the coordinate axes.
        """
        return self.kind != LQ or self.q == 2.0

    def kernel_params(self):
        """(family code, parameter vector) for the compiled kernels (2D only)."""
        if self.dim != 2:
            raise DomainError("compiled kernels are 2D only")
        if self.kind == LQ:
            return KERNEL_LQ, np.array([self.q, 0.0, 0.0])
        a = np.eye(2) if self.kind == EUCLIDEAN else np.asarray(self.matrix)
        return KERNEL_QUADRATIC, np.array([a[0, 0], a[0, 1], a[1, 1]])

    def to_spec(self):
        if self.kind == EUCLIDEAN:
            return "euclidean"
        if self.kind == LQ:
            return f"lq:q={self.q:g}"
        a = np.asarray(self.matrix)
        if self.dim != 2:
            return f"quad:{a.tolist()}"
        return f"quad:a11={a[0, 0]:g},a12={a[0, 1]:g},a22={a[1, 1]:g}"


def _lq_eval(xi, q):
    scale = np.max(np.abs(xi), axis=-1)
    safe = np.where(scale > 0, scale, 1.0)
    s = np.sum((np.abs(xi) / safe[..., None]) ** q, axis=-1)
    return np.where(scale > 0, safe * s ** (1.0 / q), 0.0)


def euclidean(dim=2):
    if dim < 2:
        raise DomainError("dimension must be at least 2")
    return FinslerNorm(EUCLIDEAN, int(dim))


def weighted_quadratic(matrix):
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise DomainError("weighted quadratic norm needs a square matrix of size >= 2")
    if not np.allclose(a, a.T, rtol=0, atol=1e-14 * np.abs(a).max()):
        raise DomainError("weighted quadratic norm needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    if np.linalg.eigvalsh(a).min() <= 0:
        raise DomainError("weighted quadratic norm needs a positive definite matrix")
    inv = np.linalg.inv(a)
    inv = 0.5 * (inv + inv.T)
    as_tuple = lambda m: tuple(tuple(float(v) for v in row) for row in m)
    return FinslerNorm(QUADRATIC, a.shape[0], matrix=as_tuple(a), matrix_inv=as_tuple(inv))


def lq_norm(q, dim=2):
    q = float(q)
    if not np.isfinite(q) or q <= 1.0:
        raise DomainError(f"l_q norm needs 1 < q < inf, got {q}")
    if dim < 2:
        raise DomainError("dimension must be at least 2")
    return FinslerNorm(LQ, int(dim), q=q, q_dual=q / (q - 1.0))


def wulff_contains(norm, r, x0, x):
    """True where ``F°(x - x0) < r`` (open Wulff shape of radius r)."""
    if not r > 0:
        raise DomainError("Wulff radius must be positive")
    diff = np.asarray(x, dtype=float) - np.asarray(x0, dtype=float)
    inside = norm.polar_eval(diff) < r
    return bool(inside) if np.ndim(inside) == 0 else inside


def polar_eval_numeric(norm, eta, n_angles=7200):
    """Polar norm of a single 2D vector by direct maximization.

    Reference implementation for tests: a dense angular scan of
    ``<xi, eta> / F(xi)`` followed by bounded Brent refinement.
    """
    eta = np.asarray(eta, dtype=float)
    if norm.dim != 2 or eta.shape != (2,):
        raise DomainError("numeric polar is implemented for single 2D vectors")
    if not np.any(eta):
        return 0.0

    def ratio(theta):
        xi = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        return (xi @ eta) / norm.eval(xi)

    theta = np.linspace(0.0, 2.0 * np.pi, n_angles, endpoint=False)
    k = int(np.argmax(ratio(theta)))
    width = 2.0 * np.pi / n_angles
    res = minimize_scalar(
        lambda th: -ratio(np.array([th]))[0],
        bounds=(theta[k] - width, theta[k] + width),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return float(max(-res.fun, ratio(theta[k : k + 1])[0]))


def parse_norm(text, dim=2):
    """Parse ``euclidean``, ``lq:q=<val>`` or ``quad:a11=..,a12=..,a22=..``."""
    raw = text.strip().lower()
    name, _, rest = raw.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise DomainError(f"malformed norm parameter {item!r} in {text!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise DomainError(f"non-numeric norm parameter {item!r}") from None
    if name == "euclidean":
        if params:
            raise DomainError("euclidean norm takes no parameters")
        return euclidean(dim)
    if name == "lq":
        if set(params) != {"q"}:
            raise DomainError("lq norm needs exactly the parameter q")
        return lq_norm(params["q"], dim)
    if name == "quad":
        if set(params) != {"a11", "a12", "a22"}:
            raise DomainError("quad norm needs a11, a12, a22")
        return weighted_quadratic([[params["a11"], params["a12"]], [params["a12"], params["a22"]]])
    raise DomainError(f"unknown norm family {name!r}")
