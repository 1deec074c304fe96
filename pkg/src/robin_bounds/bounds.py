"""Closed-form eigenvalue bounds and the per-instance report.

The formula evaluators are pure functions of (p, beta, geometric data).
Numerical values of the eigenvalue and the torsion maximum enter only in
``assemble_report``.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from . import oned
from .errors import ConvergenceError, DomainError, WrongBranchError
from .ptrig import as_pexponent, pi_p

MARGIN_REL = 0.02


def _positive(name, value):
    value = float(value)
    if not (np.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive, got {value}")
    return value


def s0_from_torsion(p, M):
    """Length of the comparison interval, ``(p' M)^{1/p'}``."""
    pe = as_pexponent(p)
    M = _positive("torsion maximum M", M)
    return (pe.p_conj * M) ** (1.0 / pe.p_conj)


def lower_bound_torsion(p, beta, M):
    """First 1D eigenvalue on ``(0, s0)`` with ``s0`` from the torsion maximum (beta > 0)."""
    return oned.mu1_positive(p, beta, s0_from_torsion(p, M)).mu1


def lower_bound_inradius(p, beta, R_F):
    """``(p-1) (pi_p/2)^p / (R_F + (pi_p/2) beta^{-1/(p-1)})^p`` for beta > 0."""
    pe = as_pexponent(p)
    if not beta > 0:
        raise WrongBranchError("the inradius lower bound needs beta > 0")
    R_F = _positive("inradius", R_F)
    half = 0.5 * pi_p(pe)
    return (pe.p - 1.0) * half**pe.p / (R_F + half * beta ** (-1.0 / (pe.p - 1.0))) ** pe.p


def dirichlet_bound(p, R_F):
    """``(p-1) (pi_p/2)^p / R_F^p``."""
    pe = as_pexponent(p)
    R_F = _positive("inradius", R_F)
    return (pe.p - 1.0) * (0.5 * pi_p(pe)) ** pe.p / R_F**pe.p


def upper_bound_inradius(p, beta, R_F):
    """First 1D eigenvalue on ``(0, R_F)`` (beta < 0)."""
    R_F = _positive("inradius", R_F)
    return oned.mu1_negative(p, beta, R_F).mu1


def upper_bound_beta_only(p, beta):
    """``(1-p) |beta|^{p'}`` for beta < 0."""
    pe = as_pexponent(p)
    if not beta < 0:
        raise WrongBranchError("the beta-only upper bound needs beta < 0")
    return (1.0 - pe.p) * abs(beta) ** pe.p_conj


def upper_bound_exponential(p, beta, norm, per_direction=False):
    """Exponential test-function bound, minimized over the coordinate directions.

    Direction ``e_i`` gives ``(1-p) (|beta| / (F°(e_i) F(e_i)))^{p'}``.
    """
    pe = as_pexponent(p)
    if not beta < 0:
        raise WrongBranchError("the exponential upper bound needs beta < 0")
    eye = np.eye(norm.dim)
    products = norm.polar_eval(eye) * norm.eval(eye)
    values = (1.0 - pe.p) * (abs(beta) / products) ** pe.p_conj
    best = float(values.min())
    if per_direction:
        return best, [float(v) for v in values]
    return best


def torsion_max_bounds(p, N, R_F):
    """``(R^{p'} / (p' N^{p'-1}), R^{p'} / p')``."""
    pe = as_pexponent(p)
    if int(N) != N or N < 2:
        raise DomainError("dimension N must be an integer >= 2")
    R_F = _positive("inradius", R_F)
    upper = R_F**pe.p_conj / pe.p_conj
    return upper / N ** (pe.p_conj - 1.0), upper


@dataclass
class BoundReport:
    p: float
    beta: float
    domain: str
    norm: str
    R_F: float
    N: int = 2
    h: float = None
    M: float = None
    lambda_numeric: float = None
    lower_thm11: float = None
    lower_cor13: float = None
    dirichlet_bound: float = None
    upper_thm14: float = None
    upper_cor15: float = None
    upper_rem52: float = None
    upper_rem52_directions: list = None
    torsion_lower: float = None
    torsion_upper: float = None
    margin: float = None
    M_margin: float = None
    sandwich_ok: dict = field(default_factory=dict)
    hypothesis_note: str = ""
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self):
        return asdict(self)

    @property
    def all_ok(self):
        """False if any flag failed; None flags (indeterminate) are ignored."""
        return all(v is not False for v in self.sandwich_ok.values())


def _margin(value, coarse):
    m = MARGIN_REL * abs(value)
    if coarse is not None:
        m = max(m, abs(value - coarse))
    return m


def _numeric_pair(solve, domain, coarse_domain):
    fine = solve(domain)
    coarse = solve(coarse_domain) if coarse_domain is not None else None
    return fine, coarse


def assemble_report(domain, norm, p, beta, with_numeric=False, M=None, grid_doubling=True, solver_options=None):
    """Evaluate every applicable bound for one (domain, norm, p, beta) instance.

    With ``with_numeric`` the torsion maximum and the first Robin eigenvalue
    are computed on ``domain`` and, for the margin, on the same polygon
    with spacing ``2h``. Flags hold True/False, or None when a numeric value
    is missing (solver failure).
    """
    from . import geometry, pde

    pe = as_pexponent(p)
    beta = float(beta)
    R_F = geometry.inradius(domain, norm)
    t_lo, t_hi = torsion_max_bounds(pe, norm.dim, R_F)
    rep = BoundReport(
        p=pe.p,
        beta=beta,
        domain=domain.name,
        norm=norm.to_spec(),
        R_F=R_F,
        N=norm.dim,
        h=domain.h,
        torsion_lower=t_lo,
        torsion_upper=t_hi,
    )
    notes = [domain.hypothesis_note]
    if not norm.smooth_strongly_convex:
        notes.append("l_q norm with q != 2: F^p is not strongly convex on the coordinate axes")
    rep.hypothesis_note = "; ".join(notes)
    opts = dict(solver_options or {})

    coarse_domain = None
    if with_numeric and grid_doubling:
        try:
            coarse_domain = geometry.make_polygon(domain.vertices, 2.0 * domain.h, name=domain.name)
        except DomainError:
            coarse_domain = None

    M_coarse = None
    if with_numeric and M is None and beta >= 0:
        try:
            fine, coarse = _numeric_pair(
                lambda d: pde.solve_torsion(d, norm, pe, **opts)[1], domain, coarse_domain
            )
            M, M_coarse = fine, coarse
        except ConvergenceError as exc:
            rep.diagnostics["torsion_error"] = str(exc)
    if M is not None:
        rep.M = float(M)
        rep.M_margin = _margin(rep.M, M_coarse)

    lam_coarse = None
    if with_numeric:
        try:
            fine, coarse = _numeric_pair(
                lambda d: pde.solve_robin_eig(d, norm, pe, beta, **opts).lam, domain, coarse_domain
            )
            rep.lambda_numeric, lam_coarse = fine, coarse
            rep.margin = _margin(fine, coarse)
            if beta == 0:
                rep.margin = max(rep.margin, 1e-8)
            rep.diagnostics["lambda_coarse"] = coarse
        except ConvergenceError as exc:
            rep.diagnostics["eigen_error"] = str(exc)

    lam = rep.lambda_numeric
    flags = rep.sandwich_ok

    def compare(name, ok_value):
        flags[name] = None if ok_value is None else bool(ok_value)

    if beta > 0:
        rep.lower_cor13 = lower_bound_inradius(pe, beta, R_F)
        rep.dirichlet_bound = dirichlet_bound(pe, R_F)
        if rep.M is not None:
            rep.lower_thm11 = lower_bound_torsion(pe, beta, rep.M)
        if lam is None:
            compare("lambda_ge_thm11", None)
            compare("lambda_ge_cor13", None)
        else:
            compare("lambda_ge_thm11", None if rep.lower_thm11 is None else lam >= rep.lower_thm11 - rep.margin)
            compare("lambda_ge_cor13", lam >= rep.lower_cor13 - rep.margin)
        if rep.lower_thm11 is not None:
            # both are exact bounds; the slack comes only from M's discretization
            tol = MARGIN_REL * abs(rep.lower_thm11)
            compare("thm11_ge_cor13", rep.lower_thm11 >= rep.lower_cor13 - tol)
    elif beta < 0:
        rep.upper_thm14 = upper_bound_inradius(pe, beta, R_F)
        rep.upper_cor15 = upper_bound_beta_only(pe, beta)
        rep.upper_rem52, rep.upper_rem52_directions = upper_bound_exponential(pe, beta, norm, per_direction=True)
        if lam is None:
            compare("lambda_le_thm14", None)
        else:
            compare("lambda_le_thm14", lam <= rep.upper_thm14 + rep.margin)
        compare("thm14_le_cor15", rep.upper_thm14 <= rep.upper_cor15 + 1e-10 * abs(rep.upper_cor15))
        compare("cor15_le_rem52", rep.upper_cor15 <= rep.upper_rem52 + 1e-10 * abs(rep.upper_cor15))
    else:
        if lam is not None:
            compare("lambda_neumann_zero", abs(lam) <= rep.margin)

    if rep.M is not None:
        m_tol = rep.M_margin or 0.0
        compare("torsion_lower", rep.M >= t_lo - m_tol)
        compare("torsion_upper", rep.M <= t_hi + m_tol)
    return rep
