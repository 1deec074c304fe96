"""Acceptance criteria, one PASS/FAIL line each (also listed in the terminal summary).

Runtime limits are part of each criterion. Run directly with
``python -m pytest tests/test_acceptance.py -s`` to see the lines as they finish.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate
from scipy.optimize import brentq

from robin_bounds import bounds, finsler, geometry, oned, pde
from robin_bounds.pde import oracles
from robin_bounds.ptrig import arccos_p, arccosh_p, cos_p, cosh_p, pi_p

P_GRID = [1.2, 1.5, 2.0, 3.0, 5.0]
H = 0.02
GRID_P = [1.5, 2.0, 3.0]


def grid_domains():
    return [
        geometry.make_square(H),
        geometry.make_disk(H),
        geometry.make_rectangle(1, 2, H, name="rect:a=1,b=2"),
    ]


def grid_norms():
    return [finsler.euclidean(), finsler.weighted_quadratic([[4.0, 0.0], [0.0, 1.0]]), finsler.lq_norm(3.0)]


def record(log, number, title, ok, detail, elapsed=None, limit=None):
    if limit is not None:
        ok = ok and elapsed < limit
    timing = "" if elapsed is None else f" [{elapsed:.1f}s" + (f" < {limit:g}s]" if limit else "]")
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {title}: {detail}{timing}"
    print(line)
    log.append(line)
    assert ok, line


def run_grid(betas):
    reports = []
    t0 = time.perf_counter()
    for dom in grid_domains():
        for norm in grid_norms():
            for p in GRID_P:
                for beta in betas:
                    reports.append(bounds.assemble_report(dom, norm, p, beta, with_numeric=True))
    return reports, time.perf_counter() - t0


@pytest.fixture(scope="module")
def positive_grid():
    return run_grid([0.1, 1.0, 10.0])


@pytest.fixture(scope="module")
def negative_grid():
    return run_grid([-0.1, -1.0, -5.0])


def describe(rep):
    return f"{rep.domain}/{rep.norm}/p={rep.p:g}/beta={rep.beta:g}"


def test_criterion_01_special_functions(acceptance_log):
    t0 = time.perf_counter()
    t = np.linspace(-10, 10, 1000)
    errs = {
        "cos_2": np.abs(cos_p(2, t) - np.cos(t)).max(),
        "arccos_2": np.abs(arccos_p(2, np.linspace(0, 1, 1000)) - np.arccos(np.linspace(0, 1, 1000))).max(),
        "cosh_2": np.abs(cosh_p(2, np.linspace(-5, 5, 1000)) - np.cosh(np.linspace(-5, 5, 1000))).max(),
        "arccosh_2": np.abs(arccosh_p(2, np.linspace(1, 50, 1000)) - np.arccosh(np.linspace(1, 50, 1000))).max(),
    }
    for p in P_GRID:
        # quadrature of 2 int_0^1 (1 - s^p)^{-1/p} ds with the endpoint singularity in the weight
        f = lambda s: ((1 - s**p) / (1 - s)) ** (-1.0 / p) if s < 1 else p ** (-1.0 / p)
        quad, _ = integrate.quad(f, 0.0, 1.0, weight="alg", wvar=(0.0, -1.0 / p), epsabs=1e-15, epsrel=1e-14)
        errs[f"pi_{p:g}"] = abs(pi_p(p) - 2 * quad)
    elapsed = time.perf_counter() - t0
    worst = max(errs, key=errs.get)
    ok = all(v <= 1e-10 for v in errs.values())
    record(acceptance_log, 1, "special-function fidelity", ok, f"max error {errs[worst]:.2e} ({worst}) <= 1e-10",
           elapsed, 5)


def test_criterion_02_pythagorean_identities(acceptance_log):
    t0 = time.perf_counter()
    worst_c, worst_h = {}, {}
    for p in P_GRID:
        t = np.linspace(0, pi_p(p) / 2, 1002)[1:-1]
        step = 1e-6 * np.maximum(1.0, t)
        d = (cos_p(p, t + step) - cos_p(p, t - step)) / (2 * step)
        worst_c[p] = np.abs(np.abs(d) ** p + cos_p(p, t) ** p - 1.0).max()
        t = np.linspace(0, 3, 1002)[1:-1]
        step = 1e-6 * np.maximum(1.0, t)
        d = (cosh_p(p, t + step) - cosh_p(p, t - step)) / (2 * step)
        worst_h[p] = np.abs(cosh_p(p, t) ** p - np.abs(d) ** p - 1.0).max()
    elapsed = time.perf_counter() - t0
    ok = max(worst_c.values()) <= 1e-8 and max(worst_h.values()) <= 1e-8
    hyp = ", ".join(f"p={p:g}:{v:.1e}" for p, v in worst_h.items())
    record(acceptance_log, 2, "Pythagorean identities", ok,
           f"circular max {max(worst_c.values()):.1e}; hyperbolic {hyp}; tolerance 1e-8", elapsed, 5)


def test_criterion_03_oned_equivalence(acceptance_log):
    t0 = time.perf_counter()
    worst_res, worst_gap, n = 0.0, 0.0, 0
    for p in GRID_P:
        pc = p / (p - 1)
        for b in (0.1, 1.0, 10.0):
            for s0 in (0.25, 1.0, 4.0):
                for beta in (b, -b):
                    r = oned.mu1(p, beta, s0)
                    if beta > 0:
                        res = oned.positive_residual(p, beta, s0, r.mu_tilde)
                    else:
                        res = oned.negative_residual(p, beta, s0, -r.mu_tilde)
                    worst_res = max(worst_res, abs(res) / b**pc)
                    worst_gap = max(worst_gap, abs(oned.variational_oracle(p, beta, s0, n=4096) - r.mu1))
                    n += 1
    elapsed = time.perf_counter() - t0
    ok = worst_res <= 1e-10 and worst_gap <= 1e-3
    record(acceptance_log, 3, "1D eigenvalue equivalence", ok,
           f"{n} instances, residual/|beta|^p' max {worst_res:.1e} <= 1e-10, oracle gap max {worst_gap:.1e} <= 1e-3",
           elapsed, 120)


def test_criterion_04_classical_p2(acceptance_log):
    kp = brentq(lambda k: k * math.tan(k) - 1.0, 1e-12, math.pi / 2 - 1e-15, xtol=1e-16, rtol=1e-15)
    kn = brentq(lambda k: k * math.tanh(k) - 1.0, 1e-12, 3.0, xtol=1e-16, rtol=1e-15)
    e_pos = abs(oned.mu1(2, 1.0, 1.0).mu1 - kp * kp)
    e_neg = abs(oned.mu1(2, -1.0, 1.0).mu1 + kn * kn)
    ok = e_pos <= 1e-8 and e_neg <= 1e-8 and abs(kp * kp - 0.740174) < 1e-6 and abs(kn * kn - 1.439229) < 1e-6
    record(acceptance_log, 4, "p=2 classical cross-check", ok,
           f"|mu1 - tan root| {e_pos:.1e}, |mu1 - tanh root| {e_neg:.1e} <= 1e-8")


def test_criterion_05_lower_sandwich(acceptance_log, positive_grid):
    reports, elapsed = positive_grid
    keys = ("lambda_ge_thm11", "lambda_ge_cor13", "thm11_ge_cor13")
    bad = [describe(r) for r in reports if any(r.sandwich_ok.get(k) is not True for k in keys)]
    slack = min((r.lambda_numeric - r.lower_thm11) / r.lambda_numeric for r in reports
                if r.lambda_numeric is not None and r.lower_thm11 is not None)
    detail = f"{len(reports) - len(bad)}/{len(reports)} instances hold; min (lambda - thm11)/lambda {slack:.3f}"
    if bad:
        detail += "; failing " + ", ".join(bad[:5])
    record(acceptance_log, 5, "lower-bound sandwich", not bad, detail, elapsed, 900)


def test_criterion_06_upper_sandwich(acceptance_log, negative_grid):
    reports, elapsed = negative_grid
    keys = ("lambda_le_thm14", "thm14_le_cor15", "cor15_le_rem52")
    bad = [describe(r) for r in reports if any(r.sandwich_ok.get(k) is not True for k in keys)]
    detail = f"{len(reports) - len(bad)}/{len(reports)} instances hold"
    if bad:
        detail += "; failing " + ", ".join(bad[:5])
    record(acceptance_log, 6, "upper-bound sandwich", not bad, detail, elapsed, 600)


def test_criterion_07_torsion(acceptance_log, positive_grid):
    reports, _ = positive_grid
    e = finsler.euclidean()
    t0 = time.perf_counter()
    _, M_disk = pde.solve_torsion(geometry.make_disk(H), e, 2)
    _, M_square = pde.solve_torsion(geometry.make_square(H), e, 2)
    elapsed = time.perf_counter() - t0
    disk_err = abs(M_disk - 0.25) / 0.25
    series = oracles.rectangle_torsion_max(1, 1)
    sq_err = abs(M_square - series) / series
    # one torsion solve per (domain, norm, p); the beta copies repeat it
    seen = {}
    for r in reports:
        seen[(r.domain, r.norm, r.p)] = r.sandwich_ok.get("torsion_lower") is True and r.sandwich_ok.get("torsion_upper") is True
    bad = [k for k, v in seen.items() if not v]
    ok = disk_err <= 0.02 and sq_err <= 0.02 and not bad
    record(acceptance_log, 7, "torsion maximum bounds", ok,
           f"disk64 M={M_disk:.5f} ({disk_err:.2%} from 0.25); square M={M_square:.5f} ({sq_err:.2%} from series); "
           f"{len(seen) - len(bad)}/{len(seen)} instances inside bounds", elapsed)


def test_criterion_08_slab(acceptance_log):
    e = finsler.euclidean()
    ells = [2.0, 4.0, 8.0]
    t0 = time.perf_counter()
    parts, ok = [], True
    for beta in (1.0, -1.0):
        recs = pde.slab_experiment(2, beta, 1.0, ells, e, H)
        ratios = [r.ratio for r in recs]
        if any(r is None for r in ratios):
            ok = False
            parts.append(f"beta={beta:+g}: solver errors {[r.error for r in recs if r.error]}")
            continue
        exact = [pde.separable_slab_ratio(beta, 1.0, ell) for ell in ells]
        far = pde.separable_slab_ratio(beta, 1.0, 64.0)
        monotone = all(abs(b - 1) < abs(a - 1) for a, b in zip(ratios, ratios[1:]))
        final_ok = abs(ratios[-1] - 1) <= 0.05
        cross_ok = all(abs(r - x) <= 0.01 * x for r, x in zip(ratios, exact))
        far_ok = abs(far - 1) <= 1e-3
        ok = ok and monotone and final_ok and cross_ok and far_ok
        parts.append(
            f"beta={beta:+g}: ratios {', '.join(f'{r:.4f}' for r in ratios)} (monotone {monotone}, "
            f"final within 5% {final_ok}), separable {', '.join(f'{x:.4f}' for x in exact)} (agree {cross_ok}), "
            f"separable l=64 {far:.5f} (within 1e-3 {far_ok})"
        )
    elapsed = time.perf_counter() - t0
    record(acceptance_log, 8, "slab optimality", ok, "; ".join(parts), elapsed, 600)


def test_criterion_09_dirichlet_limit(acceptance_log):
    gaps = []
    for R in (0.5, 1.0):
        d = bounds.dirichlet_bound(2, R)
        gaps.append(abs(bounds.lower_bound_inradius(2, 1e8, R) - d) / d)
    t0 = time.perf_counter()
    lam = pde.solve_robin_eig(geometry.make_square(H), finsler.euclidean(), 2, 1e4).lam
    elapsed = time.perf_counter() - t0
    ref = oracles.rectangle_dirichlet_p2(1, 1)
    err = abs(lam - ref) / ref
    ok = max(gaps) < 1e-4 and err <= 0.05
    record(acceptance_log, 9, "Dirichlet limit", ok,
           f"inradius-bound gap {max(gaps):.1e} < 1e-4; square lambda(1e4)={lam:.4f} vs 2pi^2 ({err:.2%} <= 5%)", elapsed)


def test_criterion_10_pfunction(acceptance_log):
    e = finsler.euclidean()
    t0 = time.perf_counter()
    out = {}
    for dom in (geometry.make_disk(H), geometry.make_rectangle(1, 8, H)):
        w, M = pde.solve_torsion(dom, e, 2)
        out[dom.name] = pde.pfunction_check(w, e, 2, M)
    elapsed = time.perf_counter() - t0
    ok = all(v <= 5 * H for v in out.values())
    record(acceptance_log, 10, "P-function report", ok,
           ", ".join(f"{k} max violation {v:.2e}" for k, v in out.items()) + f" <= {5 * H:g}", elapsed)


def test_criterion_11_finsler_identities(acceptance_log):
    rng = np.random.default_rng(20240611)
    norms = {
        "euclidean": finsler.euclidean(),
        "quad": finsler.weighted_quadratic([[2.0, 0.5], [0.5, 1.0]]),
        "lq3": finsler.lq_norm(3.0),
        "lq1.5": finsler.lq_norm(1.5),
    }
    worst = {"duality": 0.0, "euler": 0.0, "prodscal": -np.inf}
    for norm in norms.values():
        xi = rng.normal(size=(10_000, 2))
        eta = rng.normal(size=(10_000, 2))
        off = np.min(np.abs(xi), axis=1) > 1e-3 * np.max(np.abs(xi), axis=1)
        xo = xi[off]
        eo = eta[np.min(np.abs(eta), axis=1) > 1e-3 * np.max(np.abs(eta), axis=1)]
        worst["duality"] = max(worst["duality"], np.abs(norm.polar_eval(norm.grad(xo)) - 1).max(),
                               np.abs(norm.eval(norm.grad_polar(eo)) - 1).max())
        worst["euler"] = max(worst["euler"], (np.abs(np.sum(norm.grad(xo) * xo, axis=1) - norm.eval(xo)) / norm.eval(xo)).max())
        excess = np.abs(np.sum(xi * eta, axis=1)) - norm.eval(xi) * norm.polar_eval(eta)
        worst["prodscal"] = max(worst["prodscal"], excess.max())
    ok = worst["duality"] <= 1e-8 and worst["euler"] <= 1e-10 and worst["prodscal"] <= 1e-12
    record(acceptance_log, 11, "Finsler identities", ok,
           f"duality {worst['duality']:.1e} <= 1e-8, Euler {worst['euler']:.1e} <= 1e-10, "
           f"max(|xi.eta| - F F°) {worst['prodscal']:.1e} <= 1e-12 over 1e4 samples x {len(norms)} norms")
