import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from robin_bounds import bounds, finsler, geometry
from robin_bounds.errors import DomainError, WrongBranchError
from robin_bounds.pde.oracles import rectangle_robin_p2

P_GRID = [1.2, 1.5, 2.0, 3.0, 5.0]
NORMS = {
    "euclidean": finsler.euclidean(),
    "quad": finsler.weighted_quadratic([[4.0, 0.0], [0.0, 1.0]]),
    "l3": finsler.lq_norm(3.0),
}


def pi_closed(p):
    return 2.0 * math.pi / (p * math.sin(math.pi / p))


def neumann_robin_p2(beta, s0):
    # X'' + mu X = 0, X'(0) = 0, X'(s0) + beta X(s0) = 0, beta > 0
    k = brentq(lambda k: k * math.tan(k * s0) - beta, 1e-300, math.pi / (2 * s0) * (1 - 1e-15), xtol=1e-16, rtol=1e-15)
    return k * k


def neumann_robin_p2_negative(beta, s0):
    k = brentq(lambda k: k * math.tanh(k * s0) - abs(beta), 1e-300, abs(beta) + 1 / s0 + 1, xtol=1e-16, rtol=1e-15)
    return -k * k


ps = st.sampled_from(P_GRID) | st.floats(1.2, 5.0)
radii = st.floats(0.05, 20.0)


class TestS0:
    def test_examples(self):
        assert bounds.s0_from_torsion(2, 0.125) == pytest.approx(0.5, abs=1e-15)
        assert bounds.s0_from_torsion(2, 0.25) == pytest.approx(0.707107, abs=1e-6)
        assert bounds.s0_from_torsion(3, 1.0) == pytest.approx(1.310371, abs=1e-6)

    @pytest.mark.parametrize("M", [0.0, -1.0, float("nan"), float("inf")])
    def test_rejects(self, M):
        with pytest.raises(DomainError):
            bounds.s0_from_torsion(2, M)

    @given(ps, st.floats(1e-3, 10.0), st.floats(0.1, 10.0))
    def test_scaling(self, p, M, t):
        pc = p / (p - 1)
        assert bounds.s0_from_torsion(p, t**pc * M) == pytest.approx(t * bounds.s0_from_torsion(p, M), rel=1e-12)


class TestLowerBounds:
    def test_torsion_example(self):
        # oracle value; see ledger for the stated approximation
        expected = neumann_robin_p2(1.0, 0.5)
        assert expected == pytest.approx(1.707053, abs=1e-6)
        assert bounds.lower_bound_torsion(2, 1.0, 0.125) == pytest.approx(expected, abs=1e-10)

    def test_torsion_limits(self):
        assert 0 < bounds.lower_bound_torsion(2, 1e-8, 0.125) < 1e-7
        assert bounds.lower_bound_torsion(2, 1e6, 0.125) == pytest.approx(math.pi**2, abs=1e-2)

    def test_inradius_examples(self):
        assert bounds.lower_bound_inradius(2, 1.0, 1.0) == pytest.approx(0.373340, abs=1e-6)
        assert bounds.lower_bound_inradius(3, 1.0, 1.0) == pytest.approx(0.327959, abs=1e-6)
        assert bounds.lower_bound_inradius(2, 1e12, 1.0) == pytest.approx((math.pi / 2) ** 2, rel=1e-10)

    def test_inradius_independent_arithmetic(self):
        for p in P_GRID:
            half = 0.5 * pi_closed(p)
            want = (p - 1) * half**p / (0.7 + half * 2.5 ** (-1 / (p - 1))) ** p
            assert bounds.lower_bound_inradius(p, 2.5, 0.7) == pytest.approx(want, rel=1e-12)

    def test_inradius_wrong_branch(self):
        with pytest.raises(WrongBranchError):
            bounds.lower_bound_inradius(2, -1.0, 1.0)
        with pytest.raises(DomainError):
            bounds.lower_bound_inradius(2, 1.0, 0.0)

    def test_torsion_wrong_branch(self):
        with pytest.raises(WrongBranchError):
            bounds.lower_bound_torsion(2, -1.0, 0.125)


class TestDirichlet:
    def test_examples(self):
        assert bounds.dirichlet_bound(2, 0.5) == pytest.approx(math.pi**2, rel=1e-14)
        assert bounds.dirichlet_bound(2, 1.0) == pytest.approx((math.pi / 2) ** 2, rel=1e-14)
        assert bounds.dirichlet_bound(1.5, 1.0) == pytest.approx(1.8804508, abs=1e-6)
        assert bounds.dirichlet_bound(1.5, 1.0) == pytest.approx(0.5 * (pi_closed(1.5) / 2) ** 1.5, rel=1e-12)

    @given(ps, radii, st.floats(0.1, 10.0))
    def test_scaling(self, p, R, t):
        assert bounds.dirichlet_bound(p, t * R) == pytest.approx(t ** (-p) * bounds.dirichlet_bound(p, R), rel=1e-12)

    @pytest.mark.parametrize("p", P_GRID)
    def test_beta_limit_monotone(self, p):
        d = bounds.dirichlet_bound(p, 1.0)
        vals = [bounds.lower_bound_inradius(p, b, 1.0) for b in [1e-2, 1, 1e2, 1e4, 1e6, 1e8]]
        # beta^{-1/(p-1)} underflows the sum for small p, so only non-strict
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert vals[0] < vals[1] and vals[-1] <= d

    def test_gap_at_1e8(self):
        d = bounds.dirichlet_bound(2, 1.0)
        assert abs(bounds.lower_bound_inradius(2, 1e8, 1.0) - d) / d < 1e-4


class TestUpperBounds:
    def test_inradius_examples(self):
        assert bounds.upper_bound_inradius(2, -1.0, 1.0) == pytest.approx(-1.439229, abs=1e-6)
        assert bounds.upper_bound_inradius(2, -1.0, 1.0) == pytest.approx(neumann_robin_p2_negative(-1, 1), abs=1e-10)
        assert bounds.upper_bound_inradius(2, -1.0, 20.0) == pytest.approx(-1.0, abs=1e-6)
        assert -1e-7 < bounds.upper_bound_inradius(2, -1e-8, 1.0) < 0

    def test_beta_only_examples(self):
        assert bounds.upper_bound_beta_only(2, -1.0) == -1.0
        assert bounds.upper_bound_beta_only(2, -2.0) == pytest.approx(-4.0, rel=1e-15)
        assert bounds.upper_bound_beta_only(3, -1.0) == pytest.approx(-2.0, rel=1e-15)
        with pytest.raises(WrongBranchError):
            bounds.upper_bound_beta_only(2, 1.0)

    @pytest.mark.parametrize("name", sorted(NORMS))
    def test_exponential_examples(self, name):
        best, per = bounds.upper_bound_exponential(2, -1.0, NORMS[name], per_direction=True)
        assert best == pytest.approx(-1.0, abs=1e-12)
        assert per == pytest.approx([-1.0, -1.0], abs=1e-12)

    def test_exponential_rotated_quadratic(self):
        # F(e1) F°(e1) = sqrt(a11 * (A^-1)_11) > 1 off the eigenvectors
        A = [[2.0, 1.0], [1.0, 2.0]]
        norm = finsler.weighted_quadratic(A)
        prod = math.sqrt(2.0 * (2.0 / 3.0))
        best, per = bounds.upper_bound_exponential(2, -1.0, norm, per_direction=True)
        assert per == pytest.approx([-(1 / prod) ** 2] * 2, rel=1e-12)
        assert best == pytest.approx(min(per))
        assert best > -1.0

    def test_exponential_wrong_branch(self):
        with pytest.raises(WrongBranchError):
            bounds.upper_bound_exponential(2, 0.0, NORMS["euclidean"])


class TestTorsionBounds:
    def test_examples(self):
        assert bounds.torsion_max_bounds(2, 2, 1.0) == pytest.approx((0.25, 0.5), abs=1e-15)
        assert bounds.torsion_max_bounds(3, 2, 1.0) == pytest.approx((0.471405, 0.666667), abs=1e-6)

    @pytest.mark.parametrize("N", [1, 2.5, 0])
    def test_rejects_dimension(self, N):
        with pytest.raises(DomainError):
            bounds.torsion_max_bounds(2, N, 1.0)

    @given(ps, st.integers(2, 6), radii)
    def test_lower_below_upper(self, p, N, R):
        lo, hi = bounds.torsion_max_bounds(p, N, R)
        assert 0 < lo < hi


class TestOrderings:
    @settings(max_examples=60, deadline=None)
    @given(ps, st.floats(-10.0, -1e-3), radii, st.sampled_from(sorted(NORMS)))
    def test_negative_chain(self, p, beta, R, name):
        t14 = bounds.upper_bound_inradius(p, beta, R)
        c15 = bounds.upper_bound_beta_only(p, beta)
        r52 = bounds.upper_bound_exponential(p, beta, NORMS[name])
        assert t14 <= c15 + 1e-10 * abs(c15)
        assert c15 <= r52 + 1e-10 * abs(c15)

    @settings(max_examples=60, deadline=None)
    @given(ps, st.floats(1e-2, 100.0), st.floats(0.1, 5.0), st.floats(0.01, 1.0))
    def test_positive_chain(self, p, beta, R, frac):
        # any admissible M (at most R^{p'}/p') gives lower_thm11 >= lower_cor13
        lo, hi = bounds.torsion_max_bounds(p, 2, R)
        M = frac * hi
        assume(M > 1e-6)
        t11 = bounds.lower_bound_torsion(p, beta, M)
        c13 = bounds.lower_bound_inradius(p, beta, R)
        assert t11 >= c13 * (1 - 1e-9)


class TestReport:
    def test_positive_fields(self):
        dom = geometry.make_square(0.05)
        rep = bounds.assemble_report(dom, NORMS["euclidean"], 2, 1.0, M=0.07367)
        assert rep.lower_cor13 is not None and rep.lower_thm11 is not None and rep.dirichlet_bound is not None
        assert rep.upper_thm14 is None and rep.upper_cor15 is None and rep.upper_rem52 is None
        assert rep.sandwich_ok["lambda_ge_cor13"] is None
        assert rep.sandwich_ok["thm11_ge_cor13"] is True
        assert rep.R_F == pytest.approx(0.5, abs=1e-9)

    def test_negative_fields(self):
        dom = geometry.make_square(0.05)
        rep = bounds.assemble_report(dom, NORMS["euclidean"], 2, -1.0)
        assert rep.lower_cor13 is None and rep.lower_thm11 is None and rep.dirichlet_bound is None
        assert rep.upper_cor15 == -1.0
        assert rep.upper_rem52 == pytest.approx(-1.0, abs=1e-12)
        assert rep.sandwich_ok["thm14_le_cor15"] and rep.sandwich_ok["cor15_le_rem52"]
        assert rep.sandwich_ok["lambda_le_thm14"] is None

    def test_hypothesis_note(self):
        dom = geometry.make_square(0.05)
        rep = bounds.assemble_report(dom, NORMS["l3"], 2, 1.0)
        assert "strongly convex" in rep.hypothesis_note
        assert rep.hypothesis_note

    @pytest.mark.slow
    def test_square_positive_numeric(self):
        dom = geometry.make_square(0.05)
        rep = bounds.assemble_report(dom, NORMS["euclidean"], 2, 1.0, with_numeric=True)
        assert rep.lambda_numeric == pytest.approx(rectangle_robin_p2(1, 1, 1.0), rel=0.02)
        assert rep.lower_cor13 <= rep.lower_thm11 <= rep.lambda_numeric
        assert rep.all_ok and set(rep.sandwich_ok) >= {"lambda_ge_thm11", "lambda_ge_cor13", "torsion_lower"}
        assert rep.margin >= 0.02 * rep.lambda_numeric

    def test_neumann_numeric(self):
        dom = geometry.make_square(0.05)
        rep = bounds.assemble_report(dom, NORMS["quad"], 2.5, 0.0, with_numeric=True)
        assert abs(rep.lambda_numeric) < 1e-8
        assert rep.sandwich_ok["lambda_neumann_zero"] is True
        for name in ("lower_thm11", "lower_cor13", "dirichlet_bound", "upper_thm14", "upper_cor15", "upper_rem52"):
            assert getattr(rep, name) is None

    def test_square_negative_numeric(self):
        dom = geometry.make_square(0.05)
        rep = bounds.assemble_report(dom, NORMS["euclidean"], 2, -1.0, with_numeric=True)
        assert rep.upper_cor15 == -1.0
        assert rep.lambda_numeric <= rep.upper_thm14 <= rep.upper_cor15
        assert rep.all_ok

    def test_as_dict_roundtrip(self):
        dom = geometry.make_square(0.05)
        d = bounds.assemble_report(dom, NORMS["euclidean"], 2, -1.0).as_dict()
        assert d["beta"] == -1.0 and d["domain"] == "square"
        assert isinstance(d["sandwich_ok"], dict)
