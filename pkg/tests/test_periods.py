import json
from fractions import Fraction

import pytest

from clutch.combo import CohomClass, DiffCombo, alpha, omega
from clutch.elliptic import EllipticData, WpContext
from clutch.periods import (GluingDatum, closed_Phi1, elliptic_pair, elliptic_substitution_pair,
                            genus1_ab, genus1_pi, genus1_pi_swapped, gluing_residual, pi_graded,
                            pi_j_closed, solve_section, swap_tags, symbolic_pair)
from clutch.series import CoeffPoly, QTrunc, SeriesError


def c(index, tag):
    return WpContext(tag).c(index)


def mono(*factors):
    out = CoeffPoly.const(1)
    for f in factors:
        out = out * f
    return out


def grade_of(cls, j):
    return CohomClass(cls.g, 0, {lab: QTrunc.const(0, x.c[j]) for lab, x in cls.coeffs.items()})


PAIRS = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]


class TestSolver:
    def test_order_zero_decouples(self):
        d = symbolic_pair(2, 1, 0)
        s = solve_section(d, 1)
        assert s.omega1 == DiffCombo.single(alpha(1))
        assert not s.omega2
        assert not s.phi2.terms
        assert s.phi1.coeff(1).c[0] == 1

    def test_elliptic_matches_recursion(self):
        N = 11
        s = solve_section(elliptic_pair(N), 0)
        ab = genus1_ab(N)
        assert s.omega2.coeff(omega(2)) == -QTrunc.q(N)
        for key, b in ab.b.items():
            assert s.omega2.coeff(omega(key)) == -b.shift(1)
        for key, a in ab.a.items():
            if key >= 4:
                assert s.omega1.coeff(omega(key)) == a
        assert not s.omega1.coeff(omega(2))  # a2 = 0 re-derived

    @pytest.mark.parametrize("datum", [elliptic_pair(9), symbolic_pair(2, 2, 5), symbolic_pair(1, 3, 6)])
    def test_gluing_residual_vanishes(self, datum):
        for side, data in ((1, datum.side1), (2, datum.side2)):
            for i in range(data.g):
                s = solve_section(datum, i, side)
                r1, r2 = gluing_residual(datum, s)
                assert not r1.terms and not r2.terms

    def test_side_two_seed_is_mirror(self):
        d = symbolic_pair(1, 2, 4)
        s = solve_section(d, 1, side=2)
        mirror = solve_section(GluingDatum(d.side2, d.side1, 4), 1)
        assert s.omega2 == mirror.omega1 and s.omega1 == mirror.omega2

    def test_seed_out_of_range(self):
        with pytest.raises(SeriesError):
            solve_section(symbolic_pair(1, 1, 2), 1)


class TestClosedForm:
    @pytest.mark.parametrize("g1,g2", PAIRS)
    def test_solver_agrees(self, g1, g2):
        d = symbolic_pair(g1, g2, g1 + g2 + 1)
        for i in range(g1):
            s = solve_section(d, i)
            assert (s.omega1, s.omega2) == closed_Phi1(d, i)

    def test_genus_one_instance(self):
        d = symbolic_pair(1, 1, 3)
        w1, w2 = closed_Phi1(d, 0)
        want1 = DiffCombo(3, {alpha(0): 1, omega(3): QTrunc.q(3, 3, d.side2.omega_coeff(0, 2))})
        assert w1 == want1
        # alpha_m[0] = 0 in genus one, so only -q omega'[-2] survives
        assert w2 == DiffCombo(3, {omega(2): -QTrunc.q(3)})

    def test_elliptic_substitution_kills_correction(self):
        d = symbolic_pair(1, 1, 3)
        w1, _ = closed_Phi1(d, 0)
        assert w1.subs(elliptic_substitution_pair(d, 4)) == DiffCombo.single(alpha(0), 3)

    def test_top_index_last_term(self):
        g1, g2 = 3, 2
        d = symbolic_pair(g1, g2, g1 + g2 + 1)
        i = g1 - 1
        w1, _ = closed_Phi1(d, i)
        lab = omega(g1 + g2 + 1 - i)
        assert w1.coeff(lab) == QTrunc.q(d.N, g1 + g2 + 1, d.side2.omega_coeff(g1 - i - 1, i + 2))

    def test_index_range(self):
        with pytest.raises(SeriesError):
            closed_Phi1(symbolic_pair(2, 1, 4), 2)


class TestPeriodMatrix:
    @pytest.mark.parametrize("g1,g2", PAIRS)
    def test_grade_zero_is_standard_embedding(self, g1, g2):
        P = pi_graded(symbolic_pair(g1, g2, 2))
        grade0 = P.grade(0)
        want = {((s, lab), (s, lab)): CoeffPoly.const(1) for s, lab in P.cols}
        assert grade0 == want  # a left inverse is the projection to alpha rows

    @pytest.mark.parametrize("g1,g2", [(2, 2), (3, 2), (3, 3)])
    def test_small_order_pieces(self, g1, g2):
        P = pi_graded(symbolic_pair(g1, g2, min(g1, g2)))
        for j in range(1, min(g1, g2) + 1):
            for i in range(g1):
                got = P.column_grade((1, alpha(i)), j)
                if i == j - 1:
                    want2 = CohomClass(g2, 0, {omega(j + 1): -1})
                else:
                    want2 = CohomClass(g2, 0)
                assert got == (CohomClass(g1, 0), want2)

    def test_first_order_rank_one(self):
        P = pi_graded(symbolic_pair(3, 2, 1))
        g1 = P.grade(1)
        assert set(g1) == {((2, omega(2)), (1, alpha(0))), ((1, omega(2)), (2, alpha(0)))}

    @pytest.mark.parametrize("g1,g2", PAIRS)
    def test_closed_pieces_two_routes(self, g1, g2):
        P = pi_graded(symbolic_pair(g1, g2, g1 + g2 + 1))
        for j in range(1, g1 + g2 + 2):
            for i in range(g1):
                assert P.column_grade((1, alpha(i)), j) == pi_j_closed(g1, g2, j, i)

    def test_closed_piece_examples(self):
        assert pi_j_closed(2, 3, 2, 1) == (CohomClass(2, 0), CohomClass(3, 0, {omega(3): -1}))
        assert pi_j_closed(2, 3, 2, 0) == (CohomClass(2, 0), CohomClass(3, 0))
        with pytest.raises(SeriesError):
            pi_j_closed(1, 1, 4, 0)
        with pytest.raises(SeriesError):
            pi_j_closed(1, 1, 1, 1)

    def test_elliptic_specialization(self):
        d = symbolic_pair(1, 1, 4)
        P = pi_graded(d)
        sub = elliptic_substitution_pair(d, 8)
        g1, g2 = genus1_pi(4)
        ell = (EllipticData(WpContext("t1")), EllipticData(WpContext("t2")))
        for j in range(5):
            got = tuple(x.subs(sub) for x in P.column_grade((1, alpha(0)), j))
            assert got == (grade_of(g1, j), grade_of(g2, j))
            if 1 <= j <= 3:
                assert pi_j_closed(1, 1, j, 0, *ell) == got

    def test_json_and_latex_are_stable(self):
        P = pi_graded(symbolic_pair(1, 1, 3))
        doc = json.dumps(P.to_json(), sort_keys=True)
        assert doc == json.dumps(pi_graded(symbolic_pair(1, 1, 3)).to_json(), sort_keys=True)
        assert P.to_json()[1]["rows"] == ["alpha[0]", "omega[-2]", "alpha[0]'", "omega[-2]'"]
        assert r"\Pi(\alpha[0])" in P.to_latex()


class TestGenusOne:
    def test_initial_condition_and_divisibility(self):
        ab = genus1_ab(12)
        assert not ab.a[2]
        for key, v in ab.a.items():
            assert v.valuation() is None or v.valuation() >= key
        for key, v in ab.b.items():
            assert v.valuation() is None or v.valuation() >= key - 2 + 4

    def test_displayed_low_terms(self):
        ab = genus1_ab(11)
        a4 = QTrunc.q(11, 4, c(2, "t2")) + QTrunc.q(11, 10, mono(c(4, "t1"), c(2, "t2"), c(4, "t2")) * 4)
        assert ab.a[4] == a4
        b6 = QTrunc.q(11, 8, mono(c(6, "t1"), c(2, "t2")) * 5)
        assert ab.b[6].with_order(9) == b6.with_order(9)

    def test_a10_is_forced(self):
        # c8 of the second curve enters a10 through the positive part of f[-2]
        ab = genus1_ab(11)
        assert ab.a[10] == QTrunc.q(11, 10, c(8, "t2"))
        s = solve_section(elliptic_pair(11), 0)
        assert s.omega1.coeff(omega(10)) == ab.a[10]

    def test_displayed_period_terms_present(self):
        first, second = genus1_pi(10)
        x = first.coeff(alpha(0))
        c1 = lambda k: c(k, "t1")  # noqa: E731
        c2 = lambda k: c(k, "t2")  # noqa: E731
        assert x.c[0] == 1
        assert x.c[4] == mono(c1(2), c2(2)) * Fraction(-1, 3)
        assert x.c[6] == mono(c1(4), c2(4)) * Fraction(-1, 5)
        assert x.c[8] == mono(c1(6), c2(6)) * Fraction(-1, 7)
        extra = mono(c1(8), c2(8)) * Fraction(-1, 9)
        assert x.c[10] - extra == mono(c1(2), c1(4), c2(2), c2(4)) * Fraction(-4, 3)
        y = second.coeff(alpha(0))
        assert y.c[7] == mono(c1(4), c2(2), c2(2)) * Fraction(2, 3)
        assert y.c[9] == mono(c1(6), c2(2), c2(4)) * 2
        assert second.coeff(omega(2)) == -QTrunc.q(10)

    def test_leading_order(self):
        first, second = genus1_pi(1)
        assert first == CohomClass(1, 1, {alpha(0): 1})
        assert second == CohomClass(1, 1, {omega(2): -QTrunc.q(1)})

    def test_swap(self):
        first, second = genus1_pi(8)
        s1, s2 = genus1_pi_swapped(8)
        assert s2 == swap_tags(first) and s1 == swap_tags(second)
        d = elliptic_pair(8)
        P = pi_graded(d)
        c1, c2 = P.columns[(2, alpha(0))]
        assert (c1, c2) == (s1, s2)

    def test_solver_route_full_matrix(self):
        N = 8
        P = pi_graded(elliptic_pair(N))
        assert P.columns[(1, alpha(0))] == genus1_pi(N)

    def test_swap_tags_involution(self):
        _, second = genus1_pi(8)
        assert swap_tags(swap_tags(second)) == second
        assert swap_tags(second) != second
