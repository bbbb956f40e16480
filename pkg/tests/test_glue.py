import random
from fractions import Fraction

import pytest

from clutch.glue import (GlueAut, WittElt, act_on_diff, act_on_omega, apply,
                         boundary_actions, compose, decompose, e_factor,
                         inverse, kappa, rescale, subcomplex_determinant,
                         witt_bracket, witt_expected)
from clutch.node import (NodeContext, NodeDiff, NodeElement, diff_from_pair,
                         iota, to_omega)
from clutch.series import (NILPOTENT, UNIT, CoeffPoly, Laurent, QTrunc,
                           SeriesError, Sym)

R = CoeffPoly.sym(Sym("r"))


def rand_q(rng, N):
    return QTrunc(N, [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(N + 1)])


def rand_unit(rng, ctx):
    pick = lambda: rand_q(rng, ctx.N) if rng.random() < 0.5 else 0  # noqa: E731
    c0 = rand_q(rng, ctx.N)
    if not c0.is_unit():
        c0 = c0 + 1
    return NodeElement(ctx, c0, [pick() for _ in range(ctx.K)], [pick() for _ in range(ctx.K)])


def rand_aut(rng, ctx):
    return GlueAut(rand_unit(rng, ctx))


def one_plus(ctx, idx, coeff):
    return GlueAut(NodeElement.const(ctx, 1) + NodeElement.mono(ctx, idx, coeff))


class TestGroupLaw:
    def test_identity(self):
        ctx = NodeContext(2, 5)
        a = rand_aut(random.Random(1), ctx)
        e = GlueAut.identity(ctx)
        assert compose(e, a) == a == compose(a, e)

    def test_self_composition(self):
        ctx = NodeContext(1, 4)
        a = one_plus(ctx, 1, R)
        x1 = lambda i, c: NodeElement.x1(ctx, i, c)  # noqa: E731
        want = NodeElement.const(ctx, 1) + x1(1, 2 * R) + x1(2, 2 * R ** 2) + x1(3, R ** 3)
        assert compose(a, a).u == want

    def test_composition_is_substitution(self):
        rng = random.Random(2)
        ctx = NodeContext(2, 5)
        a, b = rand_aut(rng, ctx), rand_aut(rng, ctx)
        h = rand_unit(rng, ctx)
        assert apply(compose(a, b), h) == apply(a, apply(b, h))

    def test_inverse_examples(self):
        ctx = NodeContext(2, 4)
        assert inverse(GlueAut.identity(ctx)) == GlueAut.identity(ctx)
        lam = QTrunc(2, [3, 1, 0])
        assert inverse(GlueAut.scalar(ctx, lam)).u == NodeElement.const(ctx, lam.inverse())

    def test_random_axioms(self):
        rng = random.Random(3)
        for _ in range(25):
            ctx = NodeContext(rng.randint(0, 3), rng.randint(1, 6))
            a, b, c = (rand_aut(rng, ctx) for _ in range(3))
            assert compose(compose(a, b), c) == compose(a, compose(b, c))
            inv = inverse(a)
            assert compose(a, inv) == GlueAut.identity(ctx)
            assert compose(inv, a) == GlueAut.identity(ctx)


class TestKappa:
    def test_example(self):
        ctx = NodeContext(1, 4)
        got = kappa(one_plus(ctx, 1, R))
        assert got.u == (NodeElement.const(ctx, 1) + NodeElement.x2(ctx, 1, R)).inverse()

    def test_involution_and_products(self):
        rng = random.Random(4)
        ctx = NodeContext(2, 5)
        for _ in range(8):
            a, b = rand_aut(rng, ctx), rand_aut(rng, ctx)
            assert kappa(kappa(a)) == a
            assert kappa(compose(a, b)) == compose(kappa(a), kappa(b))

    def test_on_lie_elements(self):
        ctx = NodeContext(3, 4)
        eps = CoeffPoly.sym(Sym("eps", NILPOTENT))
        for n in range(0, 4):
            got = kappa(one_plus(ctx, n, eps)).u
            assert got == NodeElement.const(ctx, 1) - NodeElement.mono(ctx, -n, eps)


class TestBoundary:
    def test_example(self):
        ctx = NodeContext(1, 4)
        b = boundary_actions(one_plus(ctx, 1, R))
        assert b.first.equal_on_window(Laurent("x1", 1, {1: 1, 2: R}))
        assert b.second.equal_on_window(Laurent("x2", 1, {1: 1, 0: QTrunc(1, [0, -R])}))

    def test_scalar(self):
        ctx = NodeContext(1, 3)
        lam = CoeffPoly.sym(Sym("lam", UNIT))
        b = boundary_actions(GlueAut.scalar(ctx, lam))
        assert b.first.terms == {1: QTrunc.const(1, lam)}
        assert b.second.terms == {1: QTrunc.const(1, lam.inverse())}

    def test_functorial(self):
        rng = random.Random(5)
        ctx = NodeContext(2, 5)
        for _ in range(5):
            a, b = rand_aut(rng, ctx), rand_aut(rng, ctx)
            ba, bb = boundary_actions(a), boundary_actions(b)
            got = boundary_actions(compose(a, b))
            want = ba.then(bb)
            assert got.first.equal_on_window(want.first)
            assert got.second.equal_on_window(want.second)

    def test_equivariant(self):
        rng = random.Random(6)
        ctx = NodeContext(2, 5)
        for _ in range(5):
            a = rand_aut(rng, ctx)
            h = rand_unit(rng, ctx)
            lhs = iota(apply(a, h))
            rhs = boundary_actions(a).act(iota(h))
            assert lhs[0].equal_on_window(rhs[0])
            assert lhs[1].equal_on_window(rhs[1])


class TestDecompose:
    def test_trivial_cases(self):
        ctx = NodeContext(2, 4)
        a = GlueAut(NodeElement(ctx, 1, [R, 3]))
        g1, lam, g2 = decompose(a)
        assert g1 == a and lam == QTrunc.const(2, 1) and g2 == GlueAut.identity(ctx)
        s = GlueAut.scalar(ctx, QTrunc(2, [2, 1, 0]))
        g1, lam, g2 = decompose(s)
        assert g1 == g2 == GlueAut.identity(ctx) and lam == QTrunc(2, [2, 1, 0])

    def test_recomposes(self):
        ctx = NodeContext(1, 5)
        a = GlueAut(NodeElement(ctx, 1, [1], [1]))
        g1, lam, g2 = decompose(a)
        assert compose(g1, compose(GlueAut.scalar(ctx, lam), g2)) == a

    def test_uniqueness(self):
        rng = random.Random(7)
        for _ in range(6):
            ctx = NodeContext(rng.randint(0, 2), rng.randint(2, 5))
            g1 = GlueAut(NodeElement(ctx, 1, [rand_q(rng, ctx.N) for _ in range(ctx.K)]))
            g2 = GlueAut(NodeElement(ctx, 1, (), [rand_q(rng, ctx.N) for _ in range(ctx.K)]))
            # scalars are only kept up to the weight window
            lam = NodeElement.const(ctx, rand_q(rng, ctx.N) + 5).c0
            a = compose(g1, compose(GlueAut.scalar(ctx, lam), g2))
            assert decompose(a) == (g1, lam, g2)


class TestWitt:
    def test_examples(self):
        assert witt_bracket(1, -1) == WittElt.basis(1, 0, QTrunc.q(1, 1, 2))
        assert str(witt_bracket(1, -1)) == "2·q·M_0"
        assert witt_bracket(2, 3) == WittElt.basis(3, 5, -1)
        assert not witt_bracket(0, 0)

    def test_relation_grid(self):
        for N in (0, 2, 5):
            for i in range(0, 5):
                for j in range(0, 5):
                    ctx = NodeContext(N, max(1, i + j))
                    assert witt_bracket(i, -j, ctx) == witt_expected(i, -j, N), (i, j, N)

    def test_window_too_small(self):
        with pytest.raises(SeriesError):
            witt_bracket(3, 1, NodeContext(1, 2))


class TestRescale:
    def test_examples(self):
        ctx = NodeContext(2, 4)
        lam = CoeffPoly.sym(Sym("lam", UNIT))
        a = GlueAut(NodeElement(ctx, 1, [1]))
        assert rescale(a, lam).u == NodeElement(ctx, 1, [lam])
        assert rescale(a, 1) == a

    def test_homomorphism(self):
        rng = random.Random(8)
        ctx = NodeContext(2, 4)
        lam = CoeffPoly.sym(Sym("lam", UNIT))
        for _ in range(4):
            a, b = rand_aut(rng, ctx), rand_aut(rng, ctx)
            assert rescale(compose(a, b), lam) == compose(rescale(a, lam), rescale(b, lam))


class TestDifferentialAction:
    def test_identity(self):
        ctx = NodeContext(2, 5)
        w = diff_from_pair(rand_unit(random.Random(9), ctx), NodeElement.x1(ctx, 2))
        assert act_on_diff(GlueAut.identity(ctx), w) == w

    def test_e_factor_example(self):
        # alpha(e) = e + d log(v) with v = (1 + r x1)^-1, i.e. U = 1 + r x1 / (1 + r x1)
        ctx = NodeContext(1, 4)
        a = one_plus(ctx, 1, R)
        want = NodeElement(ctx, 1, [R, -R ** 2, R ** 3, -R ** 4])
        assert e_factor(a) == want

    def test_is_action(self):
        rng = random.Random(10)
        ctx = NodeContext(2, 5)
        for _ in range(4):
            a, b = rand_aut(rng, ctx), rand_aut(rng, ctx)
            w = diff_from_pair(rand_unit(rng, ctx), rand_unit(rng, ctx))
            assert act_on_diff(compose(a, b), w) == act_on_diff(a, act_on_diff(b, w))

    def test_natural_with_omega(self):
        rng = random.Random(11)
        ctx = NodeContext(2, 5)
        for _ in range(4):
            a = rand_aut(rng, ctx)
            w = diff_from_pair(rand_unit(rng, ctx), rand_unit(rng, ctx))
            assert to_omega(act_on_diff(a, w)) == act_on_omega(a, to_omega(w))

    def test_determinant_is_one(self):
        rng = random.Random(12)
        for _ in range(10):
            ctx = NodeContext(rng.randint(0, 3), rng.randint(2, 6))
            det = subcomplex_determinant(rand_aut(rng, ctx))
            assert det == QTrunc.const(ctx.N, 1)
