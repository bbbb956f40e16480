import random
from fractions import Fraction

import pytest

from clutch.node import (NodeContext, NodeDiff, NodeElement, NotInImage,
                         OmegaElt, d_node, diff_from_pair, iota, iota_preimage,
                         normalize_diff, theta_det, theta_scaling, to_omega)
from clutch.series import UNIT, CoeffPoly, Laurent, Mismatch, QTrunc, Sym


def rand_q(rng, N):
    return QTrunc(N, [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(N + 1)])


def rand_elt(rng, ctx, density=0.6):
    pick = lambda: rand_q(rng, ctx.N) if rng.random() < density else 0  # noqa: E731
    return NodeElement(ctx, pick(), [pick() for _ in range(ctx.K)], [pick() for _ in range(ctx.K)])


def dense_product(a: NodeElement, b: NodeElement) -> NodeElement:
    """Multiply as polynomials in x1, x2, q with no reduction, then reduce each monomial."""
    ctx = a.ctx
    out = NodeElement(ctx)
    for i1, c1 in a.items():
        for i2, c2 in b.items():
            p1 = (max(i1, 0), max(-i1, 0))
            p2 = (max(i2, 0), max(-i2, 0))
            e1, e2 = p1[0] + p2[0], p1[1] + p2[1]
            m = min(e1, e2)
            mono = NodeElement.mono(ctx, e1 - e2, (c1 * c2).shift(m))
            out = out + mono
    return out


CTX = NodeContext(3, 6)
X1 = NodeElement.x1(CTX)
X2 = NodeElement.x2(CTX)
ONE = NodeElement.const(CTX, 1)


class TestMultiplication:
    def test_relation(self):
        assert X1 * X2 == NodeElement.q(CTX)

    def test_small_product(self):
        assert (ONE + X1) * (ONE + X2) == ONE + NodeElement.q(CTX) + X1 + X2

    def test_matches_unreduced_product(self):
        rng = random.Random(3)
        for _ in range(20):
            a, b = rand_elt(rng, CTX), rand_elt(rng, CTX)
            assert a * b == dense_product(a, b)

    def test_associative_and_commutative(self):
        rng = random.Random(4)
        for _ in range(20):
            a, b, c = (rand_elt(rng, CTX) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a

    def test_weight_truncation(self):
        # x1^4 * x1^3 has weight 7 > K
        assert not X1 ** 4 * X1 ** 3
        # q^3 has weight 6 = K and survives, q^3 x1 does not
        assert NodeElement.q(CTX, 3) == X1 ** 3 * X2 ** 3
        assert not NodeElement.q(CTX, 3) * X1

    def test_inverse(self):
        rng = random.Random(5)
        for _ in range(10):
            u = rand_elt(rng, CTX) + 7
            assert u * u.inverse() == ONE

    def test_context_mismatch(self):
        with pytest.raises(Mismatch):
            X1 * NodeElement.x1(NodeContext(2, 6))


class TestIota:
    def test_generators(self):
        l1, l2 = iota(X1)
        assert l1.equal_on_window(Laurent.mono("x1", 3, 1))
        assert l2.equal_on_window(Laurent.mono("x2", 3, -1, QTrunc.q(3)))
        q = NodeElement.q(CTX)
        assert [c.terms for c in iota(q)] == [{0: QTrunc.q(3)}, {0: QTrunc.q(3)}]

    def test_high_powers_vanish_on_other_side(self):
        ctx = NodeContext(2, 5)
        l1, l2 = iota(NodeElement.x1(ctx, 3))
        assert l1.terms == {3: QTrunc.const(2, 1)}
        assert not l2.terms

    def test_homomorphism(self):
        rng = random.Random(6)
        for _ in range(15):
            a, b = rand_elt(rng, CTX), rand_elt(rng, CTX)
            ia, ib, iab = iota(a), iota(b), iota(a * b)
            for k in range(2):
                assert (ia[k] * ib[k]).equal_on_window(iab[k])

    def test_preimage_roundtrip(self):
        rng = random.Random(7)
        for _ in range(15):
            a = rand_elt(rng, CTX)
            assert iota_preimage(iota(a), CTX) == a

    def test_preimage_examples(self):
        ctx = NodeContext(2, 5)
        N = ctx.N
        q = QTrunc.q(N)
        assert iota_preimage((Laurent("x1", N, {0: q}), Laurent("x2", N, {0: q})), ctx) == NodeElement.q(ctx)
        high = (Laurent.mono("x1", N, 3), Laurent.zero("x2", N))
        assert iota_preimage(high, ctx) == NodeElement.x1(ctx, 3)

    def test_not_in_image(self):
        with pytest.raises(NotInImage):
            iota_preimage((Laurent.one("x1", 3), Laurent.zero("x2", 3)), CTX)
        # a polar term without the matching q-power
        with pytest.raises(NotInImage):
            iota_preimage((Laurent.mono("x1", 3, -1), Laurent.zero("x2", 3)), CTX)


class TestDifferentials:
    def test_d_of_generators(self):
        assert d_node(X1) == NodeDiff.dx1(CTX)
        assert not d_node(NodeElement.q(CTX))

    def test_relation(self):
        assert normalize_diff(X2, NodeDiff.dx1(CTX)) == NodeDiff(CTX, s=-1)
        assert normalize_diff(X1, NodeDiff.dx2(CTX)) == NodeDiff(CTX, s=1)

    def test_leibniz(self):
        rng = random.Random(8)
        for _ in range(10):
            a, b = rand_elt(rng, CTX), rand_elt(rng, CTX)
            lhs = d_node(a * b)
            rhs = normalize_diff(a, d_node(b)) + normalize_diff(b, d_node(a))
            assert lhs == rhs

    def test_to_omega_generators(self):
        assert to_omega(NodeDiff.x1dx2(CTX)) == OmegaElt(NodeElement.q(CTX))
        assert to_omega(NodeDiff.dx2(CTX)) == OmegaElt(X2)
        assert to_omega(NodeDiff.dx1(CTX)) == OmegaElt(-X1)

    def test_to_omega_is_module_map(self):
        rng = random.Random(9)
        for _ in range(10):
            m = rand_elt(rng, CTX)
            w = diff_from_pair(rand_elt(rng, CTX), rand_elt(rng, CTX))
            assert to_omega(normalize_diff(m, w)).coeff == m * to_omega(w).coeff

    def test_d_then_omega_kills_only_scalars(self):
        assert not to_omega(d_node(NodeElement.const(CTX, QTrunc(3, [1, 2, 3, 4]))))
        for i in range(1, CTX.K + 1):
            assert to_omega(d_node(NodeElement.x1(CTX, i)))
            assert to_omega(d_node(NodeElement.x2(CTX, i)))

    def test_degree_shift(self):
        for i in range(CTX.K - 1):
            w = NodeDiff(CTX, f=[0] * i + [1])
            assert to_omega(w).coeff == -NodeElement.x1(CTX, i + 1)
            w = NodeDiff(CTX, g=[0] * i + [1])
            assert to_omega(w).coeff == NodeElement.x2(CTX, i + 1)


class TestDeterminant:
    def test_theta(self):
        assert theta_det(CTX) == QTrunc.q(3)
        assert not theta_det(NodeContext(0, 4))

    def test_scaling(self):
        lam = CoeffPoly.sym(Sym("lam", UNIT))
        assert theta_scaling(lam) == lam.inverse()
        assert theta_scaling(lam, side=2) == lam.inverse()
