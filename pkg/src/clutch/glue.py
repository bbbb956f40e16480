"""Automorphisms of the node algebra of the form ``x1 -> x1*u``, ``x2 -> x2/u``.

Every unit ``u`` of the node algebra gives one such automorphism, so the group
is modelled directly on units.  Composition, inversion, the swap involution,
the induced substitutions on the two punctured disks, the triangular
factorization and the Lie bracket (via dual numbers) all live here.
"""
from __future__ import annotations

from .node import (NodeContext, NodeDiff, NodeElement, OmegaElt, d_node,
                   diff_from_pair, iota, log_derivative)
from .series import (NILPOTENT, CoeffPoly, Laurent, Mismatch, NonUnit,
                     QTrunc, SeriesError, Sym)


class GlueAut:
    __slots__ = ("u", "ctx", "_u_inv")

    def __init__(self, u: NodeElement):
        if not u.is_unit():
            raise NonUnit("gluing automorphisms need a unit")
        self.u = u
        self.ctx = u.ctx
        self._u_inv = None

    @classmethod
    def identity(cls, ctx: NodeContext) -> "GlueAut":
        return cls(NodeElement.const(ctx, 1))

    @classmethod
    def scalar(cls, ctx: NodeContext, lam) -> "GlueAut":
        return cls(NodeElement.const(ctx, lam))

    def images(self) -> tuple[NodeElement, NodeElement]:
        return (NodeElement.x1(self.ctx) * self.u,
                NodeElement.x2(self.ctx) * self.u_inverse())

    def u_inverse(self) -> NodeElement:
        if self._u_inv is None:
            self._u_inv = self.u.inverse()
        return self._u_inv

    def __call__(self, h: NodeElement) -> NodeElement:
        return apply(self, h)

    def __eq__(self, other):
        return isinstance(other, GlueAut) and self.u == other.u

    def __hash__(self):
        return hash(self.u)

    def __str__(self):
        return f"GlueAut(u = {self.u})"

    __repr__ = __str__

    def to_json(self) -> dict:
        return {"u": self.u.to_json()}

    @classmethod
    def from_json(cls, data: dict, kinds=None) -> "GlueAut":
        return cls(NodeElement.from_json(data["u"], kinds))


def _check(a: GlueAut, b: GlueAut):
    if a.ctx != b.ctx:
        raise Mismatch(f"context mismatch: {a.ctx} vs {b.ctx}")


def apply(alpha: GlueAut, h: NodeElement) -> NodeElement:
    """Ring automorphism: substitute ``x1 -> x1 u`` and ``x2 -> x2 u^-1`` in h."""
    if h.ctx != alpha.ctx:
        raise Mismatch("context mismatch")
    ctx = alpha.ctx
    result = NodeElement.const(ctx, h.c0)
    for side, coeff in ((1, h.a), (2, h.b)):
        items = [(i, coeff(i)) for i in range(1, ctx.K + 1) if coeff(i)]
        if not items:
            continue
        # only build the image that is needed (the x2 image costs an inversion)
        X = NodeElement.x1(ctx) * alpha.u if side == 1 else NodeElement.x2(ctx) * alpha.u_inverse()
        power = NodeElement.const(ctx, 1)
        for i in range(1, items[-1][0] + 1):
            power = power * X
            c = coeff(i)
            if c:
                result = result + power * c
    return result


def compose(alpha: GlueAut, beta: GlueAut) -> GlueAut:
    """``alpha o beta``: first beta's substitution, then alpha's."""
    _check(alpha, beta)
    return GlueAut(alpha.u * apply(alpha, beta.u))


def _linear_inverse(lead: QTrunc, h: NodeElement) -> NodeElement:
    """Invert the weight-preserving part of an automorphism with constant unit ``lead``."""
    ctx = h.ctx
    inv = lead.inverse()
    a = []
    b = []
    pw_inv, pw = inv, lead
    for i in range(1, ctx.K + 1):
        a.append(h.a(i) * pw_inv)
        b.append(h.b(i) * pw)
        pw_inv, pw = pw_inv * inv, pw * lead
    return NodeElement(ctx, h.c0, a, b)


def inverse(alpha: GlueAut) -> GlueAut:
    """Solve ``u * alpha(v) = 1`` for v by successive correction.

    The correction step inverts the current approximate inverse on the
    residual, which doubles the number of correct weight levels each round.
    """
    ctx = alpha.ctx
    target = alpha.u.inverse()
    lead = alpha.u.c0
    v = _linear_inverse(lead, target)
    approx = None
    for _ in range(4 * (ctx.K + ctx.N) + 8):
        resid = target - apply(alpha, v)
        if not resid:
            return GlueAut(v)
        if approx is None:
            step = _linear_inverse(lead, resid)
        else:
            step = apply(approx, resid)
        v = v + step
        approx = GlueAut(v)
    raise SeriesError("inverse did not converge")  # pragma: no cover


def kappa(alpha: GlueAut) -> GlueAut:
    """Conjugation by the swap ``x1 <-> x2``."""
    return GlueAut(alpha.u.swap().inverse())


# -- boundary actions ----------------------------------------------------

class BoundaryAut:
    """Substitutions ``x1 -> first(x1)`` and ``x2 -> second(x2)`` on the two disks."""

    __slots__ = ("first", "second")

    def __init__(self, first: Laurent, second: Laurent):
        self.first = first
        self.second = second

    def then(self, other: "BoundaryAut") -> "BoundaryAut":
        """The action of ``self o other`` (apply other's substitution first)."""
        return BoundaryAut(other.first.compose(self.first), other.second.compose(self.second))

    def act(self, pair: tuple[Laurent, Laurent]) -> tuple[Laurent, Laurent]:
        return pair[0].compose(self.first), pair[1].compose(self.second)

    def __eq__(self, other):
        return isinstance(other, BoundaryAut) and (
            self.first.equal_on_window(other.first) and self.second.equal_on_window(other.second))

    def __str__(self):
        return f"({self.first}, {self.second})"

    __repr__ = __str__


def boundary_actions(alpha: GlueAut) -> BoundaryAut:
    X1, X2 = alpha.images()
    return BoundaryAut(iota(X1)[0], iota(X2)[1])


# -- triangular factorization -------------------------------------------

def _split(h: NodeElement):
    ctx = h.ctx
    K = ctx.K
    x1_part = NodeElement(ctx, None, [h.a(i) for i in range(1, K + 1)])
    x2_part = NodeElement(ctx, None, (), [h.b(j) for j in range(1, K + 1)])
    return x1_part, h.c0, x2_part


def decompose(alpha: GlueAut) -> tuple[GlueAut, QTrunc, GlueAut]:
    """Factor alpha as ``g1 o scalar(lam) o g2`` with g1 in x1 alone, g2 in x2 alone.

    Starting from ``lam = c0(u)``, each round computes the residual
    ``g1^-1 o alpha o g2^-1 o lam^-1`` with unit ``1 + a`` and splits ``a`` into
    its x1-tail, constant and x2-tail; these update the three factors.  The
    residual is quadratic in the previous one, so it vanishes after finitely
    many rounds in the truncated ring.
    """
    ctx = alpha.ctx
    one = NodeElement.const(ctx, 1)
    g1 = GlueAut.identity(ctx)
    g2 = GlueAut.identity(ctx)
    lam = alpha.u.c0
    for _ in range(4 * (ctx.K + ctx.N) + 8):
        lam_aut = GlueAut.scalar(ctx, lam)
        right = compose(lam_aut, g2)
        resid = compose(compose(inverse(g1), alpha), inverse(right))
        a = resid.u - one
        if not a:
            return g1, lam, g2
        a1, mu, a2 = _split(a)
        g1 = compose(g1, GlueAut(one + a1))
        lam = lam * (mu + 1)
        h2 = GlueAut(one + a2)
        g2 = compose(compose(GlueAut.scalar(ctx, lam.inverse()), compose(h2, GlueAut.scalar(ctx, lam))), g2)
    raise SeriesError("decomposition did not converge")  # pragma: no cover


# -- Lie algebra ------------------------------------------------------------

class WittElt:
    """Finite combination ``sum c_n M_n`` with QTrunc coefficients."""

    __slots__ = ("coeffs", "N")

    def __init__(self, N: int, coeffs=None):
        self.N = N
        clean = {}
        for n, c in (coeffs or {}).items():
            c = c if isinstance(c, QTrunc) else QTrunc.const(N, c)
            if c:
                clean[int(n)] = c
        self.coeffs = clean

    @classmethod
    def basis(cls, N: int, n: int, coeff=1) -> "WittElt":
        return cls(N, {n: coeff})

    def __add__(self, other):
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, QTrunc.zero(self.N)) + c
        return WittElt(self.N, out)

    def __neg__(self):
        return WittElt(self.N, {n: -c for n, c in self.coeffs.items()})

    def __mul__(self, scalar):
        return WittElt(self.N, {n: c * scalar for n, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, WittElt) and self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, tuple(sorted(self.coeffs.items()))))

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for n in sorted(self.coeffs, reverse=True):
            parts.append(_format_term(self.coeffs[n], f"M_{n}"))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    __repr__ = __str__

    def to_json(self) -> dict:
        return {str(n): c.to_json() for n, c in sorted(self.coeffs.items())}


def _format_term(c: QTrunc, basis: str) -> str:
    """``2·q·M_0`` style when the coefficient is a single rational monomial."""
    nz = [(k, x) for k, x in enumerate(c.c) if x]
    if len(nz) == 1 and nz[0][1].is_const():
        k, x = nz[0]
        r = x.const_part()
        factors = []
        sign = "-" if r < 0 else ""
        if abs(r) != 1:
            factors.append(str(abs(r)))
        if k:
            factors.append("q" if k == 1 else f"q^{k}")
        factors.append(basis)
        return sign + "·".join(factors)
    return f"({c})·{basis}"


# the group commutator alpha beta alpha^-1 beta^-1 of exp(e1 X), exp(e2 Y) is
# 1 + e1 e2 [X, Y]_group; the Witt normalization is its negative
_BRACKET_SIGN = -1


def basis_unit(ctx: NodeContext, n: int, eps: CoeffPoly) -> NodeElement:
    """``1 + eps * x1**n`` (n >= 0) or ``1 + eps * x2**-n`` (n < 0)."""
    return NodeElement.const(ctx, 1) + NodeElement.mono(ctx, n, eps)


def witt_bracket(i: int, j: int, ctx: NodeContext | None = None, N: int | None = None) -> WittElt:
    """``[M_i, M_j]`` from the commutator of two dual-number automorphisms."""
    K = max(1, abs(i) + abs(j))
    if ctx is None:
        ctx = NodeContext(N if N is not None else max(abs(i), abs(j)), K)
    if abs(i) > ctx.K or abs(j) > ctx.K:
        raise SeriesError(f"x-window K={ctx.K} too small for M_{i}, M_{j}")
    e1 = CoeffPoly.sym(Sym("eps1", NILPOTENT))
    e2 = CoeffPoly.sym(Sym("eps2", NILPOTENT))
    a = GlueAut(basis_unit(ctx, i, e1))
    b = GlueAut(basis_unit(ctx, j, e2))
    # a b a^-1 b^-1 = (a b) (b a)^-1, which needs a single inversion
    comm = compose(compose(a, b), inverse(compose(b, a)))
    x = (comm.u - 1).map_coeffs(lambda c: c.map(lambda p: p.coeff_of(Sym("eps1", NILPOTENT)).coeff_of(Sym("eps2", NILPOTENT))))
    return WittElt(ctx.N, {idx: c * _BRACKET_SIGN for idx, c in x.items()})


def witt_expected(i: int, j: int, N: int) -> WittElt:
    """Closed-form structure constants in the M basis."""
    if i >= 0 and j >= 0:
        return WittElt(N, {i + j: i - j})
    if i < 0 and j < 0:
        return WittElt(N, {i + j: i - j})
    if i >= 0:
        m, n = i, -j
        return WittElt(N, {m - n: QTrunc.q(N, min(m, n), m + n)})
    return -witt_expected(j, i, N)


# -- rescaling -------------------------------------------------------------

def rescale_element(h: NodeElement, lam) -> NodeElement:
    """Ring map ``x1 -> lam x1`` with ``q -> lam q`` (so ``x2`` is fixed)."""
    ctx = h.ctx
    lam = CoeffPoly.coerce(lam)

    def scale_q(c: QTrunc) -> QTrunc:
        return QTrunc._raw(c.N, tuple(x * lam ** k for k, x in enumerate(c.c)))

    lp = CoeffPoly.const(1)
    a = []
    for i in range(1, ctx.K + 1):
        lp = lp * lam
        a.append(scale_q(h.a(i)) * lp)
    return NodeElement(ctx, scale_q(h.c0), a, [scale_q(h.b(j)) for j in range(1, ctx.K + 1)])


def rescale(alpha: GlueAut, lam) -> GlueAut:
    return GlueAut(rescale_element(alpha.u, lam))


# -- action on differentials -----------------------------------------------

def act_on_diff(alpha: GlueAut, w: NodeDiff) -> NodeDiff:
    """Pull back ``P dx1 + Q dx2`` along the substitution and renormalize."""
    if w.ctx != alpha.ctx:
        raise Mismatch("context mismatch")
    X1, X2 = alpha.images()
    P, Q = w.as_pair()
    dX1, dX2 = d_node(X1), d_node(X2)
    P1, Q1 = dX1.as_pair()
    P2, Q2 = dX2.as_pair()
    aP, aQ = apply(alpha, P), apply(alpha, Q)
    return diff_from_pair(aP * P1 + aQ * P2, aP * Q1 + aQ * Q2)


def e_factor(alpha: GlueAut) -> NodeElement:
    """U with ``alpha(e) = U e``: one plus the log-derivative of ``v = u^-1``."""
    return NodeElement.const(alpha.ctx, 1) + log_derivative(alpha.u.inverse())


def act_on_omega(alpha: GlueAut, w: OmegaElt) -> OmegaElt:
    return OmegaElt(apply(alpha, w.coeff) * e_factor(alpha))


def subcomplex_determinant(alpha: GlueAut) -> QTrunc:
    """Induced scaling on ``e (x) (x1 dx2)^-1``: e-factor over the x1dx2-factor."""
    ctx = alpha.ctx
    if ctx.K < 2:
        raise SeriesError("x1 dx2 has weight 2; the determinant needs K >= 2")
    U0 = e_factor(alpha).c0
    s = act_on_diff(alpha, NodeDiff.x1dx2(ctx)).s
    cap = ctx.qcap(2)
    return QTrunc(ctx.N, [x if k <= cap else 0 for k, x in enumerate((U0 * s.inverse()).c)])

