"""The truncated node algebra ``A = R[[x1, x2]] / (x1*x2 - q)``.

Elements are kept in canonical form ``c0 + sum a_i x1**i + sum b_j x2**j``.
Truncation is by weight, with ``x1``, ``x2`` of weight 1 and ``q`` of weight
2: the relation is homogeneous, so dropping everything of weight ``> K`` is a
quotient by an ideal and all operations below are exact in that quotient.
A coefficient ``q**k * x1**i`` survives iff ``2k + i <= K`` (and ``k <= N``).
"""
from __future__ import annotations

from dataclasses import dataclass

from .series import (INF, ZERO, CoeffPoly, Laurent, Mismatch, NonUnit, QTrunc,
                     SeriesError)


class NotInImage(SeriesError):
    pass


@dataclass(frozen=True)
class NodeContext:
    N: int
    K: int

    def __post_init__(self):
        if self.N < 0 or self.K < 1:
            raise ValueError("need N >= 0 and K >= 1")

    def qcap(self, weight: int) -> int:
        """Highest q-order kept at the given x-weight (-1 when nothing is)."""
        return min(self.N, (self.K - weight) // 2) if weight <= self.K else -1


def _clip(ctx: NodeContext, c: QTrunc, weight: int) -> QTrunc:
    cap = ctx.qcap(weight)
    if cap >= ctx.N:
        return c
    return QTrunc._raw(ctx.N, tuple(a if k <= cap else ZERO for k, a in enumerate(c.c)))


def _qmul(a: QTrunc, b: QTrunc, shift: int, cap: int) -> list:
    """Coefficients of q**shift * a * b up to q-order cap (as a list)."""
    out = [ZERO] * (a.N + 1)
    for i, x in enumerate(a.c):
        if not x or i + shift > cap:
            continue
        for j in range(0, cap - i - shift + 1):
            y = b.c[j]
            if y:
                out[i + j + shift] = out[i + j + shift] + x * y
    return out


class NodeElement:
    """Canonical-form element; ``v[idx + K]`` holds the coefficient of
    ``x1**idx`` (idx > 0), ``x2**-idx`` (idx < 0) or the constant (idx 0)."""

    __slots__ = ("ctx", "v", "_items")

    def __init__(self, ctx: NodeContext, c0=None, a=(), b=()):
        K, N = ctx.K, ctx.N
        v = [QTrunc.zero(N)] * (2 * K + 1)

        def lift(x):
            return x if isinstance(x, QTrunc) else QTrunc.const(N, x)

        if c0 is not None:
            v[K] = _clip(ctx, lift(c0), 0)
        for i, x in enumerate(a, start=1):
            if i <= K:
                v[K + i] = _clip(ctx, lift(x), i)
        for j, x in enumerate(b, start=1):
            if j <= K:
                v[K - j] = _clip(ctx, lift(x), j)
        self.ctx = ctx
        self.v = tuple(v)
        self._items = None

    @classmethod
    def _raw(cls, ctx, v):
        e = cls.__new__(cls)
        e.ctx = ctx
        e.v = tuple(v)
        e._items = None
        return e

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, c0=c)

    @classmethod
    def x1(cls, ctx, power=1, coeff=1):
        return cls.mono(ctx, power, coeff)

    @classmethod
    def x2(cls, ctx, power=1, coeff=1):
        return cls.mono(ctx, -power, coeff)

    @classmethod
    def mono(cls, ctx, idx: int, coeff=1):
        """``coeff * x1**idx`` for idx >= 0, ``coeff * x2**-idx`` for idx < 0."""
        v = [QTrunc.zero(ctx.N)] * (2 * ctx.K + 1)
        if abs(idx) <= ctx.K:
            c = coeff if isinstance(coeff, QTrunc) else QTrunc.const(ctx.N, coeff)
            v[ctx.K + idx] = _clip(ctx, c, abs(idx))
        return cls._raw(ctx, v)

    @classmethod
    def q(cls, ctx, power=1):
        return cls(ctx, c0=QTrunc.q(ctx.N, power))

    # -- accessors ------------------------------------------------------
    @property
    def c0(self) -> QTrunc:
        return self.v[self.ctx.K]

    def a(self, i: int) -> QTrunc:
        return self.v[self.ctx.K + i]

    def b(self, j: int) -> QTrunc:
        return self.v[self.ctx.K - j]

    def at(self, idx: int) -> QTrunc:
        if abs(idx) > self.ctx.K:
            return QTrunc.zero(self.ctx.N)
        return self.v[self.ctx.K + idx]

    def items(self):
        """Nonzero (idx, coeff) pairs."""
        if self._items is None:
            K = self.ctx.K
            self._items = [(i - K, c) for i, c in enumerate(self.v) if any(a.terms for a in c.c)]
        return self._items

    def is_scalar(self) -> bool:
        return all(idx == 0 for idx, _ in self.items())

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "NodeElement"):
        if other.ctx != self.ctx:
            raise Mismatch(f"context mismatch: {self.ctx} vs {other.ctx}")

    def _lift(self, other):
        if isinstance(other, NodeElement):
            self._check(other)
            return other
        return NodeElement.const(self.ctx, other)

    def __add__(self, other):
        other = self._lift(other)
        return NodeElement._raw(self.ctx, [x + y for x, y in zip(self.v, other.v)])

    __radd__ = __add__

    def __neg__(self):
        return NodeElement._raw(self.ctx, [-x for x in self.v])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        ctx = self.ctx
        if not isinstance(other, NodeElement):
            if isinstance(other, QTrunc):
                K = ctx.K
                out = list(self.v)
                for idx, x in self.items():
                    out[idx + K] = _clip(ctx, x * other, abs(idx))
                return NodeElement._raw(ctx, out)
            if isinstance(other, (int, CoeffPoly)) or hasattr(other, "denominator"):
                return NodeElement._raw(ctx, [x * other for x in self.v])
            return NotImplemented
        self._check(other)
        K, N = ctx.K, ctx.N
        out = [[ZERO] * (N + 1) for _ in range(2 * K + 1)]
        mine, theirs = self.items(), other.items()
        for i1, c1 in mine:
            w1 = abs(i1)
            for i2, c2 in theirs:
                w = w1 + abs(i2)
                if w > K:
                    continue
                idx = i1 + i2
                shift = (w - abs(idx)) // 2
                cap = ctx.qcap(abs(idx))
                if shift > cap:
                    continue
                prod = _qmul(c1, c2, shift, cap)
                slot = out[idx + K]
                for k in range(shift, cap + 1):
                    if prod[k]:
                        slot[k] = slot[k] + prod[k]
        return NodeElement._raw(ctx, [QTrunc._raw(N, tuple(s)) for s in out])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = NodeElement.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_unit(self) -> bool:
        return self.c0.is_unit()

    def inverse(self) -> "NodeElement":
        if not self.is_unit():
            raise NonUnit("constant term is not a unit")
        inv0 = self.c0.inverse()
        r = self * inv0 - 1
        result = NodeElement.const(self.ctx, 1)
        power = result
        sign = 1
        while True:
            power = power * r
            if not power:
                break
            sign = -sign
            result = result + power if sign > 0 else result - power
        return result * inv0

    def swap(self) -> "NodeElement":
        """Exchange the roles of x1 and x2."""
        return NodeElement._raw(self.ctx, self.v[::-1])

    def map_coeffs(self, f) -> "NodeElement":
        ctx = self.ctx
        return NodeElement._raw(ctx, [_clip(ctx, f(c), abs(i - ctx.K)) for i, c in enumerate(self.v)])

    def subs(self, mapping) -> "NodeElement":
        return self.map_coeffs(lambda c: c.subs(mapping))

    def __bool__(self):
        return bool(self.items())

    def __eq__(self, other):
        if isinstance(other, NodeElement):
            return self.ctx == other.ctx and self.v == other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.v))

    def __str__(self):
        parts = []
        for idx, c in sorted(self.items(), key=lambda p: (abs(p[0]), -p[0])):
            var = "" if idx == 0 else (f"x1^{idx}" if idx > 0 else f"x2^{-idx}")
            var = var.replace("^1", "") if abs(idx) == 1 else var
            s = str(c)
            if not var:
                parts.append(s)
            elif s == "1":
                parts.append(var)
            else:
                parts.append(f"({s})*{var}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"NodeElement[N={self.ctx.N},K={self.ctx.K}]({self})"

    def to_json(self) -> dict:
        K = self.ctx.K
        return {
            "c0": self.c0.to_json(),
            "a": [self.a(i).to_json() for i in range(1, K + 1)],
            "b": [self.b(j).to_json() for j in range(1, K + 1)],
            "N": self.ctx.N,
            "K": K,
        }

    @classmethod
    def from_json(cls, data: dict, kinds=None) -> "NodeElement":
        ctx = NodeContext(int(data["N"]), int(data["K"]))
        load = lambda x: QTrunc.from_json(ctx.N, x, kinds)  # noqa: E731
        return cls(ctx, load(data["c0"]), [load(x) for x in data["a"]], [load(x) for x in data["b"]])


def node_mul(a: NodeElement, b: NodeElement) -> NodeElement:
    return a * b


# -- embedding into the punctured disks -------------------------------------

def iota(e: NodeElement) -> tuple[Laurent, Laurent]:
    """``x2 -> q/x1`` on the first component, ``x1 -> q/x2`` on the second."""
    ctx = e.ctx
    N, K = ctx.N, ctx.K
    known = tuple(K - 2 * k for k in range(N + 1))
    t1, t2 = {}, {}
    for idx, c in e.items():
        if idx >= 0:
            t1[idx] = c
            t2[-idx] = t2.get(-idx, QTrunc.zero(N)) + c.shift(idx)
        if idx < 0:
            j = -idx
            t2[j] = c
            t1[-j] = t1.get(-j, QTrunc.zero(N)) + c.shift(j)
    return Laurent("x1", N, t1, known), Laurent("x2", N, t2, known)


def iota_preimage(p: tuple[Laurent, Laurent], ctx: NodeContext) -> NodeElement:
    """Solve ``iota(e) == p`` for e, or raise NotInImage."""
    L1, L2 = p
    N, K = ctx.N, ctx.K
    if L1.N != N or L2.N != N:
        raise Mismatch("q-order mismatch")
    for L in (L1, L2):
        for e in L.terms:
            if e < -N:
                raise NotInImage(f"polar depth {-e} exceeds N={N}")

    def take(L, e, w):
        cap = ctx.qcap(w)
        c = L.coeff(e, upto=cap + 1)
        return c

    c0 = take(L1, 0, 0)
    a = [take(L1, i, i) for i in range(1, K + 1)]
    b = [take(L2, j, j) for j in range(1, K + 1)]
    cand = NodeElement(ctx, c0, a, b)
    i1, i2 = iota(cand)
    for got, want in ((i1, L1), (i2, L2)):
        bad = got.diff_on_window(want)
        if bad:
            e, k = bad[0]
            raise NotInImage(f"{want.var}-component disagrees at {want.var}^{e}, q^{k}")
    return cand


# -- differentials -----------------------------------------------------------

class NodeDiff:
    """``s * x1 dx2 + f(x1) dx1 + g(x2) dx2`` with the node relation applied.

    Weights: dx1, dx2 have weight 1, so ``f_i`` at q**k survives iff
    ``2k + i + 1 <= K``, and ``s`` iff ``2k + 2 <= K``.
    """

    __slots__ = ("ctx", "s", "f", "g")

    def __init__(self, ctx: NodeContext, s=None, f=(), g=()):
        N, K = ctx.N, ctx.K
        lift = lambda x: x if isinstance(x, QTrunc) else QTrunc.const(N, x)  # noqa: E731
        self.ctx = ctx
        self.s = _clip(ctx, lift(s if s is not None else 0), 2)
        fl = [lift(x) for x in f][:K] + [QTrunc.zero(N)] * max(0, K - len(f))
        gl = [lift(x) for x in g][:K] + [QTrunc.zero(N)] * max(0, K - len(g))
        self.f = tuple(_clip(ctx, x, i + 1) for i, x in enumerate(fl))
        self.g = tuple(_clip(ctx, x, j + 1) for j, x in enumerate(gl))

    @classmethod
    def dx1(cls, ctx):
        return cls(ctx, f=[1])

    @classmethod
    def dx2(cls, ctx):
        return cls(ctx, g=[1])

    @classmethod
    def x1dx2(cls, ctx):
        return cls(ctx, s=1)

    def as_pair(self) -> tuple[NodeElement, NodeElement]:
        """General form ``P dx1 + Q dx2``."""
        ctx = self.ctx
        P = NodeElement(ctx, self.f[0], self.f[1:])
        Q = NodeElement(ctx, self.g[0], [self.s], self.g[1:])
        return P, Q

    def __add__(self, other):
        if other.ctx != self.ctx:
            raise Mismatch("context mismatch")
        return NodeDiff(self.ctx, self.s + other.s,
                        [x + y for x, y in zip(self.f, other.f)],
                        [x + y for x, y in zip(self.g, other.g)])

    def __neg__(self):
        return NodeDiff(self.ctx, -self.s, [-x for x in self.f], [-x for x in self.g])

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, NodeDiff):
            return NotImplemented
        return (self.ctx, self.s, self.f, self.g) == (other.ctx, other.s, other.f, other.g)

    def __hash__(self):
        return hash((self.ctx, self.s, self.f, self.g))

    def __bool__(self):
        return bool(self.s) or any(self.f) or any(self.g)

    def __str__(self):
        parts = []
        if self.s:
            parts.append(f"({self.s})*x1dx2")
        for i, c in enumerate(self.f):
            if c:
                parts.append(f"({c})*x1^{i}dx1")
        for j, c in enumerate(self.g):
            if c:
                parts.append(f"({c})*x2^{j}dx2")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def diff_from_pair(P: NodeElement, Q: NodeElement) -> NodeDiff:
    """Normalize ``P dx1 + Q dx2`` using ``x2 dx1 = -x1 dx2`` and ``x1 x2 = q``."""
    ctx = P.ctx
    N, K = ctx.N, ctx.K
    zero = QTrunc.zero(N)
    s = zero
    f = [zero] * K
    g = [zero] * K
    for idx, c in P.items():
        if idx >= 0:
            if idx < K:
                f[idx] = f[idx] + c
        elif idx == -1:
            s = s - c
        elif -idx - 2 < K:
            g[-idx - 2] = g[-idx - 2] - c.shift(1)
    for idx, c in Q.items():
        if idx <= 0:
            if -idx < K:
                g[-idx] = g[-idx] + c
        elif idx == 1:
            s = s + c
        elif idx - 2 < K:
            f[idx - 2] = f[idx - 2] - c.shift(1)
    return NodeDiff(ctx, s, f, g)


def d_node(e: NodeElement) -> NodeDiff:
    ctx = e.ctx
    P = NodeElement(ctx, None, [e.a(i + 1) * (i + 1) for i in range(1, ctx.K)])
    P = P + NodeElement.const(ctx, e.a(1))
    Q = NodeElement(ctx, None, (), [e.b(j + 1) * (j + 1) for j in range(1, ctx.K)])
    Q = Q + NodeElement.const(ctx, e.b(1))
    return diff_from_pair(P, Q)


def normalize_diff(m: NodeElement, w: NodeDiff) -> NodeDiff:
    """The product ``m * w`` in normal form."""
    P, Q = w.as_pair()
    return diff_from_pair(m * P, m * Q)


class OmegaElt:
    """``coeff * e`` with ``e = dx2/x2 = -dx1/x1`` generating the dualizing module."""

    __slots__ = ("coeff",)

    def __init__(self, coeff: NodeElement):
        self.coeff = coeff

    def __add__(self, other):
        return OmegaElt(self.coeff + other.coeff)

    def __sub__(self, other):
        return OmegaElt(self.coeff - other.coeff)

    def __eq__(self, other):
        return isinstance(other, OmegaElt) and self.coeff == other.coeff

    def __hash__(self):
        return hash(self.coeff)

    def __bool__(self):
        return bool(self.coeff)

    def __str__(self):
        return f"({self.coeff})*e"

    __repr__ = __str__


def to_omega(w: NodeDiff) -> OmegaElt:
    """``dx1 -> -x1 e``, ``dx2 -> x2 e``, ``x1 dx2 -> q e``."""
    ctx = w.ctx
    c = NodeElement.const(ctx, w.s.shift(1))
    c = c + NodeElement(ctx, None, [-x for x in w.f])
    c = c + NodeElement(ctx, None, (), list(w.g))
    return OmegaElt(c)


def log_derivative(v: NodeElement) -> NodeElement:
    """``dv / v`` expressed on e (the Euler operator ``x2 d/dx2 - x1 d/dx1``)."""
    return to_omega(d_node(v)).coeff * v.inverse()


# -- determinant of the local complex --------------------------------------

def theta_det(ctx: NodeContext) -> QTrunc:
    """Determinant of the rank-one piece ``R x1dx2 -> R e``."""
    image = to_omega(NodeDiff.x1dx2(ctx)).coeff
    return image.c0


def theta_scaling(lam, ctx: NodeContext | None = None, side: int = 1) -> CoeffPoly:
    """Factor by which the trivialization ``e (x) (x1 dx2)^-1`` rescales under
    ``(x1, x2, q) -> (lam x1, x2, lam q)`` (side 1) or ``(x1, lam x2, lam q)``."""
    ctx = ctx or NodeContext(1, 2)
    lam = CoeffPoly.coerce(lam)
    new_x1 = NodeElement.x1(ctx, 1, lam if side == 1 else 1)
    new_x2 = NodeElement.x2(ctx, 1, lam if side == 2 else 1)
    # new x1 dx2 in the old basis: s-component
    dx2_new = d_node(new_x2)
    gen = normalize_diff(new_x1, dx2_new)
    s_factor = gen.s.c[0]
    # new e = d(x2')/x2': compare the x2-coefficients of to_omega(dx2') and x2'
    e_factor = to_omega(dx2_new).coeff.b(1).c[0] * new_x2.b(1).c[0].inverse()
    return e_factor * s_factor.inverse()
