"""Exact truncated series over a sparse rational coefficient ring.

Three layers:

* ``CoeffPoly`` -- sparse polynomial over ``Fraction`` in named symbols.
  Symbols are *constants* (free), *nilpotent* (square zero) or *units*
  (negative exponents allowed, so ``lam * lam**-1 == 1``).
* ``QTrunc`` -- polynomial in the gluing parameter ``q`` modulo ``q**(N+1)``.
* ``Laurent`` -- one-variable Laurent series with ``QTrunc`` coefficients and
  an explicit known-order window per q-order.

Reading a Laurent coefficient outside its window raises ``WindowError``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

INF = math.inf

CONSTANT = "constant"
NILPOTENT = "nilpotent"
UNIT = "unit"
_KINDS = (CONSTANT, NILPOTENT, UNIT)


class SeriesError(ValueError):
    pass


class WindowError(SeriesError):
    """Raised when a coefficient beyond the known window is requested."""


class NonUnit(SeriesError):
    pass


class Mismatch(SeriesError):
    """Operands live in different variables or truncation orders."""


class Sym:
    __slots__ = ("name", "kind", "_h")

    def __init__(self, name: str, kind: str = CONSTANT):
        if kind not in _KINDS:
            raise ValueError(f"unknown symbol kind {kind!r}")
        self.name = name
        self.kind = kind
        self._h = hash(name)

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        return isinstance(other, Sym) and self.name == other.name and self.kind == other.kind

    def __lt__(self, other):
        return self.name < other.name

    def __repr__(self):
        return f"Sym({self.name!r}, {self.kind!r})"

    def __str__(self):
        return self.name


# A monomial is a tuple of (Sym, exponent) pairs sorted by symbol name.
Monomial = tuple


def _mono_mul(m1: Monomial, m2: Monomial):
    """Product of two monomials, or None when it vanishes (nilpotent square)."""
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        s1, e1 = m1[i]
        s2, e2 = m2[j]
        if s1.name == s2.name:
            e = e1 + e2
            if s1.kind == NILPOTENT and e > 1:
                return None
            if e:
                out.append((s1, e))
            i += 1
            j += 1
        elif s1.name < s2.name:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _is_nilpotent_mono(m: Monomial) -> bool:
    return any(s.kind == NILPOTENT for s, _ in m)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class CoeffPoly:
    """Immutable sparse polynomial ``{monomial: Fraction}`` with no zero entries."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        if terms is None:
            self.terms = {}
            return
        clean = {}
        for m, c in terms.items():
            c = _as_fraction(c)
            if c:
                clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "CoeffPoly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c) -> "CoeffPoly":
        c = _as_fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def sym(cls, s: Sym, power: int = 1) -> "CoeffPoly":
        if power == 0:
            return cls.const(1)
        if s.kind == NILPOTENT and power > 1:
            return cls._raw({})
        if power < 0 and s.kind != UNIT:
            raise NonUnit(f"{s.name} is not a unit symbol")
        return cls._raw({((s, power),): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "CoeffPoly":
        if isinstance(x, CoeffPoly):
            return x
        if isinstance(x, Sym):
            return cls.sym(x)
        return cls.const(x)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = CoeffPoly.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return CoeffPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        if not self.terms:
            return self
        return CoeffPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-CoeffPoly.coerce(other))

    def __rsub__(self, other):
        return CoeffPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CoeffPoly):
            if isinstance(other, Sym):
                other = CoeffPoly.sym(other)
            else:
                c = _as_fraction(other)
                if not c:
                    return CoeffPoly._raw({})
                return CoeffPoly._raw({m: v * c for m, v in self.terms.items()})
        if not self.terms or not other.terms:
            return CoeffPoly._raw({})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                if m is None:
                    continue
                v = out.get(m)
                if v is None:
                    out[m] = c1 * c2
                else:
                    v += c1 * c2
                    if v:
                        out[m] = v
                    else:
                        del out[m]
        return CoeffPoly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / _as_fraction(other))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CoeffPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- predicates -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, CoeffPoly):
            return self.terms == other.terms
        try:
            return self.terms == CoeffPoly.coerce(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_part(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_nilpotent(self) -> bool:
        return all(_is_nilpotent_mono(m) for m in self.terms)

    def unit_lead(self):
        """Return ``(coeff, monomial)`` of the invertible leading term, or None.

        A polynomial is a unit when exactly one monomial is free of nilpotent
        symbols and that monomial is built from unit symbols only.
        """
        lead = [(m, c) for m, c in self.terms.items() if not _is_nilpotent_mono(m)]
        if len(lead) != 1:
            return None
        m, c = lead[0]
        if any(s.kind != UNIT for s, _ in m):
            return None
        return c, m

    def is_unit(self) -> bool:
        return self.unit_lead() is not None

    def inverse(self) -> "CoeffPoly":
        lead = self.unit_lead()
        if lead is None:
            raise NonUnit(f"{self} is not a unit of the coefficient ring")
        c, m = lead
        inv_lead = CoeffPoly._raw({tuple((s, -e) for s, e in m): 1 / c})
        r = self * inv_lead - 1  # nilpotent
        result = CoeffPoly.const(1)
        power = CoeffPoly.const(1)
        while True:
            power = power * (-r)
            if not power:
                break
            result = result + power
        return result * inv_lead

    # -- structure ------------------------------------------------------
    def symbols(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def coeff_of(self, s: Sym, power: int = 1) -> "CoeffPoly":
        """Coefficient of ``s**power`` (other symbols kept)."""
        out = {}
        for m, c in self.terms.items():
            e = dict((x.name, k) for x, k in m).get(s.name, 0)
            if e == power:
                out[tuple(p for p in m if p[0].name != s.name)] = c
        return CoeffPoly._raw(out)

    def subs(self, mapping: Mapping[str, "CoeffPoly"]) -> "CoeffPoly":
        """Substitute symbols (by name) with polynomials."""
        if not mapping:
            return self
        out = CoeffPoly._raw({})
        for m, c in self.terms.items():
            term = CoeffPoly._raw({(): c})
            keep = []
            for s, e in m:
                if s.name in mapping:
                    term = term * (CoeffPoly.coerce(mapping[s.name]) ** e)
                else:
                    keep.append((s, e))
            if keep:
                term = term * CoeffPoly._raw({tuple(keep): Fraction(1)})
            out = out + term
        return out

    def sorted_terms(self):
        """Terms in canonical order: by total degree, then lexicographic names."""
        def key(item):
            m = item[0]
            return (sum(abs(e) for _, e in m), [(s.name, e) for s, e in m])
        return sorted(self.terms.items(), key=key)

    # -- rendering ------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(s.name if e == 1 else f"{s.name}^{e}" for s, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"CoeffPoly({self})"

    def to_json(self) -> list:
        return [
            {"num": str(c.numerator), "den": str(c.denominator),
             "mono": {s.name: e for s, e in m}}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: list, kinds: Mapping[str, str] | None = None) -> "CoeffPoly":
        kinds = kinds or {}
        terms = {}
        for t in data:
            m = tuple(sorted(((Sym(n, kinds.get(n, CONSTANT)), int(e))
                              for n, e in t["mono"].items()), key=lambda p: p[0].name))
            terms[m] = Fraction(int(t["num"]), int(t["den"]))
        return cls(terms)


ZERO = CoeffPoly()
ONE = CoeffPoly.const(1)


def symbols(names: str | Iterable[str], kind: str = CONSTANT):
    """``symbols("a b")`` -> tuple of CoeffPoly generators."""
    if isinstance(names, str):
        names = names.split()
    return tuple(CoeffPoly.sym(Sym(n, kind)) for n in names)


class QTrunc:
    """Polynomial in q with CoeffPoly coefficients, modulo ``q**(N+1)``."""

    __slots__ = ("N", "c")

    def __init__(self, N: int, coeffs: Iterable = ()):
        if N < 0:
            raise ValueError("N must be >= 0")
        c = [CoeffPoly.coerce(x) for x in coeffs][: N + 1]
        c.extend([ZERO] * (N + 1 - len(c)))
        self.N = N
        self.c = tuple(c)

    @classmethod
    def _raw(cls, N, c):
        p = cls.__new__(cls)
        p.N = N
        p.c = c
        return p

    @classmethod
    def zero(cls, N):
        return cls._raw(N, (ZERO,) * (N + 1))

    @classmethod
    def const(cls, N, x):
        return cls._raw(N, (CoeffPoly.coerce(x),) + (ZERO,) * N)

    @classmethod
    def q(cls, N, power: int = 1, coeff=1):
        if power > N:
            return cls.zero(N)
        c = [ZERO] * (N + 1)
        c[power] = CoeffPoly.coerce(coeff)
        return cls._raw(N, tuple(c))

    def _coerce(self, other) -> "QTrunc":
        if isinstance(other, QTrunc):
            if other.N != self.N:
                raise Mismatch(f"q-order mismatch: {self.N} vs {other.N}")
            return other
        return QTrunc.const(self.N, other)

    def __add__(self, other):
        other = self._coerce(other)
        return QTrunc._raw(self.N, tuple((a + b) if b.terms else a for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return QTrunc._raw(self.N, tuple(-a for a in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QTrunc):
            if isinstance(other, (CoeffPoly, Sym)) or isinstance(other, (int, Fraction)):
                k = CoeffPoly.coerce(other)
                return QTrunc._raw(self.N, tuple(a * k for a in self.c))
            return NotImplemented
        other = self._coerce(other)
        N = self.N
        out = [ZERO] * (N + 1)
        nz = [(j, b) for j, b in enumerate(other.c) if b.terms]
        for i, a in enumerate(self.c):
            if not a.terms:
                continue
            for j, b in nz:
                if i + j > N:
                    break
                out[i + j] = out[i + j] + a * b
        return QTrunc._raw(N, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / _as_fraction(other))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QTrunc.const(self.N, 1)
        for _ in range(n):
            result = result * self
        return result

    def __bool__(self):
        return any(a.terms for a in self.c)

    def __eq__(self, other):
        if isinstance(other, QTrunc):
            return self.N == other.N and self.c == other.c
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.N, self.c))

    def __getitem__(self, k: int) -> CoeffPoly:
        return self.c[k] if 0 <= k <= self.N else ZERO

    def is_unit(self) -> bool:
        return self.c[0].is_unit()

    def inverse(self) -> "QTrunc":
        if not self.is_unit():
            raise NonUnit(f"{self} is not a unit")
        inv0 = self.c[0].inverse()
        r = self * inv0 - 1  # divisible by q or nilpotent
        result = QTrunc.const(self.N, 1)
        power = QTrunc.const(self.N, 1)
        while True:
            power = power * (-r)
            if not power:
                break
            result = result + power
        return result * inv0

    def valuation(self):
        """Lowest q-power with nonzero coefficient (None for zero)."""
        for k, a in enumerate(self.c):
            if a:
                return k
        return None

    def with_order(self, N: int) -> "QTrunc":
        """Reduce (or zero-extend) to truncation order N."""
        c = self.c[: N + 1] + (ZERO,) * max(0, N + 1 - len(self.c))
        return QTrunc._raw(N, c)

    def shift(self, k: int) -> "QTrunc":
        """Multiply by q**k."""
        if k == 0:
            return self
        c = (ZERO,) * k + self.c[: self.N + 1 - k] if k <= self.N else (ZERO,) * (self.N + 1)
        return QTrunc._raw(self.N, tuple(c))

    def map(self, f) -> "QTrunc":
        return QTrunc._raw(self.N, tuple(f(a) for a in self.c))

    def subs(self, mapping) -> "QTrunc":
        return self.map(lambda a: a.subs(mapping))

    def __str__(self):
        parts = []
        for k, a in enumerate(self.c):
            if not a:
                continue
            s = str(a)
            if k == 0:
                parts.append(s)
                continue
            qk = "q" if k == 1 else f"q^{k}"
            if s == "1":
                parts.append(qk)
            elif len(a.terms) > 1:
                parts.append(f"({s})*{qk}")
            else:
                parts.append(f"{s}*{qk}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def __repr__(self):
        return f"QTrunc(N={self.N}: {self})"

    def to_json(self) -> list:
        return [a.to_json() for a in self.c]

    @classmethod
    def from_json(cls, N: int, data: list, kinds=None) -> "QTrunc":
        return cls(N, [CoeffPoly.from_json(x, kinds) for x in data])


def _norm_known(N: int, known) -> tuple:
    if isinstance(known, (int, float)):
        return (known,) * (N + 1)
    known = tuple(known)
    if len(known) != N + 1:
        raise ValueError("known window must have one entry per q-order")
    return known


def _shift_min(emin: tuple, N: int) -> list:
    """Lowest exponent shift reachable by products of one or more factors.

    ``emin[k]`` is the lowest exponent of a factor at q-order k; factors of
    q-order 0 must have ``emin[0] >= 0`` so extra factors never lower degree.
    Returned list is indexed by total q-order of the product.
    """
    D = [INF] * (N + 1)
    D[0] = emin[0]
    for k in range(1, N + 1):
        D[k] = min([emin[k]] + [emin[a] + D[k - a] for a in range(1, k + 1)])
    return D


class Laurent:
    """Laurent series in one variable with ``QTrunc`` coefficients.

    ``known[k]`` bounds the exponents whose q**k coefficient is known: the
    coefficient of ``q**k * var**e`` is known exactly iff ``e <= known[k]``.
    ``INF`` means exact (a Laurent polynomial in that q-order).
    """

    __slots__ = ("var", "N", "terms", "known")

    def __init__(self, var: str, N: int, terms: Mapping | None = None, known=INF):
        self.var = var
        self.N = N
        self.known = _norm_known(N, known)
        clean = {}
        for e, c in (terms or {}).items():
            if not isinstance(c, QTrunc):
                c = QTrunc.const(N, c)
            elif c.N != N:
                raise Mismatch(f"q-order mismatch: {c.N} vs {N}")
            c = self._clip(int(e), c)
            if c:
                clean[int(e)] = c
        self.terms = clean

    def _clip(self, e, c: QTrunc) -> QTrunc:
        if all(e <= K for K in self.known):
            return c
        return QTrunc._raw(self.N, tuple(a if e <= self.known[k] else ZERO
                                         for k, a in enumerate(c.c)))

    @classmethod
    def _raw(cls, var, N, terms, known):
        s = cls.__new__(cls)
        s.var, s.N, s.known = var, N, known
        s.terms = terms
        return s

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, var, N, known=INF):
        return cls(var, N, {}, known)

    @classmethod
    def one(cls, var, N):
        return cls(var, N, {0: QTrunc.const(N, 1)})

    @classmethod
    def mono(cls, var, N, e: int, coeff=1, known=INF):
        return cls(var, N, {e: coeff if isinstance(coeff, QTrunc) else QTrunc.const(N, coeff)}, known)

    @classmethod
    def from_coeffs(cls, var, N, coeffs: Mapping, K=INF):
        return cls(var, N, dict(coeffs), K)

    # -- window bookkeeping ---------------------------------------------
    @property
    def K(self):
        return min(self.known)

    def emins(self) -> tuple:
        """Lowest possibly-nonzero exponent per q-order (unknown counted)."""
        out = []
        for k in range(self.N + 1):
            lo = self.known[k] + 1
            for e, c in self.terms.items():
                if c.c[k] and e < lo:
                    lo = e
            out.append(lo)
        return tuple(out)

    @property
    def e_min(self):
        es = [e for e in self.terms]
        return min(es) if es else None

    def truncate(self, K) -> "Laurent":
        known = tuple(min(a, b) for a, b in zip(self.known, _norm_known(self.N, K)))
        return Laurent(self.var, self.N, self.terms, known)

    def with_order(self, N: int) -> "Laurent":
        known = tuple(self.known[k] if k <= self.N else -INF for k in range(N + 1))
        if N > self.N:
            raise Mismatch("cannot raise the q-order of a series")
        return Laurent(self.var, N, {e: c.with_order(N) for e, c in self.terms.items()}, known)

    def coeff(self, e: int, upto: int | None = None) -> QTrunc:
        """Coefficient of var**e (reduced mod q**upto when given)."""
        upto = self.N + 1 if upto is None else min(upto, self.N + 1)
        for k in range(upto):
            if e > self.known[k]:
                raise WindowError(f"coefficient of {self.var}^{e} at q^{k} is beyond the known window {self.known[k]}")
        c = self.terms.get(e, QTrunc.zero(self.N))
        if upto <= self.N:
            c = QTrunc._raw(self.N, c.c[:upto] + (ZERO,) * (self.N + 1 - upto))
        return c

    def __getitem__(self, e: int) -> QTrunc:
        return self.coeff(e)

    def _check(self, other: "Laurent"):
        if other.var != self.var:
            raise Mismatch(f"variable mismatch: {self.var} vs {other.var}")
        if other.N != self.N:
            raise Mismatch(f"q-order mismatch: {self.N} vs {other.N}")

    def _lift(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            self._check(other)
            return other
        if isinstance(other, QTrunc):
            if other.N != self.N:
                raise Mismatch(f"q-order mismatch: {self.N} vs {other.N}")
            return Laurent._raw(self.var, self.N, {0: other} if other else {}, (INF,) * (self.N + 1))
        return Laurent(self.var, self.N, {0: QTrunc.const(self.N, other)})

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        known = tuple(min(a, b) for a, b in zip(self.known, other.known))
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Laurent(self.var, self.N, terms, known)

    __radd__ = __add__

    def __neg__(self):
        return Laurent._raw(self.var, self.N, {e: -c for e, c in self.terms.items()}, self.known)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CoeffPoly, Sym)):
            k = CoeffPoly.coerce(other)
            return Laurent(self.var, self.N, {e: c * k for e, c in self.terms.items()}, self.known)
        other = self._lift(other)
        N = self.N
        ea, eb = self.emins(), other.emins()
        known = []
        for k in range(N + 1):
            best = INF
            for k1 in range(k + 1):
                k2 = k - k1
                best = min(best, self.known[k1] + eb[k2], other.known[k2] + ea[k1])
            known.append(best)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                p = c1 * c2
                terms[e] = terms[e] + p if e in terms else p
        return Laurent(self.var, N, terms, tuple(known))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / _as_fraction(other))

    def __pow__(self, n: int):
        if n < 0:
            raise SeriesError("use invert() for negative powers")
        result = Laurent.one(self.var, self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, n: int) -> "Laurent":
        """Multiply by var**n."""
        return Laurent._raw(self.var, self.N, {e + n: c for e, c in self.terms.items()},
                            tuple(K + n for K in self.known))

    def q_shift(self, j: int) -> "Laurent":
        """Multiply by q**j."""
        return self * QTrunc.q(self.N, j)

    def map_coeffs(self, f) -> "Laurent":
        return Laurent(self.var, self.N, {e: f(c) for e, c in self.terms.items()}, self.known)

    def subs(self, mapping) -> "Laurent":
        return self.map_coeffs(lambda c: c.subs(mapping))

    def rename(self, var: str) -> "Laurent":
        return Laurent._raw(var, self.N, dict(self.terms), self.known)

    # -- calculus -------------------------------------------------------
    def derive(self) -> "Laurent":
        terms = {e - 1: c * e for e, c in self.terms.items() if e}
        return Laurent(self.var, self.N, terms, tuple(K - 1 for K in self.known))

    def residue(self) -> QTrunc:
        return self.coeff(-1)

    def polar_part(self) -> "Laurent":
        """Terms with negative exponent (requires knowledge through var**-1)."""
        for k, K in enumerate(self.known):
            if K < -1:
                raise WindowError(f"polar part unknown at q^{k}")
        return Laurent(self.var, self.N, {e: c for e, c in self.terms.items() if e < 0})

    def regular_part(self) -> "Laurent":
        return Laurent(self.var, self.N, {e: c for e, c in self.terms.items() if e >= 0}, self.known)

    def subst_q_over_x(self) -> "Laurent":
        """Termwise ``c*x**e -> c*q**e*x**-e`` for a regular series."""
        if any(e < 0 for e in self.terms):
            raise SeriesError("subst_q_over_x needs a regular series (no polar part)")
        N = self.N
        terms = {}
        for e, c in self.terms.items():
            if e <= N:
                t = c.shift(e)
                if t:
                    terms[-e] = t
        known = []
        for m in range(N + 1):
            # input (e, m-e) unknown -> output exponent -e unknown at q^m
            worst = None
            for e in range(0, m + 1):
                if e > self.known[m - e]:
                    worst = e if worst is None else max(worst, e)
            known.append(INF if worst is None else -worst - 1)
        return Laurent(self.var, N, terms, tuple(known))

    def _unit_split(self):
        """Return (e0, lead CoeffPoly) for the lowest exponent carrying a unit."""
        for e in sorted(self.terms):
            c = self.terms[e]
            if c.c[0].is_unit():
                if e > self.known[0]:
                    break
                return e, c.c[0]
            if not c.c[0].is_nilpotent():
                break
        raise NonUnit("no invertible leading coefficient (lower terms must be nilpotent)")

    def invert(self, K=None) -> "Laurent":
        """Multiplicative inverse; ``K`` caps the output window (needed for exact input)."""
        e0, lead = self._unit_split()
        inv_lead = lead.inverse()
        r = (self * inv_lead).shift(-e0) - 1
        target = INF if K is None else K + e0
        er = r.emins()
        if er[0] < 1:
            raise NonUnit("leading term is not isolated: q^0 part of the remainder has degree < 1")
        D = _shift_min(er, self.N)
        total = Laurent.one(self.var, self.N)
        p = Laurent.one(self.var, self.N)
        for _ in range(100000):
            p = p * (-r)
            total = total + p
            ep = p.emins()
            done = True
            for m in range(self.N + 1):
                bound = min((ep[k] + D[m - k] for k in range(m + 1)), default=INF)
                limit = min(total.known[m], target)
                if limit == INF or bound <= limit:
                    done = False
                    break
            if done or (not p.terms and all(K_ == INF for K_ in p.known)):
                break
            if all(K_ == INF for K_ in total.known) and target == INF and p.terms:
                raise SeriesError("inverse of an exact series is infinite: pass a window K")
        else:  # pragma: no cover - guarded by nilpotency
            raise SeriesError("inverse did not converge")
        result = total.truncate(target) * inv_lead
        return result.shift(-e0)

    def compose(self, u: "Laurent", K=None) -> "Laurent":
        """Substitute ``var -> u(var)``; ``u`` must be ``var * (unit)`` up to nilpotents."""
        self._check(u)
        N = self.N
        w = u.shift(-1)
        e0, lead = w._unit_split()
        if e0 != 0:
            raise NonUnit("substitution series must have a unit linear coefficient")
        ew = w.emins()
        if ew[0] < 0:
            raise NonUnit("substitution series has a non-nilpotent polar part")
        D = [0] + [INF] * N
        for m in range(1, N + 1):
            D[m] = min([0] + [ew[a] + D[m - a] for a in range(1, m + 1)])
        result = Laurent.zero(self.var, N)
        pos = [e for e in self.terms if e >= 0]
        neg = [e for e in self.terms if e < 0]
        if pos:
            power = Laurent.one(self.var, N)
            upto = max(pos)
            for e in range(0, upto + 1):
                if e in self.terms:
                    result = result + power * self.terms[e]
                if e < upto:
                    power = power * u
                    if K is not None:
                        power = power.truncate(K)
        if neg:
            uinv = u.invert(K=None if K is None else K + max(1, -min(neg)) * 2 + N)
            power = Laurent.one(self.var, N)
            for e in range(-1, min(neg) - 1, -1):
                power = power * uinv
                if e in self.terms:
                    result = result + power * self.terms[e]
        # an unknown coefficient at (q^k, var^e) with e > known[k] lands at
        # exponents >= e + D[m-k] in q-order m; this holds for negative e too,
        # since powers of w^-1 have the same lowest exponents as powers of w
        known = list(result.known)
        for m in range(N + 1):
            for k in range(m + 1):
                Ka = self.known[k]
                if Ka == INF:
                    continue
                known[m] = min(known[m], Ka + D[m - k])
        out = Laurent(self.var, N, result.terms, tuple(known))
        return out if K is None else out.truncate(K)

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Laurent):
            return NotImplemented
        return (self.var, self.N, self.known, self.terms) == (other.var, other.N, other.known, other.terms)

    def __hash__(self):
        return hash((self.var, self.N, self.known, tuple(sorted(self.terms.items()))))

    def equal_on_window(self, other: "Laurent", K=INF) -> bool:
        return not self.diff_on_window(other, K)

    def diff_on_window(self, other: "Laurent", K=INF) -> list:
        """List of (exponent, q-order) where the two series differ on the joint window."""
        self._check(other)
        bad = []
        for e in sorted(set(self.terms) | set(other.terms)):
            a = self.terms.get(e)
            b = other.terms.get(e)
            for k in range(self.N + 1):
                if e > min(self.known[k], other.known[k], K):
                    continue
                ca = a.c[k] if a else ZERO
                cb = b.c[k] if b else ZERO
                if ca != cb:
                    bad.append((e, k))
        return bad

    def is_zero_on_window(self) -> bool:
        return not self.terms

    # -- rendering ------------------------------------------------------
    def __str__(self):
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            s = str(c)
            v = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            if not v:
                parts.append(s)
            elif s == "1":
                parts.append(v)
            elif s == "-1":
                parts.append("-" + v)
            else:
                parts.append(f"({s})*{v}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        K = self.K
        return body if K == INF else f"{body} + O({self.var}^{K + 1})"

    def __repr__(self):
        return f"Laurent[{self.var}, N={self.N}]({self})"

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "N": self.N,
            "known": [None if K == INF else int(K) for K in self.known],
            "terms": [{"exp": e, "q": self.terms[e].to_json()} for e in sorted(self.terms)],
        }

    @classmethod
    def from_json(cls, data: dict, kinds=None) -> "Laurent":
        N = int(data["N"])
        known = tuple(INF if K is None else int(K) for K in data.get("known", [None] * (N + 1)))
        terms = {int(t["exp"]): QTrunc.from_json(N, t["q"], kinds) for t in data["terms"]}
        return cls(data["var"], N, terms, known)
