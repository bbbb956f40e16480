"""q-expansion of the period map near a separating node.

A global differential on the glued family is a quadruple
``(omega1, phi1, omega2, phi2)``: ``omega_s`` a differential on curve s
regular away from its marked point, ``phi_s`` a power series in the local
parameter, subject to

    omega1(x1) = phi1(x1) dx1 - q phi2(q/x1) dx1/x1**2,
    omega2(x2) = phi2(x2) dx2 - q phi1(q/x2) dx2/x2**2.

Writing ``omega_s = seed + sum_k P_k omega[-k]``, the polar part of omega1
forces ``P1_{e+2} = -q**(e+1) [z**e] phi2`` and ``phi1`` is the regular part
of omega1; symmetrically on side 2.  Iterating this map gains one power of
q per pass.  A curve is described by any object with the data interface of
``GenusData`` (free symbols) or ``EllipticData`` (Weierstrass coefficients).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .basis import GenusData, h1_reduce
from .combo import ALPHA, OMEGA, CohomClass, DiffCombo, _latex_q, alpha, label_latex, label_str, omega
from .elliptic import EllipticData, WpContext
from .series import CoeffPoly, Laurent, QTrunc, SeriesError, Sym

SymbolicSide = GenusData
EllipticSide = EllipticData


@dataclass(frozen=True)
class GluingDatum:
    side1: object
    side2: object
    N: int

    def swapped(self) -> "GluingDatum":
        return GluingDatum(self.side2, self.side1, self.N)


@dataclass
class GlobalSection:
    omega1: DiffCombo
    phi1: Laurent
    omega2: DiffCombo
    phi2: Laurent

    def swapped(self) -> "GlobalSection":
        return GlobalSection(self.omega2, self.phi2, self.omega1, self.phi1)


def symbolic_pair(g1: int, g2: int, N: int) -> GluingDatum:
    """Two curves with free expansion symbols (side 2 symbols are primed)."""
    return GluingDatum(GenusData(g1), GenusData(g2, "'"), N)


def elliptic_pair(N: int, closed: bool = False) -> GluingDatum:
    return GluingDatum(EllipticData(WpContext("t1", closed=closed)),
                       EllipticData(WpContext("t2", closed=closed)), N)


def _q(N: int, power: int, coeff) -> QTrunc:
    return QTrunc.q(N, power, 1) * coeff if power <= N else QTrunc.zero(N)


def _regular_coeff(side, label, e: int) -> CoeffPoly:
    """``[z**e]`` of a basis differential, for e >= 0."""
    kind, n = label
    g = side.g
    out = CoeffPoly.const(1) if (kind == ALPHA and e == n) else CoeffPoly()
    if e >= g:
        out = out + (side.alpha_coeff(e - g, n) if kind == ALPHA else side.omega_coeff(e - g, n))
    return out


def _regular_part(side, combo: DiffCombo, upto: int) -> list[QTrunc]:
    N = combo.N
    out = [QTrunc.zero(N) for _ in range(upto + 1)]
    for lab, c in combo.items():
        for e in range(upto + 1):
            x = _regular_coeff(side, lab, e)
            if x:
                out[e] = out[e] + c * x
    return out


def _phi_laurent(coeffs: list[QTrunc], N: int) -> Laurent:
    return Laurent("z", N, {e: c for e, c in enumerate(coeffs) if c}, len(coeffs) - 1)


def _solve(side1, side2, N: int, seed) -> GlobalSection:
    upto = N + max(side1.g, side2.g) + 1
    P1: dict = {}
    P2: dict = {}
    seed_combo = DiffCombo(N, {seed: 1})
    for _ in range(N + 2):
        w1 = seed_combo + DiffCombo(N, {omega(k): c for k, c in P1.items()})
        w2 = DiffCombo(N, {omega(k): c for k, c in P2.items()})
        phi1 = _regular_part(side1, w1, N)
        phi2 = _regular_part(side2, w2, N)
        new1 = {e + 2: -(phi2[e].shift(e + 1)) for e in range(N) if phi2[e].shift(e + 1)}
        new2 = {e + 2: -(phi1[e].shift(e + 1)) for e in range(N) if phi1[e].shift(e + 1)}
        if new1 == P1 and new2 == P2:
            break
        P1, P2 = new1, new2
    else:  # pragma: no cover - the map gains one q-order per pass
        raise SeriesError("section solver did not converge")
    w1 = seed_combo + DiffCombo(N, {omega(k): c for k, c in P1.items()})
    w2 = DiffCombo(N, {omega(k): c for k, c in P2.items()})
    return GlobalSection(w1, _phi_laurent(_regular_part(side1, w1, upto), N),
                         w2, _phi_laurent(_regular_part(side2, w2, upto), N))


def solve_section(datum: GluingDatum, i: int, side: int = 1) -> GlobalSection:
    """The unique section with ``omega_s = alpha[i] mod q`` on the seed side,
    0 mod q on the other, and only ``q * omega[-k]`` corrections."""
    if side == 2:
        return solve_section(datum.swapped(), i, 1).swapped()
    if not 0 <= i < datum.side1.g:
        raise SeriesError(f"seed alpha[{i}] out of range for genus {datum.side1.g}")
    return _solve(datum.side1, datum.side2, datum.N, alpha(i))


def gluing_residual(datum: GluingDatum, s: GlobalSection) -> tuple[Laurent, Laurent]:
    """Both gluing equations' residuals on the window of the stored phi."""
    out = []
    for w, phi, other, data in ((s.omega1, s.phi1, s.phi2, datum.side1),
                                (s.omega2, s.phi2, s.phi1, datum.side2)):
        K = phi.K
        lhs = w.expand(data, K)
        polar = other.subst_q_over_x() * QTrunc.q(datum.N)
        rhs = phi - polar.shift(-2)
        out.append((lhs - rhs).truncate(K))
    return out[0], out[1]


def closed_Phi1(datum: GluingDatum, i: int) -> tuple[DiffCombo, DiffCombo]:
    """The explicit section for seed ``alpha[i]`` mod ``q**(g1+g2+2)``."""
    d1, d2 = datum.side1, datum.side2
    g1, g2 = d1.g, d2.g
    if not 0 <= i < g1:
        raise SeriesError(f"index {i} out of range for genus {g1}")
    N = min(datum.N, g1 + g2 + 1)
    w1 = {alpha(i): QTrunc.const(N, 1)}
    for m in range(0, g1 - i):
        c = _q(N, i + g2 + 2 + m, d2.omega_coeff(m, i + 2))
        if c:
            w1[omega(g2 + 2 + m)] = c
    w2 = {omega(i + 2): -_q(N, i + 1, 1)}
    for m in range(0, g2 + 1):
        c = -_q(N, g1 + 1 + m, d1.alpha_coeff(m, i))
        if c:
            lab = omega(g1 + 2 + m)
            w2[lab] = w2[lab] + c if lab in w2 else c
    return DiffCombo(N, w1), DiffCombo(N, w2)


# -- period matrices -------------------------------------------------------

class PeriodExpansion:
    """Matrix of ``Pi`` with QTrunc entries; rows are cohomology labels of
    both sides, columns the holomorphic seeds of both sides."""

    def __init__(self, N: int, g1: int, g2: int, columns: dict):
        self.N = N
        self.rows = [(1, lab) for lab in CohomClass.basis_labels(g1)] + \
                    [(2, lab) for lab in CohomClass.basis_labels(g2)]
        self.cols = [(1, alpha(i)) for i in range(g1)] + [(2, alpha(i)) for i in range(g2)]
        self.columns = columns  # col -> (CohomClass side 1, CohomClass side 2)

    def entry(self, row, col) -> QTrunc:
        side, lab = row
        return self.columns[col][side - 1].coeff(lab)

    def grade(self, j: int) -> dict:
        """``{(row, col): CoeffPoly}`` of the q**j coefficients (nonzero only)."""
        out = {}
        for col in self.cols:
            for row in self.rows:
                c = self.entry(row, col).c[j] if j <= self.N else CoeffPoly()
                if c:
                    out[(row, col)] = c
        return out

    def column_grade(self, col, j: int) -> tuple[CohomClass, CohomClass]:
        c1, c2 = self.columns[col]
        pick = lambda c: CohomClass(c.g, 0, {lab: QTrunc.const(0, x.c[j]) for lab, x in c.coeffs.items()})  # noqa: E731
        return pick(c1), pick(c2)

    @staticmethod
    def _name(x):
        side, lab = x
        return label_str(lab) + ("'" if side == 2 else "")

    def to_json(self) -> list:
        out = []
        for j in range(self.N + 1):
            out.append({
                "grade": j,
                "rows": [self._name(r) for r in self.rows],
                "cols": [self._name(c) for c in self.cols],
                "entries": [[self.entry(r, c).c[j].to_json() for c in self.cols] for r in self.rows],
            })
        return out

    def to_latex(self) -> str:
        lines = []
        for col in self.cols:
            side, lab = col
            c1, c2 = self.columns[col]
            name = label_latex(lab) + ("'" if side == 2 else "")
            parts = []
            for cls, prime in ((c1, ""), (c2, "'")):
                terms = [rf"\left({_latex_q(c)}\right){label_latex(l)}{prime}" for l, c in cls.items()]
                parts.append(" + ".join(terms) if terms else "0")
            lines.append(rf"\Pi({name}) \equiv \left({parts[0]},\ {parts[1]}\right) \bmod q^{{{self.N + 1}}}")
        return " \\\\\n".join(lines)

    def __str__(self):
        out = []
        for col in self.cols:
            c1, c2 = self.columns[col]
            out.append(f"Pi({self._name(col)}) = ({c1}, {c2})")
        return "\n".join(out)


def pi_graded(datum: GluingDatum) -> PeriodExpansion:
    d1, d2 = datum.side1, datum.side2
    cols = {}
    for side, data in ((1, d1), (2, d2)):
        for i in range(data.g):
            s = solve_section(datum, i, side)
            cols[(side, alpha(i))] = (h1_reduce(s.omega1, d1), h1_reduce(s.omega2, d2))
    return PeriodExpansion(datum.N, d1.g, d2.g, cols)


def pi_j_closed(g1: int, g2: int, j: int, i: int, data1=None, data2=None) -> tuple[CohomClass, CohomClass]:
    """Graded piece ``Pi_j(alpha[i], 0)`` from the explicit low-order sections."""
    if not 1 <= j <= g1 + g2 + 1:
        raise SeriesError(f"grade {j} outside 1..{g1 + g2 + 1}")
    if not 0 <= i <= g1 - 1:
        raise SeriesError(f"index {i} outside 0..{g1 - 1}")
    d1 = data1 or GenusData(g1)
    d2 = data2 or GenusData(g2, "'")
    w1 = {}
    m = j - i - g2 - 2
    if m >= 0:
        w1[omega(j - i)] = d2.omega_coeff(m, i + 2)
    w2 = {}
    if j == i + 1:
        w2[omega(i + 2)] = CoeffPoly.const(-1)
    m = j - g1 - 1
    if m >= 0:
        c = -d1.alpha_coeff(m, i)
        if c:
            lab = omega(j + 1)
            w2[lab] = w2.get(lab, CoeffPoly()) + c
    return h1_reduce(DiffCombo(0, w1), d1), h1_reduce(DiffCombo(0, w2), d2)


def elliptic_substitution_pair(datum: GluingDatum, upto: int) -> dict:
    """Map the free symbols of a (1,1) symbolic pair to Weierstrass coefficients."""
    ell = (EllipticData(WpContext("t1")), EllipticData(WpContext("t2")))
    out = {}
    for side, e in zip((datum.side1, datum.side2), ell):
        if side.g != 1:
            raise ValueError("elliptic substitution needs genus one on both sides")
        for m in range(upto + 1):
            for k in range(2, upto + 3):
                out[side.omega_name(m, k)] = e.omega_coeff(m, k)
    return out


# -- genus one x genus one ------------------------------------------------

@dataclass
class ABSeries:
    N: int
    a: dict
    b: dict

    def to_json(self) -> dict:
        return {"N": self.N,
                "a": {str(k): v.to_json() for k, v in sorted(self.a.items())},
                "b": {str(k): v.to_json() for k, v in sorted(self.b.items())}}


def _c(tag: str, index: int) -> CoeffPoly:
    return WpContext(tag).c(index)


def genus1_ab(N: int, tag1: str = "t1", tag2: str = "t2") -> ABSeries:
    """Unique solution of the (a, b) recursion mod q**(N+1), from a2 = 0.

    ``a_{2n}`` is divisible by ``q**(2n)`` and ``b_{2n}`` by ``q**(2n-2)``, so
    only ``n <= N/2`` (resp. ``N/2 + 1``) can be nonzero.
    """
    na = N // 2
    nb = N // 2 + 1
    zero = QTrunc.zero(N)
    a = {2 * n: zero for n in range(1, na + 1)}
    b = {2 * n: zero for n in range(2, nb + 1)}
    for _ in range(N + 2):
        new_a = {2: zero} if 1 <= na else {}
        for n in range(2, na + 1):
            acc = QTrunc.const(N, _c(tag2, 2 * n - 2))
            for m in range(2, nb + 1):
                acc = acc + b[2 * m] * (_c(tag2, 2 * m + 2 * n - 4)
                                        * Fraction(comb(2 * m + 2 * n - 4, 2 * n - 2), 2 * m - 1))
            new_a[2 * n] = acc.shift(2 * n)
        new_b = {}
        for n in range(2, nb + 1):
            acc = zero
            for m in range(2, na + 1):
                acc = acc + a[2 * m] * (_c(tag1, 2 * m + 2 * n - 4)
                                        * Fraction(comb(2 * m + 2 * n - 4, 2 * n - 2), 2 * m - 1))
            new_b[2 * n] = acc.shift(2 * n - 2)
        if new_a == a and new_b == b:
            break
        a, b = new_a, new_b
    return ABSeries(N, a, b)


def genus1_pi(N: int, tag1: str = "t1", tag2: str = "t2") -> tuple[CohomClass, CohomClass]:
    """``Pi(dx1, 0)`` in the bases ``(dx1, omega[-2])`` and ``(dx2, omega'[-2])``."""
    ab = genus1_ab(N, tag1, tag2)
    one = QTrunc.const(N, 1)
    first = one
    for key, v in ab.a.items():
        n = key // 2
        if n >= 2:
            first = first - v * (_c(tag1, 2 * n - 2) * Fraction(1, 2 * n - 1))
    second = QTrunc.zero(N)
    for key, v in ab.b.items():
        n = key // 2
        second = second + v * (_c(tag2, 2 * n - 2) * Fraction(1, 2 * n - 1))
    second = second.shift(1)
    c1 = CohomClass(1, N, {alpha(0): first})
    if ab.a.get(2):
        c1 = c1 + CohomClass(1, N, {omega(2): ab.a[2]})
    c2 = CohomClass(1, N, {omega(2): -QTrunc.q(N), alpha(0): second})
    return c1, c2


def swap_tags(cls: CohomClass, tag1: str = "t1", tag2: str = "t2") -> CohomClass:
    """Exchange the two curves' coefficient namespaces."""
    names = set()
    for c in cls.coeffs.values():
        for x in c.c:
            names |= {s.name for s in x.symbols()}
    mapping = {}
    for name in names:
        if name.endswith("_" + tag1):
            mapping[name] = CoeffPoly.sym(Sym(name[: -len(tag1)] + tag2))
        elif name.endswith("_" + tag2):
            mapping[name] = CoeffPoly.sym(Sym(name[: -len(tag2)] + tag1))
    return cls.subs(mapping)


def genus1_pi_swapped(N: int) -> tuple[CohomClass, CohomClass]:
    """``Pi(0, dx2)``: same formula with the curves exchanged."""
    first, second = genus1_pi(N, "t2", "t1")
    return second, first


__all__ = [
    "GluingDatum", "GlobalSection", "SymbolicSide", "EllipticSide", "PeriodExpansion",
    "ABSeries", "symbolic_pair", "elliptic_pair", "solve_section", "gluing_residual",
    "closed_Phi1", "pi_graded", "pi_j_closed", "elliptic_substitution_pair",
    "genus1_ab", "genus1_pi", "genus1_pi_swapped", "swap_tags", "OMEGA",
]
