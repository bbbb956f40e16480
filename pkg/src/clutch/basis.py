"""Differential bases on a curve of genus g near a non-Weierstrass point.

In a canonical local parameter z the holomorphic differentials are
``alpha[i] = (z**i + z**g sum_m alpha_m[i] z**m) dz`` (i < g, with
``alpha_m[g-1] = 0``) and the differentials with one pole are
``omega[-k] = (z**-k + z**g sum_m omega_m[-k] z**m) dz``.  The expansion
coefficients are free symbols.  From them the residue theorem determines the
functions ``f[-g-n]`` through ``z**g``, and the relation ``d f = 0`` in
cohomology reduces every ``omega[-k]`` to the finite basis.
"""
from __future__ import annotations

from fractions import Fraction

from .combo import ALPHA, CohomClass, DiffCombo, alpha, omega
from .series import CoeffPoly, Laurent, QTrunc, SeriesError, Sym


class GenusData:
    """Free expansion symbols for one curve of genus g.

    ``tag`` is appended to every symbol name so two curves can coexist.
    """

    def __init__(self, g: int, tag: str = ""):
        if g < 1:
            raise ValueError("genus must be >= 1")
        self.g = g
        self.tag = tag

    def alpha_name(self, m: int, i: int) -> str:
        return f"alpha{m}[{i}]{self.tag}"

    def omega_name(self, m: int, k: int) -> str:
        return f"omega{m}[-{k}]{self.tag}"

    def alpha_coeff(self, m: int, i: int) -> CoeffPoly:
        if not 0 <= i < self.g:
            raise SeriesError(f"alpha[{i}] is not defined in genus {self.g}")
        if i == self.g - 1:
            return CoeffPoly()
        return CoeffPoly.sym(Sym(self.alpha_name(m, i)))

    def omega_coeff(self, m: int, k: int) -> CoeffPoly:
        if k < 2:
            raise SeriesError("omega[-k] needs k >= 2")
        return CoeffPoly.sym(Sym(self.omega_name(m, k)))

    def alpha_series(self, i: int, K) -> Laurent:
        terms = {i: CoeffPoly.const(1)}
        for m in range(0, int(K) - self.g + 1):
            c = self.alpha_coeff(m, i)
            if c:
                terms[self.g + m] = terms.get(self.g + m, CoeffPoly()) + c
        return Laurent("z", 0, {e: QTrunc.const(0, c) for e, c in terms.items()}, K)

    def omega_series(self, k: int, K) -> Laurent:
        terms = {-k: CoeffPoly.const(1)}
        for m in range(0, int(K) - self.g + 1):
            terms[self.g + m] = self.omega_coeff(m, k)
        return Laurent("z", 0, {e: QTrunc.const(0, c) for e, c in terms.items()}, K)

    def __repr__(self):
        return f"GenusData(g={self.g}, tag={self.tag!r})"


# -- canonical parameter ----------------------------------------------------

def param_rhs(u: Laurent, g: int) -> Laurent:
    """``(u/z)**(g-1) * u'`` for a parameter ``u = z + c2 z**2 + ...``."""
    return u.shift(-1) ** (g - 1) * u.derive()


def canonical_param(a, g: int, K: int) -> Laurent:
    """The parameter u with ``u**(g-1) u' = z**(g-1) (1 + a_g z + a_{g+1} z**2 + ...)``.

    ``a[j]`` is ``a_{g+j}``.  The coefficient of ``z**(k-1)`` on the left is
    ``(g+k-1) c_k`` plus terms in lower c, so c_k is solved in increasing k.
    """
    if K < 2:
        raise ValueError("need K >= 2")
    coeffs = {1: CoeffPoly.const(1)}
    for k in range(2, K + 1):
        u = Laurent("z", 0, {e: QTrunc.const(0, c) for e, c in coeffs.items()}, k)
        have = param_rhs(u, g).coeff(k - 1).c[0]
        want = CoeffPoly.coerce(a[k - 2]) if k - 2 < len(a) else CoeffPoly()
        ck = (want - have) * Fraction(1, g + k - 1)
        if ck:
            coeffs[k] = ck
    return Laurent("z", 0, {e: QTrunc.const(0, c) for e, c in coeffs.items()}, K)


# -- f[-g-n] via the residue theorem ---------------------------------------

def f_general(g: int, n: int, data=None) -> Laurent:
    """``z**(-g-n) - f[-g-n]`` through ``z**g`` (constant term normalized to 0).

    The ansatz ``f = z**(-g-n) + sum x_e z**e`` with ``-g < e <= g, e != 0`` is
    fixed by requiring ``Res(f * beta) = 0`` for every basis differential beta
    (``alpha[0..g-1]`` and ``omega[-2..-g-1]``); each condition involves a
    single unknown.  The condition for ``alpha[g-1]`` has no unknown and is
    checked instead.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    data = data or GenusData(g)
    K = g + n
    lead = Laurent.mono("z", 0, -g - n)
    x = {}
    for i in range(g):
        beta = data.alpha_series(i, K)
        r = (lead * beta).residue()
        if i == g - 1:
            if r:
                raise SeriesError("residue condition for alpha[g-1] fails")
            continue
        x[-1 - i] = -r  # beta has z**i with coefficient 1
    for j in range(2, g + 2):
        beta = data.omega_series(j, K)
        x[j - 1] = -(lead * beta).residue()
    return -Laurent("z", 0, x, g)


def f_general_display(g: int, n: int, data=None) -> Laurent:
    """The same expansion written out term by term."""
    data = data or GenusData(g)
    terms = {}
    for i in range(0, g - 1):
        terms[-(i + 1)] = data.alpha_coeff(n - 1, i)
    for m in range(1, g + 1):
        terms[m] = data.omega_coeff(n - 1, m + 1)
    return Laurent("z", 0, terms, g)


def f_function(g: int, n: int, data=None) -> Laurent:
    """``f[-g-n]`` itself, known through ``z**g``."""
    return Laurent.mono("z", 0, -g - n) - f_general(g, n, data)


# -- cohomology reduction ------------------------------------------------

def peel(series: Laurent, data, upto: int, N: int = 0) -> DiffCombo:
    """Write ``series dz`` as a combination of basis differentials matching it
    through ``z**upto``; raises if a residue or leftover remains."""
    rest = series
    combo = {}
    g = data.g
    while True:
        live = [e for e, c in rest.terms.items() if e <= upto and c]
        if not live:
            break
        e = min(live)
        c = rest.terms[e]
        if e == -1:
            raise SeriesError("nonzero residue: not a combination of basis differentials")
        if e <= -2:
            lab, s = omega(-e), data.omega_series(-e, upto)
        elif e < g:
            lab, s = alpha(e), data.alpha_series(e, upto)
        else:  # pragma: no cover - upto < g in every caller
            raise SeriesError(f"cannot peel z^{e} at or above z^g")
        combo[lab] = c
        rest = rest - s * c
    return DiffCombo(N, combo)


def h1_general(g: int, n: int, data=None) -> CohomClass:
    """Class of ``omega[-g-n-1]`` from ``d f[-g-n] + (g+n) omega[-g-n-1]``.

    That differential is exact, and on the window through ``z**(g-1)`` it is
    a combination of basis differentials; no nonzero holomorphic differential
    vanishes to order g at a non-Weierstrass point, so the combination is its
    class.  Hence ``omega[-g-n-1] = combination / (g+n)`` in cohomology.
    """
    data = data or GenusData(g)
    lhs = lemma_ii_lhs(g, n, data)
    combo = peel(lhs, data, g - 1)
    return CohomClass(g, 0, (combo * Fraction(1, g + n)).coeffs)


def h1_display(g: int, n: int, data=None) -> CohomClass:
    """The reduction formula term by term (zero-weighted terms dropped)."""
    data = data or GenusData(g)
    out = {}
    for i in range(0, g - 1):
        c = data.alpha_coeff(n - 1, i) * Fraction(i + 1, g + n)
        if c:
            out[omega(i + 2)] = QTrunc.const(0, c)
    for m in range(1, g + 1):
        c = -data.omega_coeff(n - 1, m + 1) * Fraction(m, g + n)
        if c:
            lab = alpha(m - 1)
            out[lab] = out[lab] + QTrunc.const(0, c) if lab in out else QTrunc.const(0, c)
    return CohomClass(g, 0, out)


def h1_reduce(w: DiffCombo, data) -> CohomClass:
    """Reduce any combination to the cohomology basis (linear, idempotent)."""
    g = data.g
    out = CohomClass(g, w.N)
    for (kind, k), c in w.items():
        if kind == ALPHA or k <= g + 1:
            out = out + CohomClass(g, w.N, {(kind, k): c})
            continue
        cls = h1_general(g, k - g - 1, data)
        lifted = {lab: QTrunc.const(w.N, x.c[0]) * c for lab, x in cls.coeffs.items()}
        out = out + CohomClass(g, w.N, lifted)
    return out


def lemma_ii_lhs(g: int, n: int, data) -> Laurent:
    """``d f[-g-n] + (g+n) omega[-g-n-1]`` known through ``z**(g-1)``."""
    f = f_function(g, n, data)
    return (f.derive() + data.omega_series(g + n + 1, g - 1) * (g + n)).truncate(g - 1)


def lemma_ii_rhs(g: int, n: int, data) -> Laurent:
    """``sum (i+1) alpha_{n-1}[i] omega[-i-2] - sum m omega_{n-1}[-m-1] alpha[m-1]``."""
    out = Laurent.zero("z", 0)
    for i in range(0, g - 1):
        out = out + data.omega_series(i + 2, g - 1) * (data.alpha_coeff(n - 1, i) * (i + 1))
    for m in range(1, g + 1):
        out = out - data.alpha_series(m - 1, g - 1) * (data.omega_coeff(n - 1, m + 1) * m)
    return out.truncate(g - 1)


def lemma_ii_window(g: int, n: int, data=None) -> dict:
    """Compare both sides on the window through ``z**(g-1)``."""
    data = data or GenusData(g)
    lhs = lemma_ii_lhs(g, n, data)
    rhs = lemma_ii_rhs(g, n, data)
    residual = (lhs - rhs).truncate(g - 1)
    return {
        "g": g, "n": n, "window": g - 1, "residual": residual,
        "residues": (lhs.residue(), rhs.residue()),
        "ok": not residual.terms and not lhs.residue() and not rhs.residue(),
    }


def elliptic_substitution(data: GenusData, ell, upto: int) -> dict:
    """Map genus-one omega symbols to the coefficients of an elliptic curve."""
    if data.g != 1:
        raise ValueError("elliptic substitution needs genus one")
    return {data.omega_name(m, k): ell.omega_coeff(m, k)
            for m in range(upto + 1) for k in range(2, upto + 3)}

