"""Genus-one differentials from the Weierstrass function.

With ``wp(z) = z**-2 + sum_{k>=1} c_{2k} z**(2k)`` the functions

    f[-n] = z**-n + (-1)**n sum_{m>=1} C(m+n-2, m) c_{m+n-2}/(n-1) z**m

are the rescaled derivatives of wp with zero constant term, and
``omega[-n] = f[-n] dz``.  The coefficients are free symbols per curve (tag),
optionally closed up in terms of ``c2, c4`` using the differential equation
``wp'^2 = 4 wp^3 - 20 c2 wp - 28 c4``.  Numeric values come from Eisenstein
series.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
import re

import mpmath

from .combo import ALPHA, CohomClass, DiffCombo, alpha, laurent_latex, omega
from .series import CoeffPoly, Laurent, SeriesError, Sym, WindowError

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class WpContext:
    """Coefficients ``c_{2k}`` of one Weierstrass function.

    ``tag`` distinguishes curves (its symbols are ``c2_<tag>``, ``c4_<tag>``
    ...).  ``order`` bounds the z-exponent that may be requested.  With
    ``closed`` the coefficients from c6 on are polynomials in c2, c4.
    """

    tag: str = "t1"
    order: int = 40
    closed: bool = False
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def sym(self, index: int) -> CoeffPoly:
        return CoeffPoly.sym(Sym(f"c{index}_{self.tag}"))

    def c(self, index: int) -> CoeffPoly:
        """c_index; zero for odd or non-positive index."""
        if index <= 0 or index % 2:
            return CoeffPoly()
        if self.closed and index >= 6:
            table = self._cache.get("closure")
            if table is None or max(table) < index:
                table = c_closure(max(index + 4, 2 * self.order), self.tag)
                self._cache["closure"] = table
            return table[index]
        return self.sym(index)

    def symbols(self, upto: int) -> list[str]:
        top = 4 if self.closed else upto
        return [f"c{i}_{self.tag}" for i in range(2, top + 1, 2)]


def _check_order(ctx: WpContext, K):
    if K > ctx.order:
        raise WindowError(f"requested z^{K} beyond the context order {ctx.order}")


def wp_series(ctx: WpContext, K: int) -> Laurent:
    """``z**-2 + c2 z**2 + c4 z**4 + ...`` through z**K."""
    _check_order(ctx, K)
    terms = {-2: 1}
    for e in range(2, K + 1, 2):
        terms[e] = ctx.c(e)
    return Laurent("z", 0, terms, K)


def c_closure(K: int, tag: str = "t1") -> dict[int, CoeffPoly]:
    """``{2k: c_{2k}}`` as polynomials in ``c2, c4`` for 2k <= K.

    The coefficient of ``z**(2k-4)`` in ``wp'^2 - 4 wp^3 + 20 c2 wp + 28 c4``
    is ``-(8k+12) c_{2k}`` plus terms in lower coefficients, so the table is
    filled in increasing k.
    """
    c2 = CoeffPoly.sym(Sym(f"c2_{tag}"))
    c4 = CoeffPoly.sym(Sym(f"c4_{tag}"))
    table = {2: c2, 4: c4}
    k = 3
    while 2 * k <= K:
        terms = {-2: 1}
        terms.update({e: v for e, v in table.items()})
        wp = Laurent("z", 0, terms, 2 * k)
        res = _ode_residual(wp, c2, c4).coeff(2 * k - 4)
        table[2 * k] = res.c[0] * Fraction(1, 8 * k + 12)
        k += 1
    return table


def _ode_residual(wp: Laurent, c2: CoeffPoly, c4: CoeffPoly) -> Laurent:
    d = wp.derive()
    return d * d - wp * wp * wp * 4 + wp * (c2 * 20) + Laurent("z", 0, {0: c4 * 28})


def ode_residual(ctx: WpContext, K: int) -> Laurent:
    """The differential-equation residual, known through z**(K-4)."""
    wp = wp_series(ctx, K)
    return _ode_residual(wp, ctx.c(2), ctx.c(4))


class EllDiff:
    """``f[-n] dz`` (or ``dz`` when n == 0) with its z-expansion."""

    __slots__ = ("n", "series", "ctx")

    def __init__(self, n: int, series: Laurent, ctx: WpContext):
        self.n = n
        self.series = series
        self.ctx = ctx

    def __str__(self):
        return f"f[-{self.n}] = {self.series}" if self.n else "dz"

    __repr__ = __str__


def f_series(n: int, ctx: WpContext, K: int) -> EllDiff:
    if n < 2:
        raise SeriesError("f[-n] needs n >= 2")
    _check_order(ctx, K)
    sign = -1 if n % 2 else 1
    terms = {-n: 1}
    for m in range(1, K + 1):
        c = ctx.c(m + n - 2)
        if c:
            terms[m] = c * Fraction(sign * comb(m + n - 2, m), n - 1)
    return EllDiff(n, Laurent("z", 0, terms, K), ctx)


def f_closed_form(n: int, ctx: WpContext, K: int) -> Laurent:
    """``(-1)**n wp^(n-2)/(n-1)! - c_{n-2}/(n-1)`` by repeated differentiation."""
    s = wp_series(ctx, K + n - 2)
    fact = 1
    for j in range(n - 2):
        s = s.derive()
        fact *= j + 1
    fact *= n - 1
    s = s * Fraction((-1) ** n, fact)
    return s - Laurent("z", 0, {0: ctx.c(n - 2) * Fraction(1, n - 1)})


# -- the data interface used by the cohomology and period code -------------

class EllipticData:
    """Genus-one basis: ``alpha[0] = dz`` and ``omega[-k] = f[-k] dz``."""

    g = 1

    def __init__(self, ctx: WpContext):
        self.ctx = ctx

    def alpha_coeff(self, m: int, i: int) -> CoeffPoly:
        if i != 0:
            raise SeriesError("genus one has only alpha[0]")
        return CoeffPoly()

    def omega_coeff(self, m: int, k: int) -> CoeffPoly:
        """Coefficient of z**(1+m) in f[-k]."""
        sign = -1 if k % 2 else 1
        mm = 1 + m
        c = self.ctx.c(mm + k - 2)
        return c * Fraction(sign * comb(mm + k - 2, mm), k - 1) if c else CoeffPoly()

    def alpha_series(self, i: int, K) -> Laurent:
        if i != 0:
            raise SeriesError("genus one has only alpha[0]")
        return Laurent.one("z", 0)

    def omega_series(self, k: int, K) -> Laurent:
        return f_series(k, self.ctx, K).series

    def symbols(self, upto: int) -> list[str]:
        return self.ctx.symbols(upto)


def h1_reduce_ell(w: DiffCombo, ctx: WpContext) -> CohomClass:
    """Class in the basis ``dz = alpha[0]``, ``omega[-2]``."""
    out = {}
    for (kind, n), c in w.items():
        if kind == ALPHA:
            if n != 0:
                raise SeriesError(f"alpha[{n}] is not a genus-one label")
            lab, coef = alpha(0), c
        elif n == 2:
            lab, coef = omega(2), c
        else:
            lab, coef = alpha(0), c * (-ctx.c(n - 2) * Fraction(1, n - 1))
        out[lab] = out[lab] + coef if lab in out else coef
    return CohomClass(1, w.N, out)


def lemma_ii_ell(n: int, K: int, ctx: WpContext | None = None) -> dict:
    """Check ``d f[-1-n] + (1+n) omega[-n-2] + c_n dz = 0`` through z**K."""
    ctx = ctx or WpContext(order=max(K + n + 4, 40))
    lhs = f_series(n + 1, ctx, K + 1).series.derive()
    lhs = lhs + f_series(n + 2, ctx, K).series * (n + 1)
    lhs = lhs + Laurent("z", 0, {0: EllipticData(ctx).omega_coeff(n - 1, 2)})
    lhs = lhs.truncate(K)
    return {"n": n, "K": K, "residual": lhs, "ok": not lhs.terms}


# -- numeric values ------------------------------------------------------

def eisenstein_G(weight: int, tau: complex, tol: float = TAIL_TOL) -> complex:
    """``G_w(tau) = sum' (m + n tau)**-w`` for even w >= 4 via its q-expansion.

    The divisor sum is cut once the next term bound ``zeta(w-1) n**(w-1) |q|**n``
    times the prefactor falls below ``tol/2`` and consecutive terms shrink by
    at least a factor 2, so the discarded tail is below tol.
    """
    if weight < 4 or weight % 2:
        raise ValueError("weight must be even and >= 4")
    tau = mpmath.mpc(tau)
    if tau.imag <= 0:
        raise ValueError("Eisenstein series need Im(tau) > 0")
    with mpmath.workdps(30):
        qn = mpmath.exp(2j * mpmath.pi * tau)
        aq = abs(qn)
        pref = 2 * (2j * mpmath.pi) ** weight / mpmath.factorial(weight - 1)
        zbound = mpmath.zeta(weight - 1)
        s = mpmath.mpc(0)
        n = 1
        power = qn
        while True:
            sigma = sum(mpmath.mpf(d) ** (weight - 1) for d in range(1, n + 1) if n % d == 0)
            s += sigma * power
            n += 1
            power *= qn
            bound = abs(pref) * zbound * mpmath.mpf(n) ** (weight - 1) * aq ** n
            ratio = (mpmath.mpf(n + 1) / n) ** (weight - 1) * aq
            if bound < tol / 2 and ratio < 0.5:
                break
            if n > 100000:  # pragma: no cover
                raise ValueError("Eisenstein series did not converge")
        val = 2 * mpmath.zeta(weight) + pref * s
        return complex(val)


def numeric_c(tau: complex, index: int) -> complex:
    """``c_{2k} = (2k+1) G_{2k+2}(tau)``."""
    if index <= 0 or index % 2:
        return 0j
    if complex(tau).imag <= 0:
        raise ValueError("need Im(tau) > 0")
    return (index + 1) * eisenstein_G(index + 2, tau)


def numeric_values(ctx: WpContext, tau: complex, upto: int) -> dict[str, complex]:
    """Values for the free symbols of ``ctx`` at tau."""
    top = 4 if ctx.closed else upto
    return {f"c{i}_{ctx.tag}": numeric_c(tau, i) for i in range(2, top + 1, 2)}


def evaluate(p: CoeffPoly, values: dict[str, complex]) -> complex:
    total = 0j
    for m, c in p.terms.items():
        term = complex(c)
        for s, e in m:
            if s.name not in values:
                raise SeriesError(f"no numeric value for {s.name}")
            term *= values[s.name] ** e
        total += term
    return total


# -- LaTeX -----------------------------------------------------------------

def _latex_symbols(text: str, tag: str) -> str:
    return re.sub(rf"c(\d+)_{tag}", lambda m: f"c_{{{m.group(1)}}}", text)


def wp_latex(ctx: WpContext, K: int) -> str:
    return r"\wp(z) = " + _latex_symbols(laurent_latex(wp_series(ctx, K)), ctx.tag)


def f_latex(n: int, ctx: WpContext, K: int) -> str:
    return f"f[-{n}] = " + _latex_symbols(laurent_latex(f_series(n, ctx, K).series), ctx.tag)

