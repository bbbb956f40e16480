"""Linear combinations of the basis differentials ``alpha[i]`` and ``omega[-k]``.

``alpha[i] = (z**i + O(z**g)) dz`` are the holomorphic differentials and
``omega[-k] = (z**-k + O(z**g)) dz`` the differentials with a single pole of
order k at the marked point.  A :class:`DiffCombo` is a finite combination
with QTrunc coefficients; a :class:`CohomClass` is one supported on the
cohomology basis ``alpha[0..g-1], omega[-2..-g-1]``.
"""
from __future__ import annotations

from .series import QTrunc, SeriesError, CoeffPoly, Laurent

ALPHA = "alpha"
OMEGA = "omega"


def alpha(i: int) -> tuple:
    return (ALPHA, i)


def omega(k: int) -> tuple:
    """Label of the differential with a pole of order k (written omega[-k])."""
    if k < 2:
        raise SeriesError(f"omega[-{k}] is not a basis differential (pole order must be >= 2)")
    return (OMEGA, k)


def label_str(label: tuple) -> str:
    kind, n = label
    return f"alpha[{n}]" if kind == ALPHA else f"omega[-{n}]"


def label_latex(label: tuple) -> str:
    kind, n = label
    return rf"\alpha[{n}]" if kind == ALPHA else rf"\omega[-{n}]"


def parse_label(text: str) -> tuple:
    text = text.strip()
    if text == "dz":
        return alpha(0)
    for kind in (ALPHA, OMEGA):
        if text.startswith(kind + "[") and text.endswith("]"):
            n = int(text[len(kind) + 1:-1])
            return alpha(n) if kind == ALPHA else omega(-n)
    raise SeriesError(f"unknown basis label {text!r}")


def _label_key(label):
    kind, n = label
    return (0, n) if kind == ALPHA else (1, n)


class DiffCombo:
    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs=None):
        self.N = N
        clean = {}
        for lab, c in (coeffs or {}).items():
            if lab[0] not in (ALPHA, OMEGA):
                raise SeriesError(f"unknown basis label {lab!r}")
            if lab[0] == OMEGA and lab[1] < 2:
                raise SeriesError(f"omega[-{lab[1]}] has a residue and is not allowed")
            c = c if isinstance(c, QTrunc) else QTrunc.const(N, c)
            if c.N != N:
                raise SeriesError("q-order mismatch")
            if c:
                clean[lab] = clean[lab] + c if lab in clean else c
        self.coeffs = {k: v for k, v in clean.items() if v}

    @classmethod
    def single(cls, label, N: int = 0, coeff=1):
        return cls(N, {label: coeff})

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: _label_key(kv[0]))

    def __add__(self, other):
        out = dict(self.coeffs)
        for lab, c in other.coeffs.items():
            out[lab] = out[lab] + c if lab in out else c
        return type(self)._like(self, out)

    def __neg__(self):
        return type(self)._like(self, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, DiffCombo):
            return NotImplemented
        return type(self)._like(self, {k: v * scalar for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    @classmethod
    def _like(cls, proto, coeffs):
        return cls(proto.N, coeffs)

    def coeff(self, label) -> QTrunc:
        return self.coeffs.get(label, QTrunc.zero(self.N))

    def map_coeffs(self, f):
        return type(self)._like(self, {k: f(v) for k, v in self.coeffs.items()})

    def subs(self, mapping):
        return self.map_coeffs(lambda c: c.subs(mapping))

    def __eq__(self, other):
        return isinstance(other, DiffCombo) and self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, tuple(self.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def expand(self, data, K) -> Laurent:
        """z-expansion (coefficient of dz) using the basis series of ``data``."""
        out = Laurent.zero("z", self.N)
        for lab, c in self.items():
            kind, n = lab
            s = data.alpha_series(n, K) if kind == ALPHA else data.omega_series(n, K)
            if s.N != self.N:
                s = Laurent("z", self.N, {e: QTrunc.const(self.N, x.c[0]) for e, x in s.terms.items()},
                            s.known[0])
            out = out + s * c
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for lab, c in self.items():
            parts.append(f"({c})*{label_str(lab)}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> list:
        return [{"basis": label_str(lab), "coeff": c.to_json()} for lab, c in self.items()]

    def to_latex(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for lab, c in self.items():
            parts.append(rf"\left({_latex_q(c)}\right){label_latex(lab)}")
        return " + ".join(parts)


class CohomClass(DiffCombo):
    """Class in the cohomology basis ``alpha[0..g-1], omega[-2..-g-1]``."""

    __slots__ = ("g",)

    def __init__(self, g: int, N: int, coeffs=None):
        super().__init__(N, coeffs)
        self.g = g
        for kind, n in self.coeffs:
            if (kind == ALPHA and not 0 <= n <= g - 1) or (kind == OMEGA and not 2 <= n <= g + 1):
                raise SeriesError(f"{label_str((kind, n))} is outside the genus-{g} cohomology basis")

    @classmethod
    def _like(cls, proto, coeffs):
        return cls(proto.g, proto.N, coeffs)

    @classmethod
    def basis_labels(cls, g: int):
        return [alpha(i) for i in range(g)] + [omega(k) for k in range(2, g + 2)]

    def __eq__(self, other):
        return isinstance(other, DiffCombo) and self.N == other.N and self.coeffs == other.coeffs

    __hash__ = DiffCombo.__hash__


def _latex_poly(p: CoeffPoly) -> str:
    return str(p).replace("*", " ")


def _latex_q(c: QTrunc) -> str:
    parts = []
    for k, x in enumerate(c.c):
        if not x:
            continue
        body = _latex_poly(x)
        if k == 0:
            parts.append(body)
        else:
            qk = "q" if k == 1 else f"q^{{{k}}}"
            if body in ("1", "-1"):
                parts.append(qk if body == "1" else "-" + qk)
            else:
                parts.append(rf"\left({body}\right){qk}")
    return _join_signed(parts) if parts else "0"


def _join_signed(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _is_compound(text: str) -> bool:
    return " + " in text or " - " in text[1:]


def laurent_latex(L: Laurent, var: str = "z") -> str:
    """LaTeX for a series with constant (q-free) or QTrunc coefficients."""
    parts = []
    for e in sorted(L.terms):
        c = _latex_q(L.terms[e])
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{{{e}}}")
        if not mono:
            parts.append(c)
        elif c == "1":
            parts.append(mono)
        elif c == "-1":
            parts.append("-" + mono)
        elif _is_compound(c):
            parts.append(rf"\left({c}\right){mono}")
        else:
            parts.append(f"{c}{mono}")
    body = _join_signed(parts) if parts else "0"
    if L.K != float("inf"):
        body += rf" + O\left({var}^{{{int(L.K) + 1}}}\right)"
    return body
