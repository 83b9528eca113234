"""Exact phases and phasor sums.

A :class:`PhaseExpr` is the exponent ``a*φ + Σ c_v*v + r*π`` with rational
``a`` and ``r`` and integer variable coefficients. A :class:`PhasorSum` is a
finite sum ``sqrt(radical) * Σ w * exp(i*expr)`` with rational weights.

Fourth-root-of-unity factors (from Pauli ``i`` powers) live in the constant
angle as quarter turns, so weights stay rational. Canonical sums keep the
constant angle in ``[0, 1)``: a half turn is absorbed into the weight sign.
"""

from __future__ import annotations

import cmath
import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

PHI = "φ"
PI = "π"

Assignment = Mapping[int, int]


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _fmt_coeff(c: Fraction, symbol: str) -> str:
    """Render ``c * symbol`` as ``φ``, ``-3φ``, ``3φ/2``, ``-π/2``."""
    num, den = abs(c.numerator), c.denominator
    body = (symbol if num == 1 else f"{num}{symbol}") + (f"/{den}" if den != 1 else "")
    return ("-" if c < 0 else "") + body


@dataclass(frozen=True, order=True)
class PhaseExpr:
    phi: Fraction = Fraction(0)
    var_terms: tuple[tuple[int, int], ...] = ()
    const: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "phi", _frac(self.phi))
        c = _frac(self.const) % 2
        object.__setattr__(self, "const", c)
        merged: dict[int, int] = defaultdict(int)
        for v, k in self.var_terms:
            if int(k) != k:
                raise ValueError("variable coefficients must be integers")
            merged[int(v)] += int(k)
        object.__setattr__(
            self, "var_terms", tuple(sorted((v, k) for v, k in merged.items() if k))
        )

    @classmethod
    def of_phi(cls, k) -> PhaseExpr:
        return cls(phi=_frac(k))

    @classmethod
    def var(cls, var_id: int, coeff: int = 1) -> PhaseExpr:
        return cls(var_terms=((var_id, coeff),))

    @classmethod
    def pi(cls, r) -> PhaseExpr:
        return cls(const=_frac(r))

    @property
    def free_vars(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.var_terms)

    @property
    def is_zero(self) -> bool:
        return not self.phi and not self.var_terms and not self.const

    @property
    def is_ground(self) -> bool:
        return not self.var_terms

    def __add__(self, other: PhaseExpr) -> PhaseExpr:
        return PhaseExpr(
            self.phi + other.phi, self.var_terms + other.var_terms, self.const + other.const
        )

    def __neg__(self) -> PhaseExpr:
        return PhaseExpr(-self.phi, tuple((v, -k) for v, k in self.var_terms), -self.const)

    def __sub__(self, other: PhaseExpr) -> PhaseExpr:
        return self + (-other)

    def __mul__(self, k: int) -> PhaseExpr:
        if int(k) != k:
            raise ValueError("PhaseExpr can only be scaled by integers")
        k = int(k)
        return PhaseExpr(self.phi * k, tuple((v, c * k) for v, c in self.var_terms), self.const * k)

    __rmul__ = __mul__

    def substitute(self, assignment: Assignment) -> PhaseExpr:
        """Replace every variable ``v`` by ``assignment[v] * φ``."""
        phi = self.phi
        for v, k in self.var_terms:
            if v not in assignment:
                raise KeyError(f"no value for variable v{v}")
            phi += k * assignment[v]
        return PhaseExpr(phi, (), self.const)

    def substitute_partial(self, assignment: Assignment) -> PhaseExpr:
        phi, rest = self.phi, []
        for v, k in self.var_terms:
            if v in assignment:
                phi += k * assignment[v]
            else:
                rest.append((v, k))
        return PhaseExpr(phi, tuple(rest), self.const)

    def evaluate(self, phi: float, values: Mapping[int, float] | None = None) -> float:
        """Numeric angle in radians; variables take ``values[v] * φ``."""
        angle = float(self.phi) * phi + float(self.const) * math.pi
        for v, k in self.var_terms:
            if values is None or v not in values:
                raise KeyError(f"no value for variable v{v}")
            angle += k * values[v] * phi
        return angle

    def __str__(self) -> str:
        parts = []
        if self.phi:
            parts.append(_fmt_coeff(self.phi, PHI))
        for v, k in self.var_terms:
            parts.append(_fmt_coeff(Fraction(k), f"v{v}"))
        if self.const:
            parts.append(_fmt_coeff(self.const, PI))
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    @classmethod
    def parse(cls, text: str) -> PhaseExpr:
        return parse_phase(text)


_TERM_RE = re.compile(
    r"^(?P<num>\d+)?\s*\*?\s*(?P<sym>φ|phi|π|pi|v\d+)?\s*(?:/\s*(?P<den>\d+))?$"
)


def parse_phase(text: str) -> PhaseExpr:
    """Parse the rendering produced by ``str(PhaseExpr)``.

    Accepts ``phi``/``pi`` as ASCII spellings, e.g. ``-3φ + π/2`` or ``phi - v17``.
    """
    src = text.strip()
    if not src:
        raise ValueError("empty phase expression")
    tokens = re.findall(r"[+-]|[^+-]+", src.replace(" ", ""))
    expr = PhaseExpr()
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in "+-":
            if tok == "-":
                sign = -sign
            expect_term = True
            continue
        if not expect_term:
            raise ValueError(f"malformed phase expression: {text!r}")
        m = _TERM_RE.match(tok)
        if not m or (m.group("num") is None and m.group("sym") is None):
            raise ValueError(f"bad term {tok!r} in {text!r}")
        num = int(m.group("num")) if m.group("num") is not None else 1
        den = int(m.group("den")) if m.group("den") is not None else 1
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        coeff = Fraction(sign * num, den)
        sym = m.group("sym")
        if sym is None:
            if coeff != 0:
                raise ValueError(f"bare constant {tok!r} has no unit (use φ or π)")
        elif sym in ("φ", "phi"):
            expr = expr + PhaseExpr.of_phi(coeff)
        elif sym in ("π", "pi"):
            expr = expr + PhaseExpr.pi(coeff)
        else:
            if coeff.denominator != 1:
                raise ValueError(f"variable coefficient must be an integer: {tok!r}")
            expr = expr + PhaseExpr.var(int(sym[1:]), int(coeff))
        sign = 1
        expect_term = False
    if expect_term:
        raise ValueError(f"dangling operator in {text!r}")
    return expr


def _canonical_term(weight: Fraction, expr: PhaseExpr) -> tuple[Fraction, PhaseExpr]:
    if expr.const >= 1:
        return -weight, PhaseExpr(expr.phi, expr.var_terms, expr.const - 1)
    return weight, expr


@dataclass(frozen=True)
class PhasorSum:
    """``sqrt(radical) * Σ weight * exp(i*exponent)``, kept in canonical form."""

    terms: tuple[tuple[Fraction, PhaseExpr], ...] = ()
    radical: Fraction = field(default=Fraction(1))

    def __post_init__(self):
        acc: dict[PhaseExpr, Fraction] = defaultdict(Fraction)
        for w, e in self.terms:
            w, e = _canonical_term(_frac(w), e)
            acc[e] += w
        terms = tuple(sorted(((w, e) for e, w in acc.items() if w), key=lambda t: t[1]))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "radical", _frac(self.radical))
        if self.radical <= 0:
            raise ValueError("radical must be positive")

    @classmethod
    def of(cls, *terms: tuple, radical=1) -> PhasorSum:
        return cls(tuple((_frac(w), e) for w, e in terms), _frac(radical))

    @property
    def free_vars(self) -> frozenset[int]:
        out: set[int] = set()
        for _, e in self.terms:
            out |= e.free_vars
        return frozenset(out)

    @property
    def is_ground(self) -> bool:
        return all(e.is_ground for _, e in self.terms)

    def _same_radical(self, other: PhasorSum) -> None:
        if self.radical != other.radical:
            raise ValueError("cannot combine phasor sums with different radicals")

    def __add__(self, other: PhasorSum) -> PhasorSum:
        self._same_radical(other)
        return PhasorSum(self.terms + other.terms, self.radical)

    def __neg__(self) -> PhasorSum:
        return PhasorSum(tuple((-w, e) for w, e in self.terms), self.radical)

    def __sub__(self, other: PhasorSum) -> PhasorSum:
        return self + (-other)

    def conjugate(self) -> PhasorSum:
        return PhasorSum(tuple((w, -e) for w, e in self.terms), self.radical)

    def substitute(self, assignment: Assignment) -> PhasorSum:
        return PhasorSum(tuple((w, e.substitute(assignment)) for w, e in self.terms), self.radical)

    def substitute_partial(self, assignment: Assignment) -> PhasorSum:
        return PhasorSum(
            tuple((w, e.substitute_partial(assignment)) for w, e in self.terms), self.radical
        )

    def evaluate(self, phi: float, values: Mapping[int, float] | None = None) -> complex:
        total = sum(
            (float(w) * cmath.exp(1j * e.evaluate(phi, values)) for w, e in self.terms), 0j
        )
        return math.sqrt(self.radical) * total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, e in self.terms:
            mag = abs(w)
            coeff = "" if mag == 1 else f"{mag}·"
            body = "1" if e.is_zero else f"e^{{i({e})}}"
            if coeff and body == "1":
                body, coeff = str(mag), ""
            parts.append(("-" if w < 0 else "+", coeff + body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, p in parts[1:]:
            out += f" {s} {p}"
        if self.radical != 1:
            out = f"√({self.radical})·({out})"
        return out


def is_identically_zero(s: PhasorSum) -> bool:
    """Whether ``s`` vanishes for every φ.

    Distinct φ-frequencies are linearly independent functions, so each
    frequency group must vanish on its own. Within a group the canonical form
    already separates ``1`` and ``i``; other constant angles are roots of unity
    and are decided by reduction modulo a cyclotomic polynomial.
    """
    if not s.is_ground:
        raise ValueError(f"variables remain in exponents: {sorted(s.free_vars)}")
    if not s.terms:
        return True
    groups: dict[Fraction, list[tuple[Fraction, Fraction]]] = defaultdict(list)
    for w, e in s.terms:
        groups[e.phi].append((w, e.const))
    for group in groups.values():
        if all(c in (0, Fraction(1, 2)) for _, c in group):
            return False  # canonical merge already cancelled what can cancel
        if not _roots_of_unity_sum_is_zero(group):
            return False
    return True


def _roots_of_unity_sum_is_zero(group: list[tuple[Fraction, Fraction]]) -> bool:
    from sympy import Poly, QQ, cyclotomic_poly, symbols

    x = symbols("x")
    order = 2
    for _, c in group:
        order = math.lcm(order, c.denominator)
    # exp(iπ c) = ζ**(c*order), ζ = exp(iπ/order) is a primitive (2*order)-th root
    coeffs: dict[tuple[int], Fraction] = defaultdict(Fraction)
    for w, c in group:
        coeffs[(int(c * order),)] += w
    poly = Poly({k: QQ(v.numerator, v.denominator) for k, v in coeffs.items()}, x, domain=QQ)
    return poly.rem(Poly(cyclotomic_poly(2 * order, x), x, domain=QQ)).is_zero


def phasor_equal(a: PhasorSum, b: PhasorSum) -> bool:
    return is_identically_zero(a - b)


def substitute(expr: PhaseExpr, assignment: Assignment) -> PhaseExpr:
    return expr.substitute(assignment)
