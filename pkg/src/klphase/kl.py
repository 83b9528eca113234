"""Knill-Laflamme sandwiches around a diagonal logical phase gate.

Every operator in a sandwich maps a basis state to a single basis state, so a
matrix element ``<W_s| ... |W_t>`` is a short exact phasor sum: one term per
support state of ``|W_t>`` that lands inside the support of ``|W_s>``.
"""

from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .codes import Code
from .pauli import PauliOp
from .phase import PhaseExpr, PhasorSum, is_identically_zero, phasor_equal
from .template import DiagonalTemplate


class Family(enum.Enum):
    """Operator order of each extended condition, written left to right."""

    EQ16 = ("Pd", "Kl*", "Kk", "P")
    EQ17 = ("Kl*", "Pd", "Kk", "P")
    EQ18 = ("Pd", "Kl*", "P", "Kk")
    EQ19 = ("Kl*", "Pd", "P", "Kk")

    @property
    def coefficient(self) -> str:
        return {"EQ16": "alpha", "EQ17": "beta", "EQ18": "beta", "EQ19": "gamma"}[self.name]

    def describe(self) -> str:
        names = {"Pd": "P†", "Kl*": "Kl†", "Kk": "Kk", "P": "P"}
        return " ".join(names[t] for t in self.value)


BASE_ORDER = ("Kl*", "Kk")


@dataclass(frozen=True)
class SandwichSpec:
    family: Family
    left_error: PauliOp
    right_error: PauliOp
    sigma: int
    sigma_prime: int


def _amplitude(code: Code, sigma: int, sigma_prime: int) -> tuple[Fraction, Fraction]:
    """Split ``1/sqrt(|S_s| |S_t|)`` into a rational factor and a leftover radical."""
    prod = len(code.word(sigma)) * len(code.word(sigma_prime))
    root = isqrt(prod)
    if root * root == prod:
        return Fraction(1, root), Fraction(1)
    return Fraction(1), Fraction(1, prod)


def evaluate_word(
    order: Sequence[str],
    left: PauliOp,
    right: PauliOp,
    entries: Sequence[PhaseExpr] | None,
    code: Code,
    sigma: int,
    sigma_prime: int,
) -> PhasorSum:
    """Exact ``<W_sigma| order |W_sigma_prime>`` for a left-to-right operator word."""
    n = code.n
    if left.n != n or right.n != n or (entries is not None and len(entries) != 1 << n):
        raise ValueError("dimension mismatch between errors, diagonal and code")
    ops = {"Kl*": left.adjoint(), "Kk": right}
    bra = code.word(sigma).sign_map()
    scale, radical = _amplitude(code, sigma, sigma_prime)
    terms = []
    for b, sign in code.word(sigma_prime).support:
        phase = PhaseExpr()
        quarter = 0
        for tok in reversed(order):
            if tok == "P":
                phase = phase + entries[b]
            elif tok == "Pd":
                phase = phase - entries[b]
            else:
                k, b = ops[tok].apply(b)
                quarter += k
        if b in bra:
            w = scale * sign * bra[b]
            terms.append((w, phase + PhaseExpr.pi(Fraction(quarter, 2))))
    return PhasorSum(tuple(terms), radical)


def sandwich_element(spec: SandwichSpec, template: DiagonalTemplate, code: Code) -> PhasorSum:
    if template.n != code.n:
        raise ValueError(f"template on {template.n} qubits, code on {code.n}")
    return evaluate_word(
        spec.family.value,
        spec.left_error,
        spec.right_error,
        template.entries,
        code,
        spec.sigma,
        spec.sigma_prime,
    )


# error sets ----------------------------------------------------------------

_ATOM_RE = re.compile(r"^([XYZ])(\d+|\*)$")


def error_set(spec: str, n: int) -> list[PauliOp]:
    """Parse ``"X3"``, ``"X*,Z0"``, ``"all-single"``; identity is always included."""
    ops = [PauliOp.identity(n)]
    atoms = [a.strip() for a in spec.split(",")]
    if not spec.strip() or any(not a for a in atoms):
        raise ValueError(f"empty atom in error spec {spec!r}")
    for atom in atoms:
        if atom == "I":
            continue
        if atom == "all-single":
            ops += [PauliOp.single(L, q, n) for q in range(n) for L in "XYZ"]
            continue
        m = _ATOM_RE.match(atom)
        if not m:
            raise ValueError(f"bad error atom {atom!r} (expected I, X3, Y*, all-single)")
        letter, where = m.groups()
        if where == "*":
            ops += [PauliOp.single(letter, q, n) for q in range(n)]
        else:
            q = int(where)
            if q >= n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            ops.append(PauliOp.single(letter, q, n))
    seen, out = set(), []
    for op in ops:
        if op not in seen:
            seen.add(op)
            out.append(op)
    return out


# constraints ---------------------------------------------------------------


class Kind(enum.Enum):
    OFF_DIAGONAL_ZERO = "OffDiagonalZero"
    DIAGONAL_EQUAL = "DiagonalEqual"


@dataclass(frozen=True)
class Constraint:
    kind: Kind
    family: Family
    left: PauliOp
    right: PauliOp
    lhs: PhasorSum
    rhs: PhasorSum | None = None
    notes: tuple[str, ...] = ()
    aliases: tuple[str, ...] = field(default=(), compare=False)

    @property
    def ident(self) -> str:
        tag = "offdiag" if self.kind is Kind.OFF_DIAGONAL_ZERO else "diag"
        return f"{self.family.name}:{tag}:{self.left.label()},{self.right.label()}"

    @property
    def residual(self) -> PhasorSum:
        """The sum that must vanish identically."""
        return self.lhs if self.rhs is None else self.lhs - self.rhs

    @property
    def vars(self) -> frozenset[int]:
        return self.residual.free_vars

    def satisfied_by(self, assignment) -> bool:
        if self.rhs is None:
            return is_identically_zero(self.lhs.substitute(assignment))
        return phasor_equal(self.lhs.substitute(assignment), self.rhs.substitute(assignment))

    def render(self) -> str:
        if self.kind is Kind.OFF_DIAGONAL_ZERO:
            body = f"<W0|{self.family.describe()}|W1> = {self.lhs}  must vanish"
        else:
            body = f"<W0|{self.family.describe()}|W0> = {self.lhs}  ==  <W1|...|W1> = {self.rhs}"
        return f"[{self.ident}] {body}".replace("Kl†", f"({self.left.label()})†").replace(
            "Kk", self.right.label()
        )

    def to_json(self) -> dict:
        return {
            "id": self.ident,
            "family": self.family.name,
            "kind": self.kind.value,
            "errors": [self.left.label(), self.right.label()],
            "lhs": str(self.lhs),
            "rhs": None if self.rhs is None else str(self.rhs),
            "vars": sorted(self.vars),
            "notes": list(self.notes),
            "aliases": list(self.aliases),
        }


def canonical_key(c: Constraint) -> str:
    """Dedup key: vanishing sum up to sign and complex conjugation."""
    r = c.residual
    forms = [r, -r, r.conjugate(), -r.conjugate()]
    return min(repr(f.terms) + repr(f.radical) for f in forms)


@dataclass
class ConditionSet:
    constraints: list[Constraint]
    generated: int
    duplicates: int

    @property
    def nontrivial(self) -> list[Constraint]:
        return [c for c in self.constraints if c.vars or not is_identically_zero(c.residual)]

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)


def build_conditions(
    code: Code, template: DiagonalTemplate, errors: Sequence[PauliOp]
) -> ConditionSet:
    """All four families over every ordered error pair, deduplicated.

    Output order is by family, then error pair in the order of ``errors``;
    a dropped duplicate is recorded as an alias of the constraint it matched.
    """
    if not errors:
        raise ValueError("error set is empty")
    kept: list[Constraint] = []
    by_key: dict[str, int] = {}
    aliases: dict[int, list[str]] = defaultdict(list)
    generated = 0
    for family in Family:
        notes = ("reduces to base KL",) if family is Family.EQ19 else ()
        for left in errors:
            for right in errors:
                def elem(s, t):
                    return sandwich_element(SandwichSpec(family, left, right, s, t), template, code)

                candidates = [
                    Constraint(Kind.OFF_DIAGONAL_ZERO, family, left, right, elem(0, 1), None, notes),
                    Constraint(Kind.DIAGONAL_EQUAL, family, left, right, elem(0, 0), elem(1, 1), notes),
                ]
                for c in candidates:
                    generated += 1
                    key = canonical_key(c)
                    if key in by_key:
                        aliases[by_key[key]].append(c.ident)
                        continue
                    by_key[key] = len(kept)
                    kept.append(c)
    for i, names in aliases.items():
        c = kept[i]
        kept[i] = Constraint(c.kind, c.family, c.left, c.right, c.lhs, c.rhs, c.notes, tuple(names))
    return ConditionSet(kept, generated, generated - len(kept))


# base conditions -------------------------------------------------------------


@dataclass
class KLTable:
    errors: list[PauliOp]
    values: dict[tuple[int, int, int, int], PhasorSum]
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures

    def value(self, l: int, k: int, sigma: int, sigma_prime: int) -> complex:
        return self.values[(l, k, sigma, sigma_prime)].evaluate(0.0)


def base_kl_check(code: Code, errors: Sequence[PauliOp]) -> KLTable:
    """Exact ``<W_s|K_l† K_k|W_t>`` for every pair, with the plain KL verdict."""
    for e in errors:
        if e.n != code.n:
            raise ValueError(f"error {e.label()} acts on {e.n} qubits, code has {code.n}")
    values = {}
    failures = []
    for li, left in enumerate(errors):
        for ki, right in enumerate(errors):
            for s in (0, 1):
                for t in (0, 1):
                    values[(li, ki, s, t)] = evaluate_word(BASE_ORDER, left, right, None, code, s, t)
            pair = f"{left.label()},{right.label()}"
            if not (is_identically_zero(values[(li, ki, 0, 1)]) and is_identically_zero(values[(li, ki, 1, 0)])):
                failures.append(f"off-diagonal nonzero for ({pair})")
            if not phasor_equal(values[(li, ki, 0, 0)], values[(li, ki, 1, 1)]):
                failures.append(f"diagonal depends on sigma for ({pair})")
    return KLTable(list(errors), values, failures)
