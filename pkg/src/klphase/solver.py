"""Search for free-phase assignments satisfying a set of vanishing constraints.

Free variables range over the lattice ``{k*φ : |k| <= bound}``. Each constraint
is a phasor sum that must vanish for every φ, i.e. every φ-frequency group must
cancel. The search runs unit propagation to a fixpoint, then backtracks over
the remaining variables in order of descending constraint degree. Independent
groups of variables (connected components) are solved separately.

Partially assigned constraints are pruned with two necessary conditions: the
leftover weight at each frequency must be reachable by some unassigned term,
and the total leftover magnitude cannot exceed the unassigned weight.
"""

from __future__ import annotations

import cmath
import enum
import math
import time
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .kl import Constraint, Kind, SandwichSpec
from .phase import PhaseExpr, is_identically_zero

TOL = 1e-9
DEFAULT_BOUND = 4


class Status(enum.Enum):
    SAT = "Sat"
    UNSAT = "UnsatWithinBound"


@dataclass
class Assignment:
    """Free-variable values as integer multiples of φ, restricted to ``[-bound, bound]``."""

    values: dict[int, int]
    bound: int | None = None

    def __post_init__(self):
        if self.bound is not None:
            bad = {v: k for v, k in self.values.items() if abs(k) > self.bound}
            if bad:
                raise ValueError(f"values outside [-{self.bound}, {self.bound}]: {bad}")

    def render(self) -> str:
        return ", ".join(f"v{v}={PhaseExpr.of_phi(k)}" for v, k in sorted(self.values.items()))


@dataclass
class SolveStats:
    nodes: int = 0
    propagations: int = 0
    wall_time: float = 0.0
    components: int = 0

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "propagations": self.propagations,
            "wall_time": round(self.wall_time, 6),
            "components": self.components,
        }


@dataclass
class SolveOutcome:
    status: Status
    bound: int
    witness: Assignment | None = None
    conflicts: list[str] = field(default_factory=list)
    unconstrained: list[int] = field(default_factory=list)
    lattice_independent: bool = False
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


@dataclass
class PropagationResult:
    domains: dict[int, tuple[int, ...]]
    conflict: tuple[str, ...] | None = None
    forced: dict[int, str] = field(default_factory=dict)

    @property
    def assignment(self) -> dict[int, int]:
        return {v: d[0] for v, d in self.domains.items() if len(d) == 1}


# compiled constraints --------------------------------------------------------


@dataclass(frozen=True)
class _Term:
    weight: complex
    phi: Fraction
    vars: tuple[tuple[int, int], ...]


class _Compiled:
    __slots__ = ("ident", "terms", "vars")

    def __init__(self, c: Constraint):
        self.ident = c.ident
        r = c.residual
        scale = math.sqrt(r.radical)
        self.terms = [
            _Term(scale * float(w) * cmath.exp(1j * math.pi * float(e.const)), e.phi, e.var_terms)
            for w, e in r.terms
        ]
        self.vars = r.free_vars

    def residual(self, values: Mapping[int, int]):
        """Leftover per frequency from fully valued terms, plus the others."""
        groups: dict[Fraction, complex] = defaultdict(complex)
        pending = []
        for t in self.terms:
            f = t.phi
            for v, a in t.vars:
                if v not in values:
                    pending.append(t)
                    break
                f += a * values[v]
            else:
                groups[f] += t.weight
        return groups, pending

    def holds(self, values: Mapping[int, int]) -> bool:
        groups, pending = self.residual(values)
        assert not pending
        return all(abs(z) < TOL for z in groups.values())

    def cost(self, values: Mapping[int, int]) -> float:
        groups, _ = self.residual(values)
        return sum(abs(z) for z in groups.values())

    def feasible(self, values: Mapping[int, int], domains: Mapping[int, tuple[int, ...]]) -> bool:
        groups, pending = self.residual(values)
        open_groups = {f: z for f, z in groups.items() if abs(z) >= TOL}
        if not open_groups:
            return True
        if sum(abs(z) for z in open_groups.values()) > sum(abs(t.weight) for t in pending) + TOL:
            return False
        capacity: dict[Fraction, float] = defaultdict(float)
        for t in pending:
            base, free = t.phi, []
            for v, a in t.vars:
                if v in values:
                    base += a * values[v]
                else:
                    free.append((v, a))
            if len(free) > 1:
                return True  # no cheap reachability bound
            v, a = free[0]
            for f in {base + a * k for k in domains[v]}:
                capacity[f] += abs(t.weight)
        return all(abs(z) <= capacity[f] + TOL for f, z in open_groups.items())


class _Engine:
    def __init__(self, compiled: list[_Compiled], bound: int, stats: SolveStats):
        self.compiled = compiled
        self.bound = bound
        self.stats = stats
        self.by_var: dict[int, list[_Compiled]] = defaultdict(list)
        for c in compiled:
            for v in c.vars:
                self.by_var[v].append(c)
        self.order = sorted(self.by_var, key=lambda v: (-len(self.by_var[v]), v))
        self.conflicts: Counter[str] = Counter()

    def lattice(self) -> tuple[int, ...]:
        return tuple(sorted(range(-self.bound, self.bound + 1), key=lambda k: (abs(k), k < 0)))

    def propagate(self, domains: dict[int, tuple[int, ...]], queue: Iterable[_Compiled]) -> PropagationResult:
        """Filter domains through constraints with one open variable, to a fixpoint."""
        pending = deque(queue)
        queued = {id(c) for c in pending}
        forced: dict[int, str] = {}
        narrowed: dict[int, str] = {}
        while pending:
            c = pending.popleft()
            queued.discard(id(c))
            self.stats.propagations += 1
            values = {v: domains[v][0] for v in c.vars if len(domains[v]) == 1}
            open_vars = [v for v in c.vars if v not in values]
            if not open_vars:
                if not c.holds(values):
                    return PropagationResult(domains, self._blame(c, narrowed), forced)
                continue
            if len(open_vars) > 1:
                if not c.feasible(values, domains):
                    return PropagationResult(domains, (c.ident,), forced)
                continue
            v = open_vars[0]
            keep = tuple(k for k in domains[v] if c.holds({**values, v: k}))
            if keep == domains[v]:
                continue
            if not keep:
                return PropagationResult(domains, self._blame(c, narrowed), forced)
            domains = {**domains, v: keep}
            narrowed[v] = c.ident
            if len(keep) == 1:
                forced[v] = c.ident
            for other in self.by_var[v]:
                if other is not c and id(other) not in queued:
                    pending.append(other)
                    queued.add(id(other))
        return PropagationResult(domains, None, forced)

    @staticmethod
    def _blame(c: _Compiled, narrowed: Mapping[int, str]) -> tuple[str, ...]:
        """The failing constraint plus those that narrowed its variables."""
        blame = [narrowed[u] for u in sorted(c.vars) if u in narrowed and narrowed[u] != c.ident]
        return tuple(dict.fromkeys([c.ident, *blame]))

    def value_order(self, var: int, domains: dict[int, tuple[int, ...]]) -> list[int]:
        """Values that leave the least uncancelled residual come first."""
        scored = []
        for c in self.by_var[var]:
            values = {v: domains[v][0] for v in c.vars if len(domains[v]) == 1}
            scored.append((c, values, c.cost(values)))
        def delta(k):
            return sum(c.cost({**values, var: k}) - base for c, values, base in scored)
        ranks = {k: i for i, k in enumerate(domains[var])}
        return sorted(domains[var], key=lambda k: (round(delta(k), 9), ranks[k]))

    def search(self, domains: dict[int, tuple[int, ...]]) -> dict[int, int] | None:
        self.stats.nodes += 1
        var = next((v for v in self.order if len(domains[v]) > 1), None)
        if var is None:
            return {v: d[0] for v, d in domains.items()}
        for k in self.value_order(var, domains):
            result = self.propagate({**domains, var: (k,)}, self.by_var[var])
            if result.conflict:
                self.conflicts.update(result.conflict)
                continue
            found = self.search(result.domains)
            if found is not None:
                return found
        return None


# lattice-independent conflicts ------------------------------------------------


def _single_var_solutions(c: Constraint, v: int, pinned: Mapping[int, Fraction]):
    """Exact real solution set of ``c`` in ``v`` (others pinned): ``None`` means all."""
    r = c.residual.substitute_partial(pinned)
    coeffs = []
    for _, e in r.terms:
        coeffs.append((e.phi, dict(e.var_terms).get(v, 0)))
    cands = set()
    for i, (b1, a1) in enumerate(coeffs):
        for b2, a2 in coeffs[i + 1:]:
            if a1 != a2:
                cands.add((b2 - b1) / (a1 - a2))
    generic = max((abs(x) for x in cands), default=Fraction(0)) + Fraction(17, 7)
    if is_identically_zero(r.substitute({v: generic})):
        return None
    return {k for k in cands if is_identically_zero(r.substitute({v: k}))}


def lattice_free_conflict(constraints: Sequence[Constraint]) -> list[str] | None:
    """Contradiction derivable without the lattice bound, if any.

    Pins a variable only when the constraints confine it to a single real
    value, and reports the constraints involved when some variable (or a
    variable-free constraint) admits no value at all.
    """
    pinned: dict[int, Fraction] = {}
    reasons: dict[int, list[str]] = {}
    changed = True
    while changed:
        changed = False
        options: dict[int, set | None] = {}
        why: dict[int, list[str]] = defaultdict(list)
        for c in constraints:
            open_vars = c.vars - pinned.keys()
            involved = sorted({r for v in c.vars & pinned.keys() for r in reasons[v]})
            if not open_vars:
                if not is_identically_zero(c.residual.substitute(pinned)):
                    return involved + [c.ident]
                continue
            if len(open_vars) != 1:
                continue
            (v,) = open_vars
            sols = _single_var_solutions(c, v, pinned)
            if sols is None:
                continue
            why[v] += involved + [c.ident]
            options[v] = sols if options.get(v) is None else options[v] & sols
            if not options[v]:
                return sorted(set(why[v]))
        for v, sols in options.items():
            if sols is not None and len(sols) == 1:
                pinned[v] = next(iter(sols))
                reasons[v] = sorted(set(why[v]))
                changed = True
    return None


# public API -----------------------------------------------------------------


def _components(compiled: list[_Compiled]) -> list[list[_Compiled]]:
    g = nx.Graph()
    for i, c in enumerate(compiled):
        g.add_node(("c", i))
        for v in c.vars:
            g.add_edge(("c", i), ("v", v))
    comps = []
    for nodes in nx.connected_components(g):
        idx = sorted(i for kind, i in nodes if kind == "c")
        if idx:
            comps.append([compiled[i] for i in idx])
    comps.sort(key=lambda cs: min(min(c.vars, default=-1) for c in cs))
    return comps


def propagate(
    constraints: Sequence[Constraint], partial: Mapping[int, int] | None = None, bound: int = DEFAULT_BOUND
) -> PropagationResult:
    """Unit propagation from ``partial`` over the lattice ``[-bound, bound]``."""
    compiled = [_Compiled(c) for c in constraints]
    engine = _Engine(compiled, bound, SolveStats())
    domains = {v: engine.lattice() for v in engine.by_var}
    for v, k in (partial or {}).items():
        domains[v] = (k,)
    return engine.propagate(domains, compiled)


def solve(
    constraints: Sequence[Constraint],
    bound: int = DEFAULT_BOUND,
    seed: int = 0,
    *,
    variables: Iterable[int] = (),
) -> SolveOutcome:
    """Find a lattice assignment satisfying every constraint, or prove none exists.

    ``variables`` lists every free variable of the template; those that no
    constraint mentions are reported as unconstrained and set to 0. ``seed``
    drives the sampled φ values of the witness re-check.
    """
    if bound < 1:
        raise ValueError("lattice bound must be at least 1")
    constraints = list(constraints)
    start = time.perf_counter()
    stats = SolveStats()
    constrained = sorted(set().union(*(c.vars for c in constraints)) if constraints else set())
    unconstrained = sorted(set(variables) - set(constrained))

    def done(outcome: SolveOutcome) -> SolveOutcome:
        stats.wall_time = time.perf_counter() - start
        outcome.stats = stats
        return outcome

    compiled = [_Compiled(c) for c in constraints]
    for c, cc in zip(constraints, compiled):
        if not cc.vars and not is_identically_zero(c.residual):
            return done(SolveOutcome(Status.UNSAT, bound, conflicts=[c.ident],
                                     unconstrained=unconstrained, lattice_independent=True))

    witness: dict[int, int] = {}
    comps = _components([cc for cc in compiled if cc.vars])
    stats.components = len(comps)
    for comp in comps:
        engine = _Engine(comp, bound, stats)
        domains = {v: engine.lattice() for v in engine.by_var}
        root = engine.propagate(domains, comp)
        found = None
        if root.conflict:
            engine.conflicts.update(root.conflict)
        else:
            found = engine.search(root.domains)
        if found is None:
            members = {cc.ident for cc in comp}
            exact = lattice_free_conflict([c for c in constraints if c.ident in members])
            conflicts = [name for name, _ in engine.conflicts.most_common()]
            if exact:
                conflicts = list(dict.fromkeys(exact + conflicts))
            return done(SolveOutcome(Status.UNSAT, bound, conflicts=conflicts,
                                     unconstrained=unconstrained, lattice_independent=exact is not None))
        witness.update(found)

    witness.update({v: 0 for v in unconstrained})
    report = check_assignment(constraints, witness, seed=seed)
    if not report.passed:
        raise AssertionError(f"solver produced an invalid witness: {report.failures[:3]}")
    return done(SolveOutcome(Status.SAT, bound, Assignment(witness, bound), unconstrained=unconstrained))


@dataclass
class CheckReport:
    results: dict[str, bool]
    residuals: dict[str, float]

    @property
    def failures(self) -> list[str]:
        return [k for k, ok in self.results.items() if not ok]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return not self.failures and self.max_residual < TOL


def check_assignment(
    constraints: Sequence[Constraint],
    assignment: Mapping[int, int],
    *,
    code=None,
    template=None,
    samples: int = 5,
    seed: int = 0,
) -> CheckReport:
    """Exact verdict per constraint plus numeric residuals at sampled φ.

    With ``code`` and ``template`` the residuals come from dense matrices of the
    instantiated operator; otherwise the phasor sums are evaluated numerically.
    """
    values = dict(assignment)
    if isinstance(assignment, Assignment):
        values = dict(assignment.values)
    rng = np.random.default_rng(seed)
    phis = rng.uniform(0, 2 * np.pi, samples)
    results, residuals = {}, {}
    dense = None
    if code is not None and template is not None:
        from .oracle import DenseSandwiches
        from .template import instantiate

        dense = DenseSandwiches(code, instantiate(template, values))
    for c in constraints:
        results[c.ident] = c.satisfied_by(values)
        worst = 0.0
        for phi in phis:
            if dense is not None:
                if c.kind is Kind.OFF_DIAGONAL_ZERO:
                    val = dense.value(SandwichSpec(c.family, c.left, c.right, 0, 1), phi)
                else:
                    val = dense.value(SandwichSpec(c.family, c.left, c.right, 0, 0), phi) - dense.value(
                        SandwichSpec(c.family, c.left, c.right, 1, 1), phi)
            else:
                val = c.residual.substitute(values).evaluate(phi)
            worst = max(worst, abs(val))
        residuals[c.ident] = worst
    return CheckReport(results, residuals)


def parse_assignment(text: str) -> dict[int, int]:
    """``v<id> = <k>φ`` per line; ``#`` comments. Values must be integer multiples of φ."""
    from .phase import parse_phase

    values: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, rhs = line.partition("=")
        name = name.strip()
        if not sep or not name.startswith("v") or not name[1:].isdigit():
            raise ValueError(f"line {lineno}: expected 'v<id> = <phase>'")
        try:
            expr = parse_phase(rhs)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if expr.var_terms or expr.const or expr.phi.denominator != 1:
            raise ValueError(f"line {lineno}: value must be an integer multiple of φ")
        values[int(name[1:])] = int(expr.phi)
    return values


def dump_assignment(values: Mapping[int, int]) -> str:
    return "".join(f"v{v} = {PhaseExpr.of_phi(k)}\n" for v, k in sorted(values.items()))
