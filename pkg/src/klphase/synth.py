"""Greedy decomposition of diagonal unitaries into commuting controlled-phase gates.

Diagonal entries are visited in increasing index order. Every gate fires only
on indices whose bit pattern contains its support, so the gate chosen for
index ``i`` never disturbs entries ``< i``; choosing its angle as the remaining
difference at ``i`` therefore fixes entry ``i`` for good.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .pauli import qubit_bit, qubits_of
from .phase import PhaseExpr, parse_phase


@dataclass(frozen=True)
class DiagonalPhases:
    """Phases of a diagonal operator; entry ``j`` multiplies ``|j>``."""

    n: int
    entries: tuple[PhaseExpr, ...]

    def __post_init__(self):
        if len(self.entries) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} entries, got {len(self.entries)}")

    @property
    def normalized(self) -> bool:
        return self.entries[0].is_zero

    @property
    def is_ground(self) -> bool:
        return all(e.is_ground for e in self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def _n_from_length(length: int) -> int:
    n = length.bit_length() - 1
    if length < 1 or 1 << n != length:
        raise ValueError(f"diagonal length {length} is not a power of two")
    return n


def global_phase_normalize(raw: Sequence[PhaseExpr]) -> DiagonalPhases:
    n = _n_from_length(len(raw))
    ref = raw[0]
    return DiagonalPhases(n, tuple(e - ref for e in raw))


@dataclass(frozen=True)
class ControlledPhaseGate:
    """Multiplies ``|b>`` by ``exp(i*angle)`` when target and all controls are 1."""

    n: int
    control_mask: int
    target: int
    angle: PhaseExpr

    def __post_init__(self):
        if self.control_mask & qubit_bit(self.target, self.n):
            raise ValueError("target qubit cannot also be a control")
        if self.control_mask >> self.n:
            raise ValueError("control mask exceeds qubit count")

    @property
    def controls(self) -> list[int]:
        return qubits_of(self.control_mask, self.n)

    @property
    def support(self) -> int:
        return self.control_mask | qubit_bit(self.target, self.n)

    def fires_on(self, b: int) -> bool:
        return b & self.support == self.support

    def __str__(self) -> str:
        ctrl = ",".join(str(q) for q in self.controls)
        return f"CP(controls=[{ctrl}], target={self.target}, angle={self.angle})"

    def to_json(self) -> dict:
        return {"controls": self.controls, "target": self.target, "angle": str(self.angle)}


GateList = list[ControlledPhaseGate]


def gate_for_index(i: int, n: int, angle: PhaseExpr) -> ControlledPhaseGate:
    # highest-numbered set qubit (rightmost ket character) is the target
    target = qubits_of(i, n)[-1]
    return ControlledPhaseGate(n, i & ~qubit_bit(target, n), target, angle)


def synthesize(target: DiagonalPhases, *, trace: list | None = None) -> GateList:
    """Commuting controlled-phase gates reproducing ``target`` exactly.

    If ``trace`` is a list, the partial reconstruction after each index is
    appended to it (used to check the prefix property).
    """
    if not target.normalized:
        raise ValueError("target is not global-phase normalized (entry 0 must be 0)")
    n = target.n
    current = [PhaseExpr()] * (1 << n)
    gates: GateList = []
    for i in range(1, 1 << n):
        angle = target.entries[i] - current[i]
        if not angle.is_zero:
            gate = gate_for_index(i, n, angle)
            gates.append(gate)
            for j in range(i, 1 << n):
                if gate.fires_on(j):
                    current[j] = current[j] + angle
        if trace is not None:
            trace.append(tuple(current))
    return gates


def apply_gates(gates: Iterable[ControlledPhaseGate], n: int) -> DiagonalPhases:
    entries = [PhaseExpr()] * (1 << n)
    for g in gates:
        if g.n != n:
            raise ValueError(f"gate on {g.n} qubits applied to {n}-qubit register")
        for j in range(1 << n):
            if g.fires_on(j):
                entries[j] = entries[j] + g.angle
    return DiagonalPhases(n, tuple(entries))


def format_gates(gates: GateList, *, positions: bool = False) -> str:
    if not gates:
        return "0 gates"
    lines = []
    for g in gates:
        line = str(g)
        if positions:
            ctrl = ",".join(str(q + 1) for q in g.controls)
            line += f"  # ket positions: controls=[{ctrl}] target={g.target + 1} of {g.n}"
        lines.append(line)
    return "\n".join(lines)


def gates_to_json(gates: GateList, n: int) -> str:
    return json.dumps({"n": n, "gates": [g.to_json() for g in gates]}, ensure_ascii=False)


def parse_target(text: str) -> DiagonalPhases:
    """One phase expression per line; ``#`` comments; entry 0 must be normalized."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            entries.append(parse_phase(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    n = _n_from_length(len(entries))
    return DiagonalPhases(n, tuple(entries))
