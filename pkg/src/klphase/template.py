"""Diagonal templates for a logical phase gate on a given code.

Entries on the support of |0>_L are pinned to 0, entries on |1>_L to φ, and
every other entry becomes a free variable whose id is its basis index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .codes import Code
from .pauli import ket
from .phase import PhaseExpr
from .synth import DiagonalPhases

ZERO = PhaseExpr()
PHI1 = PhaseExpr.of_phi(1)


@dataclass(frozen=True)
class DiagonalTemplate:
    n: int
    entries: tuple[PhaseExpr, ...]
    free: tuple[int, ...]

    @property
    def var_count(self) -> int:
        return len(self.free)

    def is_free(self, j: int) -> bool:
        return not self.entries[j].is_ground

    def tag(self, j: int) -> str:
        e = self.entries[j]
        return f"Free(v{j})" if not e.is_ground else f"Fixed({e})"

    def report(self) -> dict:
        return {
            "n": self.n,
            "dof": self.var_count,
            "fixed": sum(1 for e in self.entries if e.is_ground),
            "entries": [
                {"index": j, "ket": ket(j, self.n), "tag": self.tag(j)}
                for j in range(len(self.entries))
            ],
        }

    def render(self) -> str:
        lines = [f"n={self.n}  free={self.var_count}  fixed={len(self.entries) - self.var_count}"]
        lines += [f"{ket(j, self.n)}  {self.tag(j)}" for j in range(len(self.entries))]
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.report(), ensure_ascii=False)


def constrain(code: Code) -> DiagonalTemplate:
    zero, one = set(code.zero.indices), set(code.one.indices)
    entries, free = [], []
    for j in range(1 << code.n):
        if j in zero:
            entries.append(ZERO)
        elif j in one:
            entries.append(PHI1)
        else:
            entries.append(PhaseExpr.var(j))
            free.append(j)
    return DiagonalTemplate(code.n, tuple(entries), tuple(free))


def instantiate(template: DiagonalTemplate, assignment: Mapping[int, int]) -> DiagonalPhases:
    entries = tuple(e.substitute(assignment) for e in template.entries)
    ref = entries[0]
    return DiagonalPhases(template.n, tuple(e - ref for e in entries))


def verify_logical_action(diag: DiagonalPhases, code: Code, *, samples: int = 5, seed: int = 0) -> bool:
    """Exact check that |0>_L is fixed and |1>_L gains exactly φ.

    Phases are taken relative to the first |0>_L support entry, which is entry
    0 itself for every built-in code. The exact verdict is cross-checked
    against dense evaluation at sampled φ; a disagreement raises.
    """
    if diag.n != code.n:
        raise ValueError(f"diagonal on {diag.n} qubits, code on {code.n}")
    ref = diag.entries[code.zero.indices[0]]
    exact = all((diag.entries[j] - ref).is_zero for j in code.zero.indices) and all(
        diag.entries[j] - ref == PHI1 for j in code.one.indices
    )
    if diag.is_ground:
        from .oracle import logical_action_residual

        numeric = logical_action_residual(code, diag, samples=samples, seed=seed) < 1e-9
        if numeric != exact:
            raise AssertionError("symbolic and numeric logical-action checks disagree")
    return exact
