"""Computational basis states and n-qubit Pauli operators as signed permutations.

Basis index ``b`` in ``[0, 2**n)`` is written as the ket ``format(b, f"0{n}b")``,
so qubit 0 is the leftmost character and corresponds to integer bit ``n - 1``.
This matches the usual binary ordering of diagonal entries (entry 1 of a
2-qubit operator is ``|01>``).

A Pauli is stored as ``i**i_power * X**x_mask * Z**z_mask`` with the masks in
the same integer bit layout as basis indices, so the action on a basis state is

    P|b> = i**i_power * (-1)**popcount(z_mask & b) |b ^ x_mask>
"""

from __future__ import annotations

import re
from dataclasses import dataclass

UNITS = (1, 1j, -1, -1j)

_KET_RE = re.compile(r"^\|?([01]+)(?:⟩|>)?$")


def qubit_bit(q: int, n: int) -> int:
    """Integer mask of qubit ``q`` (0 = leftmost ket character)."""
    if not 0 <= q < n:
        raise ValueError(f"qubit index {q} out of range for n={n}")
    return 1 << (n - 1 - q)


def qubits_of(mask: int, n: int) -> list[int]:
    """Qubit indices whose bit is set in ``mask``, ascending."""
    return [q for q in range(n) if mask & (1 << (n - 1 - q))]


def ket(b: int, n: int) -> str:
    if not 0 <= b < (1 << n):
        raise ValueError(f"basis index {b} out of range for n={n}")
    return "|" + format(b, f"0{n}b") + "⟩"


def parse_ket(text: str) -> tuple[int, int]:
    """Parse ``|0101⟩`` (or bare ``0101``) into ``(index, n)``."""
    m = _KET_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a computational basis ket: {text!r}")
    bits = m.group(1)
    return int(bits, 2), len(bits)


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliOp:
    n: int
    x_mask: int = 0
    z_mask: int = 0
    i_power: int = 0

    def __post_init__(self):
        full = (1 << self.n) - 1
        if self.n < 0 or self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("Pauli masks exceed qubit count")
        object.__setattr__(self, "i_power", self.i_power % 4)

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(n)

    @classmethod
    def single(cls, letter: str, q: int, n: int) -> PauliOp:
        """Single-qubit ``X``, ``Y``, ``Z`` or ``I`` on qubit ``q``; Y = iXZ."""
        bit = qubit_bit(q, n)
        letter = letter.upper()
        if letter == "I":
            return cls(n)
        if letter == "X":
            return cls(n, x_mask=bit)
        if letter == "Z":
            return cls(n, z_mask=bit)
        if letter == "Y":
            return cls(n, x_mask=bit, z_mask=bit, i_power=1)
        raise ValueError(f"unknown Pauli letter {letter!r}")

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0 and self.i_power == 0

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)

    def apply(self, b: int) -> tuple[int, int]:
        """Return ``(k, b_out)`` with ``P|b> = i**k |b_out>``."""
        if not 0 <= b < (1 << self.n):
            raise ValueError(f"basis index {b} does not fit {self.n} qubits")
        k = self.i_power + 2 * (_popcount(self.z_mask & b) & 1)
        return k % 4, b ^ self.x_mask

    def compose(self, other: PauliOp) -> PauliOp:
        """Operator product ``self @ other`` (``other`` acts first)."""
        _check_n(self, other)
        # Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        k = self.i_power + other.i_power + 2 * _popcount(self.z_mask & other.x_mask)
        return PauliOp(self.n, self.x_mask ^ other.x_mask, self.z_mask ^ other.z_mask, k)

    def __matmul__(self, other: PauliOp) -> PauliOp:
        return self.compose(other)

    def adjoint(self) -> PauliOp:
        k = -self.i_power + 2 * _popcount(self.x_mask & self.z_mask)
        return PauliOp(self.n, self.x_mask, self.z_mask, k)

    def label(self) -> str:
        """Compact label such as ``I``, ``X3``, ``Y0Z2`` or ``-iX1``."""
        letters = []
        k = self.i_power
        for q in range(self.n):
            bit = qubit_bit(q, self.n)
            x, z = bool(self.x_mask & bit), bool(self.z_mask & bit)
            if x and z:
                letters.append(f"Y{q}")
                k -= 1  # XZ = -iY
            elif x:
                letters.append(f"X{q}")
            elif z:
                letters.append(f"Z{q}")
        prefix = ("", "i", "-", "-i")[k % 4]
        return prefix + ("".join(letters) or "I")

    def __str__(self) -> str:
        return self.label()


def _check_n(p: PauliOp, q: PauliOp) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit-count mismatch: {p.n} vs {q.n}")


def pauli_apply(p: PauliOp, b: int) -> tuple[complex, int]:
    k, out = p.apply(b)
    return UNITS[k], out


def pauli_compose(p: PauliOp, q: PauliOp) -> PauliOp:
    return p.compose(q)


def pauli_adjoint(p: PauliOp) -> PauliOp:
    return p.adjoint()
