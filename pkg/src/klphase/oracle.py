"""Dense state-vector / matrix evaluation, independent of the exact machinery.

Paulis are built from Kronecker products of the 2x2 matrices, codewords as
explicit vectors, and sandwiches by plain matrix multiplication.
"""

from __future__ import annotations

from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .codes import Code, CodeWord
from .pauli import PauliOp
from .synth import ControlledPhaseGate, DiagonalPhases

I2 = np.eye(2, dtype=complex)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)

ATOL = 1e-9


def _kron_all(mats):
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


@lru_cache(maxsize=4096)
def dense_pauli(p: PauliOp) -> np.ndarray:
    mats = []
    k = p.i_power
    for q in range(p.n):
        bit = 1 << (p.n - 1 - q)
        x, z = bool(p.x_mask & bit), bool(p.z_mask & bit)
        if x and z:
            mats.append(PY)
            k -= 1  # XZ = -iY
        elif x:
            mats.append(PX)
        elif z:
            mats.append(PZ)
        else:
            mats.append(I2)
    out = (1j ** (k % 4)) * _kron_all(mats)
    out.setflags(write=False)
    return out


def diagonal_angles(diag: DiagonalPhases, phi: float) -> np.ndarray:
    if not diag.is_ground:
        raise ValueError("diagonal still contains free variables")
    return np.array([e.evaluate(phi) for e in diag.entries])


def dense_diagonal(diag: DiagonalPhases, phi: float) -> np.ndarray:
    return np.diag(np.exp(1j * diagonal_angles(diag, phi)))


def dense_gate(gate: ControlledPhaseGate, phi: float) -> np.ndarray:
    dim = 1 << gate.n
    fires = np.array([gate.fires_on(j) for j in range(dim)])
    return np.diag(np.where(fires, np.exp(1j * gate.angle.evaluate(phi)), 1.0 + 0j))


def dense_gates(gates: Sequence[ControlledPhaseGate], n: int, phi: float) -> np.ndarray:
    out = np.eye(1 << n, dtype=complex)
    for g in gates:
        out = dense_gate(g, phi) @ out
    return out


def codeword_vector(word: CodeWord) -> np.ndarray:
    v = np.zeros(1 << word.n, dtype=complex)
    for b, s in word.support:
        v[b] = s
    return v / np.linalg.norm(v)


def is_unitary(m: np.ndarray, atol: float = ATOL) -> bool:
    return np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < atol


def _operator(order, left, right, diag, phi):
    P = dense_diagonal(diag, phi) if diag is not None else None
    mats = {
        "P": P,
        "Pd": None if P is None else P.conj().T,
        "Kl*": dense_pauli(left).conj().T,
        "Kk": dense_pauli(right),
    }
    return reduce(np.matmul, [mats[t] for t in order])


def numeric_sandwich(spec, diag: DiagonalPhases, code: Code, phi: float) -> complex:
    """Dense ``<W_s| family word |W_t>`` for a :class:`~klphase.kl.SandwichSpec`."""
    if diag.n != code.n or spec.left_error.n != code.n or spec.right_error.n != code.n:
        raise ValueError("dimension mismatch between spec, diagonal and code")
    M = _operator(spec.family.value, spec.left_error, spec.right_error, diag, phi)
    bra = codeword_vector(code.word(spec.sigma))
    ket = codeword_vector(code.word(spec.sigma_prime))
    return complex(bra.conj() @ M @ ket)


class DenseSandwiches:
    """Sandwich values for one instantiated diagonal, by matrix-vector products."""

    def __init__(self, code: Code, diag: DiagonalPhases):
        if diag.n != code.n:
            raise ValueError("dimension mismatch between diagonal and code")
        # angle_j(φ) = slope_j * φ + offset_j
        self.offset = diagonal_angles(diag, 0.0)
        self.slope = diagonal_angles(diag, 1.0) - self.offset
        self.words = (codeword_vector(code.zero), codeword_vector(code.one))

    def value(self, spec, phi: float) -> complex:
        p = np.exp(1j * (self.slope * phi + self.offset))
        v = self.words[spec.sigma_prime]
        for tok in reversed(spec.family.value):
            if tok == "P":
                v = p * v
            elif tok == "Pd":
                v = p.conj() * v
            elif tok == "Kk":
                v = dense_pauli(spec.right_error) @ v
            else:
                v = dense_pauli(spec.left_error).conj().T @ v
        return complex(self.words[spec.sigma].conj() @ v)


def dense_kl_value(code: Code, left: PauliOp, right: PauliOp, sigma: int, sigma_prime: int) -> complex:
    M = dense_pauli(left).conj().T @ dense_pauli(right)
    return complex(codeword_vector(code.word(sigma)).conj() @ M @ codeword_vector(code.word(sigma_prime)))


def dense_kl_residual(code: Code, errors: Sequence[PauliOp]) -> float:
    """Largest violation of the plain KL conditions (0 means they hold)."""
    words = [codeword_vector(code.zero), codeword_vector(code.one)]
    # <W_s|L† K|W_t> = (L W_s)† (K W_t)
    images = [[dense_pauli(e) @ w for w in words] for e in errors]
    worst = 0.0
    for L in images:
        for K in images:
            v = [[L[s].conj() @ K[t] for t in (0, 1)] for s in (0, 1)]
            worst = max(worst, abs(v[0][1]), abs(v[1][0]), abs(v[0][0] - v[1][1]))
    return worst


def logical_action_residual(code: Code, diag: DiagonalPhases, *, samples: int = 5, seed: int = 0) -> float:
    """Max deviation of ``P|0_L>, P|1_L>`` from ``c|0_L>, c e^{iφ}|1_L>``."""
    rng = np.random.default_rng(seed)
    w0, w1 = codeword_vector(code.zero), codeword_vector(code.one)
    worst = 0.0
    for phi in rng.uniform(0, 2 * np.pi, samples):
        P = dense_diagonal(diag, phi)
        c = w0.conj() @ P @ w0
        worst = max(
            worst,
            np.max(np.abs(P @ w0 - c * w0)),
            np.max(np.abs(P @ w1 - c * np.exp(1j * phi) * w1)),
        )
    return float(worst)


def ramsey_probability(phi: float) -> float:
    return float(abs((1 - np.exp(1j * phi)) / 2) ** 2)


def logical_ramsey_demo(code: Code, diag: DiagonalPhases, phi: float) -> float:
    """Probability of reading logical |1> after a Ramsey sequence on the code.

    The logical Hadamards are replaced by preparing and projecting onto the
    logical ``|±>_L`` states directly.
    """
    from .template import verify_logical_action

    if not verify_logical_action(diag, code):
        raise ValueError("diagonal does not act as a logical phase gate on this code")
    w0, w1 = codeword_vector(code.zero), codeword_vector(code.one)
    psi = dense_diagonal(diag, phi) @ ((w0 + w1) / np.sqrt(2))
    minus = (w0 - w1) / np.sqrt(2)
    return float(abs(minus.conj() @ psi) ** 2)
