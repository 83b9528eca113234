import numpy as np
import pytest

from klphase.codes import registry_get
from klphase.kl import Family, SandwichSpec
from klphase.oracle import (
    codeword_vector,
    dense_diagonal,
    dense_pauli,
    is_unitary,
    logical_action_residual,
    logical_ramsey_demo,
    numeric_sandwich,
    ramsey_probability,
)
from klphase.pauli import PauliOp
from klphase.phase import PhaseExpr
from klphase.synth import DiagonalPhases
from klphase.template import constrain, instantiate

from oracles import word_vector

REGISTRY = ["steane", "rep2", "example3", "shor9"]


def test_single_qubit_paulis():
    assert np.array_equal(dense_pauli(PauliOp.single("X", 0, 1)), [[0, 1], [1, 0]])
    assert np.array_equal(dense_pauli(PauliOp.single("Z", 0, 1)), [[1, 0], [0, -1]])
    assert np.allclose(dense_pauli(PauliOp.single("Y", 0, 1)), [[0, -1j], [1j, 0]])


def test_dense_pauli_is_read_only():
    m = dense_pauli(PauliOp.single("X", 0, 2))
    with pytest.raises(ValueError):
        m[0, 0] = 5


def test_identity_sandwich_is_one_for_steane():
    code = registry_get("steane")
    t = constrain(code)
    diag = instantiate(t, {v: 0 for v in t.free})
    I = PauliOp.identity(7)
    assert abs(numeric_sandwich(SandwichSpec(Family.EQ16, I, I, 0, 0), diag, code, 0.83) - 1) < 1e-12


def test_rep2_witness_sandwiches_match():
    code = registry_get("rep2")
    diag = instantiate(constrain(code), {1: 0, 2: 1})
    X1 = PauliOp.single("X", 1, 2)
    v = [numeric_sandwich(SandwichSpec(Family.EQ17, X1, X1, s, s), diag, code, 1.0) for s in (0, 1)]
    assert v[0] == pytest.approx(1) and v[1] == pytest.approx(1)


def test_dimension_mismatch_raises():
    I2 = PauliOp.identity(2)
    with pytest.raises(ValueError):
        numeric_sandwich(SandwichSpec(Family.EQ16, I2, I2, 0, 0), DiagonalPhases(3, (PhaseExpr(),) * 8), registry_get("rep2"), 0.1)


@pytest.mark.parametrize("name", REGISTRY)
def test_codeword_vectors_are_orthonormal(name):
    code = registry_get(name)
    w0, w1 = codeword_vector(code.zero), codeword_vector(code.one)
    assert abs(np.vdot(w0, w0) - 1) < 1e-12 and abs(np.vdot(w0, w1)) < 1e-12
    assert np.allclose(w1, word_vector(code.one))


def test_ramsey_probability_values():
    assert ramsey_probability(0) == pytest.approx(0)
    assert ramsey_probability(np.pi) == pytest.approx(1)
    assert ramsey_probability(np.pi / 2) == pytest.approx(0.5)


def test_ramsey_examples():
    steane = registry_get("steane")
    t = constrain(steane)
    rng = np.random.default_rng(1)
    diag = instantiate(t, {v: int(k) for v, k in zip(t.free, rng.integers(-4, 5, t.var_count))})
    assert logical_ramsey_demo(steane, diag, np.pi) == pytest.approx(1, abs=1e-9)
    rep2 = registry_get("rep2")
    assert logical_ramsey_demo(rep2, instantiate(constrain(rep2), {1: 0, 2: 1}), 0.0) == pytest.approx(0, abs=1e-9)
    ex3 = registry_get("example3")
    assert logical_ramsey_demo(ex3, instantiate(constrain(ex3), {}), np.pi / 2) == pytest.approx(0.5, abs=1e-9)


def test_ramsey_rejects_non_logical_diagonal():
    with pytest.raises(ValueError):
        logical_ramsey_demo(registry_get("rep2"), DiagonalPhases(2, (PhaseExpr(),) * 4), 0.4)


@pytest.mark.parametrize("name", REGISTRY)
def test_ramsey_matches_single_qubit_curve(name):
    code = registry_get(name)
    t = constrain(code)
    rng = np.random.default_rng(len(name))
    for _ in range(3):
        diag = instantiate(t, {v: int(k) for v, k in zip(t.free, rng.integers(-4, 5, t.var_count))})
        assert logical_action_residual(code, diag) < 1e-9
        for p in np.linspace(0, 2 * np.pi, 32):
            assert abs(logical_ramsey_demo(code, diag, p) - ramsey_probability(p)) < 1e-9


def test_dense_diagonal_is_unitary():
    rng = np.random.default_rng(2)
    for n in range(1, 5):
        diag = DiagonalPhases(n, tuple(PhaseExpr.of_phi(int(k)) for k in rng.integers(-3, 4, 2**n)))
        assert is_unitary(dense_diagonal(diag, rng.uniform(0, 6)))
