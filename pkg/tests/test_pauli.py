import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klphase.oracle import dense_pauli
from klphase.pauli import PauliOp, ket, parse_ket, pauli_adjoint, pauli_apply, pauli_compose, qubit_bit

from oracles import letters_matrix, pauli_matrix

PROPS = settings(max_examples=200, derandomize=True, deadline=None)


@st.composite
def paulis(draw, n=None):
    n = n if n is not None else draw(st.integers(1, 5))
    return PauliOp(n, draw(st.integers(0, 2**n - 1)), draw(st.integers(0, 2**n - 1)), draw(st.integers(0, 3)))


@st.composite
def pauli_pairs(draw):
    n = draw(st.integers(1, 5))
    return draw(paulis(n)), draw(paulis(n))


def test_x_on_qubit_zero_flips_leftmost_character():
    assert pauli_apply(PauliOp.single("X", 0, 2), 0b00) == (1, 0b10)


def test_z_phase_on_one():
    assert pauli_apply(PauliOp.single("Z", 1, 2), 0b01) == (-1, 0b01)


def test_y_on_zero():
    assert pauli_apply(PauliOp.single("Y", 0, 1), 0) == (1j, 1)


def test_y_is_i_x_z():
    y = PauliOp.single("Y", 0, 1)
    assert (y.x_mask, y.z_mask, y.i_power) == (1, 1, 1)
    assert np.allclose(pauli_matrix(y), letters_matrix("Y"))


def test_xz_is_minus_i_y():
    x, z, y = (PauliOp.single(c, 0, 1) for c in "XZY")
    assert pauli_compose(x, z) == PauliOp(1, 1, 1, 0)
    assert pauli_compose(x, z).label() == "-iY0"
    assert np.allclose(pauli_matrix(pauli_compose(x, z)), -1j * pauli_matrix(y))


@pytest.mark.parametrize("word", ["XI", "IZ", "YX", "ZZY", "IXYZ"])
def test_single_letter_products_match_kron(word):
    n = len(word)
    op = PauliOp.identity(n)
    for q, c in enumerate(word):
        if c != "I":
            op = op @ PauliOp.single(c, q, n)
    assert np.allclose(dense_pauli(op), letters_matrix(word))
    assert np.allclose(pauli_matrix(op), letters_matrix(word))


def test_ket_rendering_and_parsing():
    assert ket(5, 3) == "|101⟩"
    assert parse_ket("|101⟩") == (5, 3)
    assert parse_ket("0011") == (3, 4)
    with pytest.raises(ValueError):
        parse_ket("|012>")


def test_qubit_bit_layout():
    assert qubit_bit(0, 3) == 0b100
    assert qubit_bit(2, 3) == 0b001
    with pytest.raises(ValueError):
        qubit_bit(3, 3)


def test_invalid_constructions_rejected():
    with pytest.raises(ValueError):
        PauliOp(2, x_mask=0b100)
    with pytest.raises(ValueError):
        PauliOp.single("W", 0, 2)
    with pytest.raises(ValueError):
        PauliOp.single("X", 0, 2).apply(4)
    with pytest.raises(ValueError):
        pauli_compose(PauliOp.identity(2), PauliOp.identity(3))


def test_labels():
    assert PauliOp.identity(4).label() == "I"
    assert PauliOp.single("X", 3, 7).label() == "X3"
    assert (PauliOp.single("Y", 0, 3) @ PauliOp.single("Z", 2, 3)).label() == "Y0Z2"
    assert PauliOp(2, x_mask=1, i_power=3).label() == "-iX1"


@PROPS
@given(paulis())
def test_apply_matches_dense_columns(p):
    M = pauli_matrix(p)
    for b in range(2**p.n):
        unit, out = pauli_apply(p, b)
        col = np.zeros(2**p.n, dtype=complex)
        col[out] = unit
        assert np.allclose(M[:, b], col)


@PROPS
@given(pauli_pairs())
def test_compose_matches_matrix_product(pair):
    p, q = pair
    assert np.allclose(pauli_matrix(p @ q), pauli_matrix(p) @ pauli_matrix(q))


@PROPS
@given(paulis())
def test_adjoint_is_inverse(p):
    adj = pauli_adjoint(p)
    assert (adj @ p).is_identity
    assert (p @ adj).is_identity
    assert np.allclose(pauli_matrix(adj), pauli_matrix(p).conj().T)


@PROPS
@given(paulis())
def test_package_dense_matrix_agrees(p):
    assert np.allclose(dense_pauli(p), pauli_matrix(p))
