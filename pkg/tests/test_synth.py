from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klphase.oracle import dense_diagonal, dense_gate, dense_gates, is_unitary
from klphase.phase import PhaseExpr
from klphase.reports import EXAMPLE3_GATES, TWO_QUBIT_GATES, fixture_path
from klphase.synth import (
    ControlledPhaseGate,
    DiagonalPhases,
    apply_gates,
    format_gates,
    gates_to_json,
    global_phase_normalize,
    parse_target,
    synthesize,
)

PROPS = settings(max_examples=200, derandomize=True, deadline=None)
phi = PhaseExpr.of_phi


def diag(*ks):
    n = len(ks).bit_length() - 1
    return DiagonalPhases(n, tuple(phi(k) for k in ks))


def gate_set(gates):
    return {(tuple(g.controls), g.target, str(g.angle)) for g in gates}


def test_normalize_pure_global_phase():
    assert global_phase_normalize([phi(1)] * 4) == diag(0, 0, 0, 0)


def test_normalize_keeps_normalized_target():
    assert global_phase_normalize([phi(0), phi(1), phi(2), phi(0)]) == diag(0, 1, 2, 0)


def test_normalize_single_qubit():
    assert global_phase_normalize([phi(1), phi(0)]) == diag(0, -1)


def test_normalize_rejects_bad_length():
    with pytest.raises(ValueError):
        global_phase_normalize([phi(0)] * 3)


def test_two_qubit_worked_example():
    gates = synthesize(diag(0, 1, 2, 0))
    # phase(φ) on qubit 1, phase(2φ) on qubit 0, controlled-phase(-3φ) control 0 target 1
    assert gate_set(gates) == {((), 1, "φ"), ((), 0, "2φ"), ((0,), 1, "-3φ")} == TWO_QUBIT_GATES
    assert apply_gates(gates, 2) == diag(0, 1, 2, 0)


def test_two_qubit_fixture_matches():
    assert parse_target(fixture_path("two_qubit_target.txt").read_text(encoding="utf-8")) == diag(0, 1, 2, 0)


def test_identity_target_needs_no_gates():
    assert synthesize(diag(0, 0, 0, 0)) == []
    assert format_gates([]) == "0 gates"
    assert parse_target(fixture_path("identity_target.txt").read_text(encoding="utf-8")).entries == (phi(0),) * 4


def test_last_entry_only_gives_one_controlled_gate():
    theta = PhaseExpr.pi(Fraction(1, 3)) + phi(1)
    gates = synthesize(DiagonalPhases(2, (phi(0), phi(0), phi(0), theta)))
    assert len(gates) == 1
    assert (gates[0].controls, gates[0].target, gates[0].angle) == ([0], 1, theta)


def test_example3_gate_list():
    # CP(φ) 0→1, CP(φ) 0→2, CP(φ) 1→2, CCP(-2φ) 0,1→2
    target = diag(0, 0, 0, 1, 0, 1, 1, 1)
    gates = synthesize(target)
    assert gate_set(gates) == EXAMPLE3_GATES
    assert apply_gates(gates, 3) == target


def test_single_phase_on_qubit_one():
    assert apply_gates([ControlledPhaseGate(2, 0, 1, phi(1))], 2) == diag(0, 1, 0, 1)


def test_empty_gate_list_is_identity():
    assert apply_gates([], 3) == diag(*[0] * 8)


def test_unnormalized_target_rejected():
    with pytest.raises(ValueError):
        synthesize(diag(1, 0))


def test_gate_validation():
    with pytest.raises(ValueError):
        ControlledPhaseGate(2, 0b01, 1, phi(1))  # qubit 1 cannot control itself
    with pytest.raises(ValueError):
        apply_gates([ControlledPhaseGate(3, 0, 1, phi(1))], 2)


def test_text_and_json_rendering():
    g = ControlledPhaseGate(3, 0b110, 2, phi(-2))
    assert str(g) == "CP(controls=[0,1], target=2, angle=-2φ)"
    assert gates_to_json([g], 3).count('"angle": "-2φ"') == 1


def test_dense_examples():
    assert np.allclose(dense_diagonal(diag(0, 1), np.pi), np.diag([1, -1]))
    assert np.allclose(dense_diagonal(diag(0, 1, 2, 0), np.pi / 2), np.diag([1, 1j, -1, 1]))
    assert np.allclose(dense_diagonal(diag(0, 0, 0, 0), 0.3), np.eye(4))


# properties -----------------------------------------------------------------------------

angles = st.builds(
    lambda a, d, c: PhaseExpr(Fraction(a, d), (), Fraction(c, 6)),
    st.integers(-5, 5),
    st.integers(1, 3),
    st.integers(0, 11),
)


@st.composite
def targets(draw):
    n = draw(st.integers(1, 4))
    rest = draw(st.lists(angles, min_size=2**n - 1, max_size=2**n - 1))
    return DiagonalPhases(n, (PhaseExpr(),) + tuple(rest))


@PROPS
@given(targets())
def test_round_trip_is_exact(t):
    assert apply_gates(synthesize(t), t.n) == t


@PROPS
@given(targets())
def test_gate_count_bound(t):
    assert len(synthesize(t)) <= 2**t.n - 1


def test_generic_target_uses_every_gate():
    rng = np.random.default_rng(7)
    for n in range(1, 5):
        t = DiagonalPhases(n, (PhaseExpr(),) + tuple(phi(Fraction(int(k), 7)) for k in rng.permutation(50)[: 2**n - 1] + 1))
        assert len(synthesize(t)) == 2**n - 1


@PROPS
@given(targets())
def test_prefix_property(t):
    trace = []
    synthesize(t, trace=trace)
    for i, partial in enumerate(trace, start=1):
        assert partial[: i + 1] == t.entries[: i + 1]


@PROPS
@given(targets(), st.floats(0.05, 2 * np.pi))
def test_gates_commute_and_are_unitary(t, p):
    mats = [dense_gate(g, p) for g in synthesize(t)]
    for a in mats:
        assert is_unitary(a)
        for b in mats:
            assert np.max(np.abs(a @ b - b @ a)) < 1e-12
    product = dense_gates(synthesize(t), t.n, p)
    assert is_unitary(product)
    assert np.max(np.abs(product - dense_diagonal(t, p))) < 1e-12
