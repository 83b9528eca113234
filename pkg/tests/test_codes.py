import numpy as np
import pytest

from klphase.codes import (
    Code,
    CodeFormatError,
    CodeWord,
    dump_code,
    load_code,
    parse_code,
    registry_get,
    registry_names,
    save_code,
    validate_code,
)
from klphase.kl import base_kl_check, error_set
from klphase.oracle import dense_kl_residual
from klphase.pauli import PauliOp
from klphase.reports import fixture_path

from oracles import kron, letters_matrix, word_vector

REGISTRY = ["steane", "rep2", "example3", "shor9"]


def test_registry_lists_every_code():
    assert set(REGISTRY) <= set(registry_names())


def test_steane_zero_support():
    zero = registry_get("steane").zero
    assert len(zero) == 8
    assert {0b0000000, 0b1010101} <= set(zero.indices)
    assert all(s == 1 for _, s in zero.support)


def test_rep2_supports():
    c = registry_get("rep2")
    assert c.zero.indices == (0b00,) and c.one.indices == (0b11,)


def test_example3_supports():
    c = registry_get("example3")
    assert set(c.zero.indices) == {0b000, 0b001, 0b010, 0b100}
    assert set(c.one.indices) == {0b111, 0b110, 0b101, 0b011}


def test_shor9_is_hadamard_rotated_shor_code():
    c = registry_get("shor9")
    assert c.n == 9 and len(c.zero) == 64 and len(c.one) == 64 and c.note
    block0 = np.zeros(8)
    block0[[0, 7]] = 1
    block1 = block0.copy()
    block1[7] = -1
    H = letters_matrix("X") + letters_matrix("Z")
    H9 = kron(*[H / np.sqrt(2)] * 9)
    for word, block in ((c.zero, block0), (c.one, block1)):
        textbook = np.kron(np.kron(block, block), block) / 2 ** 1.5
        assert np.allclose(H9 @ textbook, word_vector(word))


def test_unknown_code():
    with pytest.raises(KeyError):
        registry_get("nope")


@pytest.mark.parametrize("name", REGISTRY)
def test_registry_codes_validate(name):
    assert validate_code(registry_get(name)).ok


@pytest.mark.parametrize("name", REGISTRY)
def test_save_load_round_trip(tmp_path, name):
    code = registry_get(name)
    path = tmp_path / f"{name}.code"
    save_code(code, path)
    assert load_code(path) == code


@pytest.mark.parametrize("name", REGISTRY)
def test_fixture_files_match_registry(name):
    assert load_code(fixture_path(f"{name}.code")) == registry_get(name)


def test_smallest_file_is_rep2():
    assert parse_code("n=2\n0: +00\n1: +11\n", name="rep2") == registry_get("rep2")


def test_comments_and_blank_lines():
    text = "# rep2\n\nn=2  # two qubits\n0: +00\n1: +11 # done\n"
    assert parse_code(text, name="rep2") == registry_get("rep2")


def test_dump_is_sorted_and_deterministic():
    assert dump_code(registry_get("example3")) == "n=3\n0: +000 +001 +010 +100\n1: +011 +101 +110 +111\n"


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("n=2\n0: +00\n1: +00\n", "overlap"),
        ("n=2\n0: +00 +00\n1: +11\n", "duplicate"),
        ("n=2\n0: +00\n", "missing codeword 1"),
        ("0: +00\n1: +11\n", "n=<int>"),
        ("n=2\n0: +000\n1: +11\n", "bad basis state"),
        ("n=2\n0: +00\n0: +01\n1: +11\n", "declared twice"),
        ("n=x\n", "bad qubit count"),
    ],
)
def test_malformed_files_rejected(text, fragment):
    with pytest.raises(CodeFormatError, match=fragment):
        parse_code(text)


def test_error_line_number_reported():
    with pytest.raises(CodeFormatError) as info:
        parse_code("n=2\n0: +00\n1: +1x\n")
    assert info.value.line == 3


def test_validation_names_failed_checks():
    dup = Code("dup", 2, CodeWord(2, ((0, 1), (0, 1))), CodeWord(2, ((3, 1),)))
    report = validate_code(dup)
    assert not report.ok and not report.checks["sorted_distinct"]

    wide = Code("wide", 2, CodeWord(2, ((0, 1),)), CodeWord(2, ((4, 1),)))
    assert not validate_code(wide).checks["index_range"]

    overlap = Code("ov", 2, CodeWord(2, ((0, 1),)), CodeWord(2, ((0, -1),)))
    assert not validate_code(overlap).checks["disjoint"]

    bad_sign = Code("bs", 2, CodeWord(2, ((0, 2),)), CodeWord(2, ((3, 1),)))
    assert not validate_code(bad_sign).checks["signs"]


# plain KL conditions ------------------------------------------------------------


def test_rep2_corrects_a_single_x():
    code = registry_get("rep2")
    errors = error_set("X1", 2)
    assert base_kl_check(code, errors).passed
    assert dense_kl_residual(code, errors) < 1e-12


def test_rep2_does_not_detect_phase_errors():
    code = registry_get("rep2")
    table = base_kl_check(code, error_set("Z0", 2))
    assert not table.passed
    assert table.value(1, 1, 0, 0) == pytest.approx(1)
    assert table.value(1, 1, 1, 1) == pytest.approx(1)
    # the distinguishing element is <W|I† Z|W>: +1 on |00>, -1 on |11>
    assert table.value(0, 1, 0, 0) == pytest.approx(1)
    assert table.value(0, 1, 1, 1) == pytest.approx(-1)
    assert dense_kl_residual(code, error_set("Z0", 2)) == pytest.approx(2)


@pytest.mark.parametrize("name", ["steane", "shor9"])
def test_distance_three_codes_pass_single_errors(name):
    code = registry_get(name)
    errors = error_set("all-single", code.n)
    assert len(errors) == 1 + 3 * code.n
    assert base_kl_check(code, errors).passed
    assert dense_kl_residual(code, errors) < 1e-9


def test_mismatched_error_width_rejected():
    with pytest.raises(ValueError):
        base_kl_check(registry_get("rep2"), [PauliOp.identity(3)])
