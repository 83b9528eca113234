"""Error-correcting codes given by two equal-amplitude signed codewords."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from .pauli import ket, parse_ket


class CodeFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class CodeWord:
    """Superposition ``Σ sign_b |b> / sqrt(len(support))``."""

    n: int
    support: tuple[tuple[int, int], ...]

    @classmethod
    def from_kets(cls, n: int, kets: list[str], signs: list[int] | None = None) -> CodeWord:
        signs = signs or [1] * len(kets)
        entries = []
        for k, s in zip(kets, signs):
            b, width = parse_ket(k)
            if width != n:
                raise ValueError(f"ket {k!r} has {width} qubits, expected {n}")
            entries.append((b, s))
        return cls(n, tuple(sorted(entries)))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self.support)

    def sign_map(self) -> dict[int, int]:
        return dict(self.support)

    def __len__(self) -> int:
        return len(self.support)

    def render(self) -> str:
        terms = []
        for i, (b, s) in enumerate(self.support):
            sep = ("-" if s < 0 else "") if i == 0 else (" - " if s < 0 else " + ")
            terms.append(sep + ket(b, self.n))
        norm = "" if len(self.support) == 1 else f"1/√{len(self.support)} "
        return norm + "(" + "".join(terms) + ")"


@dataclass(frozen=True)
class Code:
    name: str
    n: int
    zero: CodeWord
    one: CodeWord
    note: str = field(default="", compare=False)

    def word(self, sigma: int) -> CodeWord:
        return self.one if sigma else self.zero


@dataclass
class ValidationReport:
    checks: dict[str, bool]
    messages: list[str]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def validate_code(code: Code) -> ValidationReport:
    checks: dict[str, bool] = {}
    msgs: list[str] = []
    words = {"zero": code.zero, "one": code.one}

    checks["qubit_count"] = all(w.n == code.n for w in words.values())
    if not checks["qubit_count"]:
        msgs.append("codewords disagree on qubit count")

    checks["nonempty"] = all(len(w) > 0 for w in words.values())
    if not checks["nonempty"]:
        msgs.append("empty codeword support")

    sorted_ok = True
    for name, w in words.items():
        idx = w.indices
        if list(idx) != sorted(set(idx)):
            sorted_ok = False
            msgs.append(f"|{name}> support is not sorted and distinct")
    checks["sorted_distinct"] = sorted_ok

    in_range = all(0 <= b < (1 << code.n) for w in words.values() for b in w.indices)
    checks["index_range"] = in_range
    if not in_range:
        msgs.append(f"support index outside [0, 2^{code.n})")

    signs_ok = all(s in (1, -1) for w in words.values() for _, s in w.support)
    checks["signs"] = signs_ok
    if not signs_ok:
        msgs.append("signs must be +1 or -1")

    overlap = set(code.zero.indices) & set(code.one.indices)
    checks["disjoint"] = not overlap
    if overlap:
        msgs.append(f"supports overlap on {len(overlap)} basis state(s)")
    return ValidationReport(checks, msgs)


_STEANE_ZERO = [
    "0000000", "1010101", "0110011", "1100110",
    "0001111", "1011010", "0111100", "1101001",
]
_STEANE_ONE = [
    "1111111", "0101010", "1001100", "0011001",
    "1110000", "0100101", "1000011", "0010110",
]


def _steane() -> Code:
    return Code(
        "steane", 7, CodeWord.from_kets(7, _STEANE_ZERO), CodeWord.from_kets(7, _STEANE_ONE)
    )


def _rep2() -> Code:
    return Code("rep2", 2, CodeWord.from_kets(2, ["00"]), CodeWord.from_kets(2, ["11"]))


def _example3() -> Code:
    return Code(
        "example3",
        3,
        CodeWord.from_kets(3, ["000", "001", "010", "100"]),
        CodeWord.from_kets(3, ["111", "110", "101", "011"]),
    )


def _shor9() -> Code:
    """Shor's code after a Hadamard on every qubit.

    The textbook codewords (|000> ± |111>)^⊗3 share one support, so no diagonal
    operator can separate them. Rotating every qubit maps each block to its
    even-parity (|0_L>) or odd-parity (|1_L>) states, which are disjoint and
    still correct any single-qubit Pauli.
    """
    even = [b for b in range(8) if bin(b).count("1") % 2 == 0]
    odd = [b for b in range(8) if bin(b).count("1") % 2 == 1]

    def blocks(choices):
        return tuple(sorted(((a << 6) | (b << 3) | c, 1) for a, b, c in itertools.product(choices, repeat=3)))

    return Code(
        "shor9",
        9,
        CodeWord(9, blocks(even)),
        CodeWord(9, blocks(odd)),
        note="Shor code in the Hadamard-rotated basis; exploration only, no reference verdicts",
    )


_REGISTRY = {"steane": _steane, "rep2": _rep2, "example3": _example3, "shor9": _shor9}


def registry_names() -> list[str]:
    return list(_REGISTRY)


def registry_get(name: str) -> Code:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown code {name!r}; known: {', '.join(_REGISTRY)}") from None


def parse_code(text: str, name: str = "file") -> Code:
    n = None
    words: dict[int, tuple[list[tuple[int, int]], int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise CodeFormatError("expected 'n=<int>' header", lineno)
            try:
                n = int(line[2:])
            except ValueError:
                raise CodeFormatError(f"bad qubit count {line[2:]!r}", lineno) from None
            if n < 1:
                raise CodeFormatError("qubit count must be positive", lineno)
            continue
        head, sep, rest = line.partition(":")
        if not sep or head.strip() not in ("0", "1"):
            raise CodeFormatError("expected '0: ...' or '1: ...'", lineno)
        sigma = int(head.strip())
        if sigma in words:
            raise CodeFormatError(f"codeword {sigma} declared twice", lineno)
        entries = []
        for tok in rest.split():
            sign = -1 if tok[0] == "-" else 1
            bits = tok[1:] if tok[0] in "+-" else tok
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise CodeFormatError(f"bad basis state {tok!r} for n={n}", lineno)
            entries.append((int(bits, 2), sign))
        if not entries:
            raise CodeFormatError(f"codeword {sigma} has no terms", lineno)
        words[sigma] = (entries, lineno)
    if n is None:
        raise CodeFormatError("missing 'n=<int>' header")
    for sigma in (0, 1):
        if sigma not in words:
            raise CodeFormatError(f"missing codeword {sigma}")
    built = {}
    for sigma, (entries, lineno) in words.items():
        if len({b for b, _ in entries}) != len(entries):
            raise CodeFormatError(f"duplicate basis state in codeword {sigma}", lineno)
        built[sigma] = CodeWord(n, tuple(sorted(entries)))
    code = Code(name, n, built[0], built[1])
    report = validate_code(code)
    if not report.ok:
        raise CodeFormatError("invalid code: " + "; ".join(report.messages))
    return code


def load_code(path: str | Path) -> Code:
    path = Path(path)
    return parse_code(path.read_text(encoding="utf-8"), name=path.stem)


def dump_code(code: Code) -> str:
    lines = [f"n={code.n}"]
    for sigma in (0, 1):
        toks = [("-" if s < 0 else "+") + format(b, f"0{code.n}b") for b, s in code.word(sigma).support]
        lines.append(f"{sigma}: " + " ".join(toks))
    return "\n".join(lines) + "\n"


def save_code(code: Code, path: str | Path) -> None:
    Path(path).write_text(dump_code(code), encoding="utf-8")
