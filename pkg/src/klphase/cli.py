"""Command-line entry point: ``klphase <command> ...``.

Exit codes: 0 success / Sat, 2 UnsatWithinBound, 3 invalid input,
1 when ``reproduce-paper`` finds a section that does not match.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import codes as codes_mod
from .config import RunConfig, default_format
from .kl import error_set
from .oracle import dense_diagonal, dense_gates, logical_ramsey_demo, ramsey_probability
from .reports import reproduce_paper, resolve_code, run_pipeline, sections_json
from .solver import DEFAULT_BOUND, dump_assignment, parse_assignment
from .synth import format_gates, gates_to_json, global_phase_normalize, parse_target, synthesize
from .template import constrain, instantiate

EXIT_OK, EXIT_MISMATCH, EXIT_UNSAT, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_code(spec: str):
    try:
        return resolve_code(spec)
    except (KeyError, ValueError, OSError) as exc:
        raise InputError(str(exc).strip('"')) from None


def _emit(cfg: RunConfig, text: str, payload: dict) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2) if cfg.fmt == "json" else text)


def cmd_codes(args, cfg: RunConfig) -> int:
    if args.action == "list":
        rows = []
        for name in codes_mod.registry_names():
            c = codes_mod.registry_get(name)
            rows.append({"name": name, "n": c.n, "support": [len(c.zero), len(c.one)], "note": c.note})
        text = "\n".join(f"{r['name']:<10} n={r['n']:<3} |0>_L:{r['support'][0]} terms  |1>_L:{r['support'][1]} terms"
                         + (f"  ({r['note']})" if r["note"] else "") for r in rows)
        _emit(cfg, text, {"codes": rows})
        return EXIT_OK
    if not args.name:
        raise InputError("codes show needs a code name")
    code = _load_code(args.name)
    report = codes_mod.validate_code(code)
    text = "\n".join([
        f"{code.name}: n={code.n}" + (f"  [{code.note}]" if code.note else ""),
        f"|0>_L = {code.zero.render()}",
        f"|1>_L = {code.one.render()}",
        f"valid: {report.ok}",
    ])
    payload = {
        "name": code.name, "n": code.n, "note": code.note, "valid": report.ok,
        "zero": [[format(b, f"0{code.n}b"), s] for b, s in code.zero.support],
        "one": [[format(b, f"0{code.n}b"), s] for b, s in code.one.support],
    }
    _emit(cfg, text, payload)
    return EXIT_OK


def cmd_template(args, cfg: RunConfig) -> int:
    tpl = constrain(_load_code(args.code))
    _emit(cfg, tpl.render(), tpl.report())
    return EXIT_OK


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_synth(args, cfg: RunConfig) -> int:
    try:
        if args.target:
            raw = parse_target(_read(args.target))
            target = global_phase_normalize(raw.entries)
        elif args.code:
            code = _load_code(args.code)
            tpl = constrain(code)
            values = parse_assignment(_read(args.assignment)) if args.assignment else {}
            missing = sorted(set(tpl.free) - values.keys())
            if missing:
                raise InputError(f"assignment misses {len(missing)} free entries, e.g. v{missing[0]}")
            target = instantiate(tpl, values)
        else:
            raise InputError("give --target FILE or --code NAME [--assignment FILE]")
    except ValueError as exc:
        raise InputError(str(exc)) from None
    gates = synthesize(target)
    payload = json.loads(gates_to_json(gates, target.n))
    lines = [format_gates(gates, positions=True)]
    if gates:
        lines.append(f"{len(gates)} gates")
    if args.verify:
        rng = np.random.default_rng(cfg.seed)
        err = max(
            float(np.max(np.abs(dense_gates(gates, target.n, phi) - dense_diagonal(target, phi))))
            for phi in rng.uniform(0, 2 * np.pi, cfg.samples)
        )
        lines.append(f"max reconstruction error over {cfg.samples} sampled φ: {err:.2e}")
        payload["max_reconstruction_error"] = err
    _emit(cfg, "\n".join(lines), payload)
    return EXIT_OK


def cmd_solve(args, cfg: RunConfig) -> int:
    code = _load_code(cfg.code)
    try:
        error_set(cfg.errors, code.n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = run_pipeline(code, cfg.errors, cfg.bound, cfg.seed, cfg.samples)
    if args.dump_constraints:
        Path(args.dump_constraints).write_text(
            json.dumps([c.to_json() for c in report.constraints], ensure_ascii=False, indent=1), encoding="utf-8"
        )
    if args.witness_out and report.outcome.witness is not None:
        Path(args.witness_out).write_text(dump_assignment(report.outcome.witness.values), encoding="utf-8")
    _emit(cfg, report.render(), report.to_json())
    return report.exit_code


def cmd_reproduce(args, cfg: RunConfig) -> int:
    sections = reproduce_paper(cfg.bound, cfg.seed)
    passed = sum(s.passed for s in sections)
    lines = [f"[{'PASS' if s.passed else 'FAIL'}] {s.name}: {s.detail}" for s in sections]
    lines.append(f"{passed}/{len(sections)} sections pass")
    _emit(cfg, "\n".join(lines), json.loads(sections_json(sections)))
    return EXIT_OK if passed == len(sections) else EXIT_MISMATCH


def cmd_ramsey(args, cfg: RunConfig) -> int:
    code = _load_code(cfg.code)
    tpl = constrain(code)
    values = parse_assignment(_read(args.assignment)) if args.assignment else {v: 0 for v in tpl.free}
    diag = instantiate(tpl, {**{v: 0 for v in tpl.free}, **values})
    rows = []
    for phi in args.phi:
        p = logical_ramsey_demo(code, diag, phi)
        rows.append({"phi": phi, "logical": p, "single_qubit": ramsey_probability(phi)})
    text = "\n".join(f"φ={r['phi']:.6f}  P(1_L)={r['logical']:.12f}  sin²(φ/2)={r['single_qubit']:.12f}" for r in rows)
    _emit(cfg, text, {"code": code.name, "samples": rows})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_const", const="json", dest="fmt", help="machine-readable output")
    common.add_argument("--format", choices=("text", "json"), dest="fmt")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=5, help="φ samples for numeric checks")

    parser = argparse.ArgumentParser(prog="klphase", description="Diagonal logical phase gates and extended KL conditions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", parents=[common], help="list or show built-in codes")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_codes)

    p = sub.add_parser("template", parents=[common], help="fixed/free entries of the logical phase template")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_template)

    p = sub.add_parser("synth", parents=[common], help="decompose a diagonal into controlled-phase gates")
    p.add_argument("--target", help="file with one phase per line")
    p.add_argument("--code")
    p.add_argument("--assignment", help="file with 'v<id> = <k>φ' lines")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("solve", parents=[common], help="search free phases satisfying the extended KL conditions")
    p.add_argument("--code", required=True)
    p.add_argument("--errors", default="all-single")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--dump-constraints", metavar="FILE")
    p.add_argument("--witness-out", metavar="FILE")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reproduce-paper", parents=[common], help="run the four golden pipelines")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("ramsey", parents=[common], help="logical Ramsey probability for a code")
    p.add_argument("--code", required=True)
    p.add_argument("--assignment")
    p.add_argument("--phi", type=float, nargs="+", default=[0.0, np.pi / 2, np.pi])
    p.set_defaults(func=cmd_ramsey)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig(
            command=args.command,
            code=getattr(args, "code", None),
            errors=getattr(args, "errors", "all-single"),
            bound=getattr(args, "bound", DEFAULT_BOUND),
            fmt=args.fmt or default_format(),
            seed=args.seed,
            samples=args.samples,
        )
        return args.func(args, cfg)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
