"""Run the four golden pipelines and print a per-section verdict.

Equivalent to ``klphase reproduce-paper``; kept as a script so the run can be
timed or profiled directly.

    python scripts/reproduce_paper.py --bound 4 --json
"""

import argparse
import sys

from klphase.reports import reproduce_paper, sections_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    sections = reproduce_paper(args.bound, args.seed)
    if args.json:
        print(sections_json(sections))
    else:
        for s in sections:
            print(f"[{'PASS' if s.passed else 'FAIL'}] {s.name} ({s.seconds:.3f}s)")
            print(f"       {s.detail}")
        print(f"{sum(s.passed for s in sections)}/{len(sections)} sections pass")
    return 0 if all(s.passed for s in sections) else 1


if __name__ == "__main__":
    sys.exit(main())
