#!/usr/bin/env python3
"""Run the five-family table suite at epsilon 0.03 and 0.01 and print a summary."""
from __future__ import annotations

import argparse
import json
from pathlib import Path

from graphsubsample.experiment import run_suite
from graphsubsample.presets import table_suite


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="runs/tables", help="output directory")
    p.add_argument("--write-suite", help="also write the suite JSON here")
    args = p.parse_args()

    suite = table_suite()
    if args.write_suite:
        Path(args.write_suite).write_text(json.dumps(suite, indent=2) + "\n")
    rows = run_suite(suite, args.out)

    print(f"{'family':<17}{'eps':>6}  {'scheme':<6}{'P':>3}  {'error (dB)':>11}  {'cond(A_S T)':>12}")
    for r in rows:
        err = r["error_db"]
        err = f"{err:11.2f}" if isinstance(err, float) else f"{err:>11}"
        print(f"{r['family']:<17}{r['epsilon']:>6}  {r['scheme']:<6}{r['P']:>3}  {err}  {r['cond_ast']:12.3g}")
    print(f"\nsummary: {Path(args.out) / 'summary.csv'}")


if __name__ == "__main__":
    main()
