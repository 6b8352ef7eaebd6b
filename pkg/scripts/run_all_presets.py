#!/usr/bin/env python3
"""Run every pinned preset and print a one-line summary per run.

Writes trace.csv and report.json for each preset under the chosen output
directory (default ./results).

Usage:
    python scripts/run_all_presets.py [--out DIR]
"""

import argparse
import json
from pathlib import Path

from phasebal.cli import main as phasebal_main
from phasebal.presets import PRESETS


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory")
    args = parser.parse_args()

    root = Path(args.out)
    for name in sorted(PRESETS):
        outdir = root / name
        code = phasebal_main(["run", "--preset", name, "--out", str(outdir)])
        if code != 0:
            print(f"{name:10s} FAILED (exit {code})")
            continue
        report = json.loads((outdir / "report.json").read_text())
        heading = report["final_headings_deg_wrapped"][0]
        print(
            f"{name:10s} {report['outcome']:9s} "
            f"t*={report['t_converged']} "
            f"|p|={report['final_p_mag']:.2e} "
            f"agent1={heading:+8.3f} deg"
        )


if __name__ == "__main__":
    main()
