#!/usr/bin/env python3
"""End-to-end pipeline: CLI runs -> CSV -> rendered figures.

Drives the `dysonlab` command line to produce CSV outputs, then hands them to
the plots renderer.  The two components communicate only through files, so
this script doubles as a smoke test of both external interfaces.
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)


def run(*args):
    print("+", " ".join(str(a) for a in args))
    subprocess.run([str(a) for a in args], check=True, cwd=ROOT)


jobs = [
    ("interface_hist", "interface-demo",
     ["interface", "--L", "4", "--beta", "2"], "histogram.csv"),
    ("gap_curve", "discontinuity-demo",
     ["discontinuity", "--L", "2", "--N", "6", "--n", "4,6,8", "--beta", "2"],
     "gap.csv"),
    ("bound_check", "bounds-demo",
     ["bounds", "--N", "30", "--L1", "4"], "remainder.csv"),
]

for kind, name, cli_args, csv_name in jobs:
    run_dir = OUT / name
    run(sys.executable, "-m", "dysonlab.cli", *cli_args, "--out_dir", run_dir)
    csv_path = next(run_dir.glob(f"*/{csv_name}"))
    run(sys.executable, ROOT / "plots" / "render.py", "--kind", kind,
        "--in", csv_path, "--out", OUT / f"{kind}.png")

print(f"\nfigures written to {OUT}")
