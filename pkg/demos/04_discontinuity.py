#!/usr/bin/env python3
"""One-sided conditional gap: sensitivity to the far past.

The magnetization at the origin is computed exactly under two frozen pasts
that differ only in a distant annulus (plus vs alternating-with-minus-annulus
pattern).  A strictly positive gap that persists as the future volume grows is
the fingerprint of a discontinuous dependence on boundary conditions.
"""

from dysonlab import run_discontinuity

report = run_discontinuity(alpha=1.5, beta=2.0, L=2, N=6, n_list=(6, 8, 10, 12))

table = report.tables["gap"]
print(f"{'n':>4}  {'value_plus':>12}  {'value_minus':>12}  {'gap':>12}")
for row in table.rows:
    print(f"{int(row[0]):>4}  {row[1]:>12.8f}  {row[2]:>12.8f}  {row[3]:>12.4e}")
print()
for v in report.verdicts:
    print(f"  {v.check}: {'pass' if v.passed else 'FAIL'} (margin {v.margin:.3g})")
