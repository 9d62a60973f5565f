#!/usr/bin/env python3
"""Analytic toolbox: remainder bounds, boundary-energy bounds, field profiles.

Three quick checks of the closed-form machinery:
  1. the alternating power-sum remainder obeys its (N+1)^(-alpha) envelope,
  2. the maximized boundary energy b_max stays below its analytic bound,
  3. the one-sided field profile h(x) is negative at the origin for a minus
     annulus and positive throughout for a plus annulus.
"""

from dysonlab import FieldProfileSpec, alternating_remainder, b_max, field_profile

alpha = 1.5

print("N     remainder      envelope")
for N in (1, 10, 100, 1000):
    r = alternating_remainder(N, alpha)
    print(f"{N:<5} {r:>12.6e}  {(N + 1) ** -alpha:>12.6e}")

print("\nL1    b_max         bound       ok")
for L1 in (1, 4, 16, 64):
    rep = b_max(L1, alpha, j_cutoff=20_000)
    print(f"{L1:<5} {rep.computed_value:>11.6f}  {rep.analytic_bound:>11.6f}  {rep.satisfied}")

print("\nx     h_minus       h_plus")
for x in (0, 50, 110, 200, 400):
    hm = field_profile(FieldProfileSpec(L=2, N=400, n=900, alpha=alpha, annulus_sign=-1), x)
    hp = field_profile(FieldProfileSpec(L=2, N=400, n=900, alpha=alpha, annulus_sign=+1), x)
    print(f"{x:<5} {hm:>12.6f}  {hp:>12.6f}")
