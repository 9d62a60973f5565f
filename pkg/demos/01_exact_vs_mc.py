#!/usr/bin/env python3
"""Exact enumeration vs Metropolis sampling on a small chain.

For volumes with at most 24 free sites the Gibbs distribution can be summed
exactly, which makes a sharp oracle for the Monte Carlo engine: every MC
magnetization estimate should land within a few standard errors of the exact
value.
"""

from dysonlab import CouplingModel, McParams, Volume, exact_gibbs, mc_magnetization, plus_bc

volume = Volume(0, 7)
model = CouplingModel(alpha=1.5, beta=0.8, j1=1.0)
bc = plus_bc(cutoff=500)

exact = exact_gibbs(volume, bc, model)
print(f"log Z = {exact.log_partition:.6f}")

sites = [0, 3, 7]
estimates = mc_magnetization(volume, bc, model, None, sites,
                             McParams(sweeps=40_000, burnin=4_000, chains=4, seed=11))

print(f"{'site':>4}  {'exact':>10}  {'mc':>10}  {'sem':>9}  {'z':>6}")
for site in sites:
    ex = exact.magnetization[site]
    est = estimates[site]
    z = (est.mean - ex) / est.std_error
    print(f"{site:>4}  {ex:>10.6f}  {est.mean:>10.6f}  {est.std_error:>9.6f}  {z:>6.2f}")
