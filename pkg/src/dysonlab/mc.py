"""Metropolis sampling of the finite-volume Gibbs measures.

Single-site Metropolis with acceptance min(1, exp(-beta dE)); proposals pick a
uniformly random free site.  The per-site fields are cached and updated on
acceptance, so a proposal costs O(1) and an accepted flip O(n).  Chains are
independent, seeded from (seed, chain index), and reduced in a fixed order, so
results are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numba
import numpy as np

from .errors import PreconditionError
from .exact import Constraint
from .lattice import (
    BoundaryCondition,
    CouplingModel,
    SpinConfig,
    Volume,
    boundary_field_vector,
)


@dataclass(frozen=True)
class McParams:
    sweeps: int
    burnin: int = 0
    chains: int = 2
    seed: int = 0
    thin: int = 1

    def __post_init__(self) -> None:
        if self.sweeps <= 0:
            raise PreconditionError("sweeps must be positive")
        if self.burnin < 0 or self.burnin >= self.sweeps:
            raise PreconditionError("need sweeps > burnin >= 0")
        if self.chains < 1:
            raise PreconditionError("chains must be >= 1")
        if self.thin < 1:
            raise PreconditionError("thin must be >= 1")

    @property
    def samples_per_chain(self) -> int:
        return (self.sweeps - self.burnin + self.thin - 1) // self.thin


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n_samples: int

    def __post_init__(self) -> None:
        if self.std_error < 0:
            raise PreconditionError("std_error must be >= 0")
        if self.n_samples <= 0:
            raise PreconditionError("n_samples must be positive")


@numba.njit(cache=True, nogil=True)
def _run_chain(spins, free_sites, jmat, h, beta, sweeps, burnin, thin, seed, samples, record):
    np.random.seed(seed)
    n = spins.shape[0]
    nf = free_sites.shape[0]
    fields = np.empty(n)
    for i in range(n):
        acc = h[i]
        for j in range(n):
            acc += jmat[i, j] * spins[j]
        fields[i] = acc
    mag = np.zeros(n)
    row = 0
    for sweep in range(sweeps):
        for _ in range(nf):
            i = free_sites[np.random.randint(nf)]
            de = 2.0 * spins[i] * fields[i]
            if de <= 0.0 or np.random.random() < np.exp(-beta * de):
                s_old = spins[i]
                spins[i] = -s_old
                for j in range(n):
                    fields[j] -= 2.0 * s_old * jmat[i, j]
        if sweep >= burnin and (sweep - burnin) % thin == 0:
            for j in range(n):
                mag[j] += spins[j]
            if record:
                for j in range(n):
                    samples[row, j] = spins[j]
            row += 1
    return mag, row


def _chain_seed(seed: int, chain: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(chain,))
    return int(ss.generate_state(1)[0] & 0x7FFFFFFF)


def _setup(volume: Volume, bc: BoundaryCondition, model: CouplingModel,
           constraint: Constraint | None):
    constraint = constraint or Constraint()
    constraint.validate_for(volume)
    jmat = model.coupling_matrix(volume)
    h = boundary_field_vector(volume, bc, model)
    n = volume.size
    frozen = np.zeros(n, dtype=np.bool_)
    spins0 = np.zeros(n, dtype=np.int8)
    for site, s in constraint.frozen.items():
        frozen[volume.index(site)] = True
        spins0[volume.index(site)] = s
    free_sites = np.flatnonzero(~frozen).astype(np.int64)
    if len(free_sites) == 0:
        raise PreconditionError("no free sites to sample")
    # Cold start aligned with the static field (boundary + frozen sites),
    # i.e. the dominant boundary sign phase.
    static = h + jmat[:, frozen.nonzero()[0]] @ spins0[frozen].astype(np.float64)
    init = np.where(static >= 0.0, 1, -1).astype(np.int8)
    spins0[~frozen] = init[~frozen]
    return jmat, h, spins0, free_sites


def mc_sample_array(
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
    constraint: Constraint | None,
    params: McParams,
    chain: int = 0,
) -> np.ndarray:
    """Thinned post-burnin configurations of one chain, shape (n_samples, size)."""
    jmat, h, spins0, free_sites = _setup(volume, bc, model, constraint)
    samples = np.empty((params.samples_per_chain, volume.size), dtype=np.int8)
    _run_chain(
        spins0.copy(), free_sites, jmat, h, model.beta,
        params.sweeps, params.burnin, params.thin,
        _chain_seed(params.seed, chain), samples, True,
    )
    return samples


def mc_sample_stream(
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
    constraint: Constraint | None,
    params: McParams,
) -> Iterator[SpinConfig]:
    """Yield the thinned post-burnin configurations of chain 0."""
    for row in mc_sample_array(volume, bc, model, constraint, params, chain=0):
        yield SpinConfig.from_array(volume, row)


def mc_magnetization(
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
    constraint: Constraint | None,
    sites: Sequence[int],
    params: McParams,
) -> dict[int, Estimate]:
    """Per-site magnetization estimates with across-chain error bars."""
    if params.chains < 2:
        raise PreconditionError("error bars need chains >= 2")
    jmat, h, spins0, free_sites = _setup(volume, bc, model, constraint)
    for site in sites:
        volume.index(site)
    dummy = np.empty((0, volume.size), dtype=np.int8)
    chain_means = np.empty((params.chains, volume.size))
    count = 0
    for chain in range(params.chains):
        mag, count = _run_chain(
            spins0.copy(), free_sites, jmat, h, model.beta,
            params.sweeps, params.burnin, params.thin,
            _chain_seed(params.seed, chain), dummy, False,
        )
        chain_means[chain] = mag / count
    mean = chain_means.mean(axis=0)
    sem = chain_means.std(axis=0, ddof=1) / np.sqrt(params.chains)
    n_total = count * params.chains
    return {
        site: Estimate(
            float(mean[volume.index(site)]),
            float(sem[volume.index(site)]),
            n_total,
        )
        for site in sites
    }
