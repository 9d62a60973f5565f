"""Shared helpers: an independent brute-force Gibbs oracle implemented with
plain Python loops (no reuse of the package's vectorized energy paths)."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from dysonlab import Volume
from dysonlab.lattice import BcKind


def brute_coupling(d: int, alpha: float, j1: float) -> float:
    d = abs(d)
    return j1 if d == 1 else float(d) ** -alpha


def brute_boundary_field(site, volume, bc, model):
    """Direct exterior sum, mirroring the truncation convention."""
    total = 0.0
    for j in range(site - bc.cutoff, site + bc.cutoff + 1):
        if j in volume:
            continue
        if bc.kind is BcKind.FREE:
            continue
        if bc.kind is BcKind.FROZEN:
            s = bc.pattern[j]
        else:
            left, right = bc.side_signs()
            s = left if j < volume.lo else right
        total += brute_coupling(j - site, model.alpha, model.j1) * s
    return total


def brute_energy(spins_by_site, volume, bc, model):
    sites = list(volume.sites())
    e = 0.0
    for a in range(len(sites)):
        for b in range(a + 1, len(sites)):
            e -= (
                brute_coupling(sites[b] - sites[a], model.alpha, model.j1)
                * spins_by_site[sites[a]]
                * spins_by_site[sites[b]]
            )
        e -= spins_by_site[sites[a]] * brute_boundary_field(sites[a], volume, bc, model)
    return e


def brute_gibbs(volume, bc, model, frozen=None):
    """(log Z, {site: magnetization}) by direct enumeration."""
    frozen = frozen or {}
    free = [s for s in volume.sites() if s not in frozen]
    logws = []
    spin_rows = []
    for bits in itertools.product((-1, 1), repeat=len(free)):
        spins = dict(zip(free, bits))
        spins.update(frozen)
        logws.append(-model.beta * brute_energy(spins, volume, bc, model))
        spin_rows.append([spins[s] for s in volume.sites()])
    logws = np.array(logws)
    shift = logws.max()
    w = np.exp(logws - shift)
    z = w.sum()
    mags = (w[:, None] * np.array(spin_rows, dtype=float)).sum(axis=0) / z
    logz = shift + math.log(z)
    return logz, {site: float(m) for site, m in zip(volume.sites(), mags)}


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
