"""Brute-force enumeration over all spin configurations of a finite volume.

This is the ground-truth oracle for the sampler, the interface geometry and
the experiments.  Enumeration is vectorized with numpy over chunks of the
2^n free-site patterns; weights are accumulated with a streaming log-sum-exp
so large beta cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import CapExceededError, PreconditionError
from .lattice import (
    BoundaryCondition,
    CouplingModel,
    Volume,
    boundary_field_vector,
)

DEFAULT_CAP = 24
_CHUNK_BITS = 16


@dataclass(frozen=True)
class Constraint:
    """Partial assignment of spins inside the volume (frozen sites)."""

    frozen: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(s not in (-1, 1) for s in self.frozen.values()):
            raise PreconditionError("constraint spins must be +1 or -1")

    def validate_for(self, volume: Volume) -> None:
        for site in self.frozen:
            if site not in volume:
                raise PreconditionError(
                    f"constrained site {site} outside volume [{volume.lo},{volume.hi}]"
                )


@dataclass(frozen=True)
class ExactResult:
    volume: Volume
    bc_description: str
    model: CouplingModel
    log_partition: float
    magnetization: dict[int, float]

    def __post_init__(self) -> None:
        if not np.isfinite(self.log_partition):
            raise PreconditionError("log_partition must be finite")


class _LogAccumulator:
    """Streaming log-sum-exp of weights together with per-site spin sums."""

    def __init__(self, n_sites: int):
        self.shift = -np.inf
        self.z = 0.0
        self.spin_sum = np.zeros(n_sites)

    def add(self, logw: np.ndarray, spins: np.ndarray) -> None:
        m = float(logw.max())
        if m > self.shift:
            scale = np.exp(self.shift - m) if np.isfinite(self.shift) else 0.0
            self.z *= scale
            self.spin_sum *= scale
            self.shift = m
        w = np.exp(logw - self.shift)
        self.z += float(w.sum())
        self.spin_sum += w @ spins

    @property
    def log_total(self) -> float:
        return self.shift + np.log(self.z)

    @property
    def mean_spins(self) -> np.ndarray:
        return self.spin_sum / self.z


def _frozen_layout(volume: Volume, constraint: Constraint | None):
    """Indices and values of frozen sites, and indices of free sites."""
    constraint = constraint or Constraint()
    constraint.validate_for(volume)
    frozen_idx = []
    frozen_val = []
    free_idx = []
    for k, site in enumerate(volume.sites()):
        if site in constraint.frozen:
            frozen_idx.append(k)
            frozen_val.append(constraint.frozen[site])
        else:
            free_idx.append(k)
    return (
        np.array(frozen_idx, dtype=np.int64),
        np.array(frozen_val, dtype=np.float64),
        np.array(free_idx, dtype=np.int64),
    )


def _chunk_spins(start: int, stop: int, n_free: int) -> np.ndarray:
    """Rows of +-1 free-site patterns for pattern indices [start, stop)."""
    idx = np.arange(start, stop, dtype=np.uint64)
    bits = (idx[:, None] >> np.arange(n_free, dtype=np.uint64)[None, :]) & np.uint64(1)
    return bits.astype(np.float64) * 2.0 - 1.0


def enumerate_weights(
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
    constraint: Constraint | None = None,
    cap: int = DEFAULT_CAP,
):
    """Yield (spins_chunk, log_weight_chunk) over all compatible configurations.

    ``spins_chunk`` has one full-volume row per configuration; the free-site
    pattern index runs over 0..2^n_free-1 with site order = volume order and
    bit value 1 meaning spin +1.
    """
    frozen_idx, frozen_val, free_idx = _frozen_layout(volume, constraint)
    n_free = len(free_idx)
    if n_free > cap:
        raise CapExceededError(f"{n_free} free sites exceed the cap of {cap}")
    jmat = model.coupling_matrix(volume)
    h = boundary_field_vector(volume, bc, model)
    total = 1 << n_free
    chunk = 1 << min(_CHUNK_BITS, n_free)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        spins = np.empty((stop - start, volume.size))
        if len(frozen_idx):
            spins[:, frozen_idx] = frozen_val
        spins[:, free_idx] = _chunk_spins(start, stop, n_free)
        # E = -1/2 s^T J s - s.h  (unordered pairs counted once)
        e = -0.5 * np.einsum("ci,ij,cj->c", spins, jmat, spins) - spins @ h
        yield spins, -model.beta * e


def exact_gibbs(
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
    constraint: Constraint | None = None,
    cap: int = DEFAULT_CAP,
) -> ExactResult:
    """Exact log partition function and per-site magnetization profile."""
    acc = _LogAccumulator(volume.size)
    for spins, logw in enumerate_weights(volume, bc, model, constraint, cap):
        acc.add(logw, spins)
    mag = acc.mean_spins
    magnetization = {site: float(mag[k]) for k, site in enumerate(volume.sites())}
    if constraint is not None:
        for site, s in constraint.frozen.items():
            magnetization[site] = float(s)
    return ExactResult(volume, bc.describe(), model, float(acc.log_total), magnetization)


def exact_conditional_magnetization(
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
    constraint: Constraint | None,
    site: int,
    cap: int = DEFAULT_CAP,
) -> float:
    """<sigma_site> under the constrained, normalized Gibbs measure."""
    if constraint is not None and site in constraint.frozen:
        raise PreconditionError(f"site {site} is frozen by the constraint")
    return exact_gibbs(volume, bc, model, constraint, cap).magnetization[site]


def exact_state_distribution(
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Probability of each of the 2^n states, indexed by the bit pattern
    (bit k set <=> spin +1 at the k-th site of the volume)."""
    logw = np.concatenate(
        [lw for _, lw in enumerate_weights(volume, bc, model, None, cap)]
    )
    logw -= logw.max()
    w = np.exp(logw)
    return w / w.sum()


def nested_volume_bracket(
    site: int,
    volumes: Sequence[Volume],
    bc: BoundaryCondition,
    model: CouplingModel,
    constraint: Constraint | None = None,
    cap: int = DEFAULT_CAP,
) -> list[float]:
    """<sigma_site> per volume along an ascending nested family.

    With plus boundary conditions the sequence is nonincreasing (FKG) and
    brackets the constrained-measure limit from above.
    """
    if not volumes:
        raise PreconditionError("need at least one volume")
    for smaller, larger in zip(volumes, volumes[1:]):
        if smaller.lo < larger.lo or smaller.hi > larger.hi:
            raise PreconditionError("volumes must be nested in ascending order")
    for vol in volumes:
        if site not in vol:
            raise PreconditionError(f"site {site} outside volume [{vol.lo},{vol.hi}]")
        if constraint is not None:
            constraint.validate_for(vol)
    return [
        exact_conditional_magnetization(vol, bc, model, constraint, site, cap)
        for vol in volumes
    ]
