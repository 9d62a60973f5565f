"""Spin chains, volumes, couplings and boundary conditions for the 1D
long-range ferromagnet with pair coupling J(d) = d^(-alpha) (and an optional
nearest-neighbor boost J(1) = j1).

Energy convention: the Hamiltonian is summed over *unordered* pairs counted
once,

    E = - sum_{ {i,j}, i in volume } J(|i-j|) s_i s_j,

with the second index running over the volume and over exterior sites within
``cutoff`` of the interior site.  All types are immutable; all operations are
pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import PreconditionError

MAX_VOLUME_SITES = 1 << 20


@dataclass(frozen=True)
class Volume:
    """Integer interval [lo, hi], endpoints included."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise PreconditionError(f"volume lo={self.lo} exceeds hi={self.hi}")
        if self.size > MAX_VOLUME_SITES:
            raise PreconditionError(f"volume size {self.size} exceeds cap {MAX_VOLUME_SITES}")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def sites(self) -> range:
        return range(self.lo, self.hi + 1)

    def __contains__(self, site: int) -> bool:
        return self.lo <= site <= self.hi

    def index(self, site: int) -> int:
        if site not in self:
            raise PreconditionError(f"site {site} outside volume [{self.lo},{self.hi}]")
        return site - self.lo


@dataclass(frozen=True)
class SpinConfig:
    """Assignment of +-1 spins to every site of a volume."""

    volume: Volume
    spins: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.spins) != self.volume.size:
            raise PreconditionError(
                f"{len(self.spins)} spins for a volume of {self.volume.size} sites"
            )
        if any(s not in (-1, 1) for s in self.spins):
            raise PreconditionError("spins must be +1 or -1")

    @classmethod
    def from_array(cls, volume: Volume, arr) -> "SpinConfig":
        return cls(volume, tuple(int(s) for s in arr))

    def spin_at(self, site: int) -> int:
        return self.spins[self.volume.index(site)]

    def flip(self, site: int) -> "SpinConfig":
        k = self.volume.index(site)
        spins = list(self.spins)
        spins[k] = -spins[k]
        return SpinConfig(self.volume, tuple(spins))

    def negate(self) -> "SpinConfig":
        return SpinConfig(self.volume, tuple(-s for s in self.spins))

    def as_array(self) -> np.ndarray:
        return np.array(self.spins, dtype=np.int8)


def alternating_config(volume: Volume) -> SpinConfig:
    """The configuration s_i = (-1)^i restricted to ``volume`` (+1 at even sites)."""
    return SpinConfig(volume, tuple(1 if i % 2 == 0 else -1 for i in volume.sites()))


class BcKind(Enum):
    PLUS = "plus"
    MINUS = "minus"
    FREE = "free"
    DOBRUSHIN_MINUS_PLUS = "dobrushin-mp"
    DOBRUSHIN_PLUS_MINUS = "dobrushin-pm"
    FROZEN = "frozen"


_HOMOGENEOUS_SIDED = {
    BcKind.PLUS,
    BcKind.MINUS,
    BcKind.DOBRUSHIN_MINUS_PLUS,
    BcKind.DOBRUSHIN_PLUS_MINUS,
}


@dataclass(frozen=True)
class BoundaryCondition:
    """Exterior spin assignment plus a truncation radius for the infinite sums.

    ``pattern`` (Frozen only) maps exterior sites to spins and must cover every
    exterior site within ``cutoff`` of the volume it is used with.

    ``tail_correction`` adds the continuum tail of the exterior sum beyond the
    cutoff for sides with a homogeneous sign.  It is off by default so that
    truncated sums are exactly what the examples state; engines may opt in.
    """

    kind: BcKind
    cutoff: int = 1000
    pattern: Mapping[int, int] | None = None
    tail_correction: bool = False

    def __post_init__(self) -> None:
        if self.cutoff < 1:
            raise PreconditionError("cutoff must be >= 1")
        if self.kind is BcKind.FROZEN:
            if self.pattern is None:
                raise PreconditionError("Frozen boundary condition requires a pattern")
            if any(s not in (-1, 1) for s in self.pattern.values()):
                raise PreconditionError("frozen pattern spins must be +1 or -1")
        elif self.pattern is not None:
            raise PreconditionError(f"pattern only allowed for Frozen, not {self.kind}")
        if self.tail_correction and self.kind not in _HOMOGENEOUS_SIDED:
            raise PreconditionError("tail correction requires a homogeneous-sided exterior")

    def side_signs(self) -> tuple[int, int]:
        """Homogeneous (left, right) exterior signs; 0 where not homogeneous."""
        return {
            BcKind.PLUS: (1, 1),
            BcKind.MINUS: (-1, -1),
            BcKind.FREE: (0, 0),
            BcKind.DOBRUSHIN_MINUS_PLUS: (-1, 1),
            BcKind.DOBRUSHIN_PLUS_MINUS: (1, -1),
            BcKind.FROZEN: (0, 0),
        }[self.kind]

    def exterior_spin(self, site: int, volume: Volume) -> int:
        """Spin frozen at an exterior site; 0 means free (no exterior spin)."""
        if site in volume:
            raise PreconditionError(f"site {site} is interior to [{volume.lo},{volume.hi}]")
        if self.kind is BcKind.FROZEN:
            try:
                return self.pattern[site]
            except KeyError:
                raise PreconditionError(f"frozen pattern has a gap at site {site}") from None
        left, right = self.side_signs()
        return left if site < volume.lo else right

    def flipped(self) -> "BoundaryCondition":
        """Global spin flip of the exterior assignment."""
        swap = {
            BcKind.PLUS: BcKind.MINUS,
            BcKind.MINUS: BcKind.PLUS,
            BcKind.FREE: BcKind.FREE,
            BcKind.DOBRUSHIN_MINUS_PLUS: BcKind.DOBRUSHIN_PLUS_MINUS,
            BcKind.DOBRUSHIN_PLUS_MINUS: BcKind.DOBRUSHIN_MINUS_PLUS,
            BcKind.FROZEN: BcKind.FROZEN,
        }[self.kind]
        pattern = None
        if self.pattern is not None:
            pattern = {j: -s for j, s in self.pattern.items()}
        return BoundaryCondition(swap, self.cutoff, pattern, self.tail_correction)

    def describe(self) -> str:
        return self.kind.value


def plus_bc(cutoff: int = 1000, tail_correction: bool = False) -> BoundaryCondition:
    return BoundaryCondition(BcKind.PLUS, cutoff, tail_correction=tail_correction)


def minus_bc(cutoff: int = 1000, tail_correction: bool = False) -> BoundaryCondition:
    return BoundaryCondition(BcKind.MINUS, cutoff, tail_correction=tail_correction)


def free_bc() -> BoundaryCondition:
    return BoundaryCondition(BcKind.FREE, cutoff=1)


def dobrushin_bc(cutoff: int = 1000, orientation: str = "-+") -> BoundaryCondition:
    kind = BcKind.DOBRUSHIN_MINUS_PLUS if orientation == "-+" else BcKind.DOBRUSHIN_PLUS_MINUS
    return BoundaryCondition(kind, cutoff)


def frozen_bc(pattern: Mapping[int, int], cutoff: int = 1000) -> BoundaryCondition:
    return BoundaryCondition(BcKind.FROZEN, cutoff, dict(pattern))


@dataclass(frozen=True)
class CouplingModel:
    """Decay exponent, inverse temperature and nearest-neighbor boost.

    coupling(d) = j1 for d = 1, d^(-alpha) otherwise; strictly positive.
    """

    alpha: float
    beta: float
    j1: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise PreconditionError(f"alpha must exceed 1, got {self.alpha}")
        if self.alpha > 2:
            raise PreconditionError(f"alpha must be <= 2, got {self.alpha}")
        if self.beta < 0:
            raise PreconditionError(f"beta must be >= 0, got {self.beta}")
        if self.j1 < 1:
            raise PreconditionError(f"j1 must be >= 1, got {self.j1}")

    def coupling(self, distance: int) -> float:
        if distance < 1:
            raise PreconditionError("coupling needs distance >= 1")
        return self.j1 if distance == 1 else float(distance) ** (-self.alpha)

    def coupling_table(self, dmax: int) -> np.ndarray:
        """J(d) for d = 0..dmax, with J(0) = 0."""
        d = np.arange(dmax + 1, dtype=np.float64)
        with np.errstate(divide="ignore"):
            table = d ** (-self.alpha)
        table[0] = 0.0
        if dmax >= 1:
            table[1] = self.j1
        return table

    def coupling_matrix(self, volume: Volume) -> np.ndarray:
        """Symmetric J(|i-j|) over the volume with zero diagonal."""
        sites = np.arange(volume.lo, volume.hi + 1)
        table = self.coupling_table(volume.size)
        return table[np.abs(sites[:, None] - sites[None, :])]


def _truncated_tail(cutoff: int, alpha: float) -> float:
    """sum_{d > cutoff} d^(-alpha) via Euler-Maclaurin (abs. error << 1e-12)."""
    k = float(cutoff + 1)
    integral = k ** (1.0 - alpha) / (alpha - 1.0)
    return (
        integral
        + 0.5 * k**-alpha
        + alpha / 12.0 * k ** (-alpha - 1.0)
        - alpha * (alpha + 1.0) * (alpha + 2.0) / 720.0 * k ** (-alpha - 3.0)
    )


def boundary_field(
    site: int,
    volume: Volume,
    bc: BoundaryCondition,
    model: CouplingModel,
) -> float:
    """Exterior contribution sum_{j exterior, |j-site| <= cutoff} J(site,j) s_j.

    With ``bc.tail_correction`` the analytic continuum tail beyond the cutoff is
    added for each homogeneous side.
    """
    if site not in volume:
        raise PreconditionError(f"site {site} outside volume [{volume.lo},{volume.hi}]")
    cutoff = bc.cutoff
    if bc.kind is BcKind.FREE:
        return 0.0

    total = 0.0
    if bc.kind is BcKind.FROZEN:
        for j in range(site - cutoff, volume.lo):
            total += model.coupling(site - j) * bc.exterior_spin(j, volume)
        for j in range(volume.hi + 1, site + cutoff + 1):
            total += model.coupling(j - site) * bc.exterior_spin(j, volume)
        return total

    left, right = bc.side_signs()
    # Left exterior: distances site-(lo-1) .. cutoff.
    dmin = site - volume.lo + 1
    if dmin <= cutoff:
        d = np.arange(dmin, cutoff + 1, dtype=np.float64)
        s = d**-model.alpha
        if dmin == 1:
            s[0] = model.j1
        total += left * float(s.sum())
    if bc.tail_correction:
        total += left * _truncated_tail(cutoff, model.alpha)
    # Right exterior: distances (hi+1)-site .. cutoff.
    dmin = volume.hi - site + 1
    if dmin <= cutoff:
        d = np.arange(dmin, cutoff + 1, dtype=np.float64)
        s = d**-model.alpha
        if dmin == 1:
            s[0] = model.j1
        total += right * float(s.sum())
    if bc.tail_correction:
        total += right * _truncated_tail(cutoff, model.alpha)
    return total


def boundary_field_vector(
    volume: Volume, bc: BoundaryCondition, model: CouplingModel
) -> np.ndarray:
    """boundary_field evaluated at every site of the volume."""
    return np.array(
        [boundary_field(i, volume, bc, model) for i in volume.sites()], dtype=np.float64
    )


def interior_energy(spins: np.ndarray, model: CouplingModel) -> float:
    """-sum_{i<j} J(j-i) s_i s_j within a contiguous window of spins."""
    n = len(spins)
    s = np.asarray(spins, dtype=np.float64)
    table = model.coupling_table(n)
    total = 0.0
    for d in range(1, n):
        total += table[d] * float(np.dot(s[:-d], s[d:]))
    return -total


def energy(config: SpinConfig, bc: BoundaryCondition, model: CouplingModel) -> float:
    """Total energy of ``config`` with the exterior frozen by ``bc``."""
    s = config.as_array().astype(np.float64)
    h = boundary_field_vector(config.volume, bc, model)
    return interior_energy(s, model) - float(np.dot(s, h))


def local_field(
    config: SpinConfig, site: int, bc: BoundaryCondition, model: CouplingModel
) -> float:
    """Field seen by ``site``: interior couplings plus the boundary field."""
    k = config.volume.index(site)
    s = config.as_array().astype(np.float64)
    sites = np.arange(config.volume.lo, config.volume.hi + 1)
    table = model.coupling_table(config.volume.size)
    j = table[np.abs(sites - site)]
    j[k] = 0.0
    return float(np.dot(j, s)) + boundary_field(site, config.volume, bc, model)


def delta_energy(
    config: SpinConfig, site: int, bc: BoundaryCondition, model: CouplingModel
) -> float:
    """Energy change of flipping ``site``, in O(size + cutoff)."""
    return 2.0 * config.spin_at(site) * local_field(config, site, bc, model)


def validate_frozen_coverage(volume: Volume, bc: BoundaryCondition) -> None:
    """Reject a Frozen pattern that leaves gaps within cutoff of the volume."""
    if bc.kind is not BcKind.FROZEN:
        return
    for j in range(volume.lo - bc.cutoff, volume.lo):
        if j not in bc.pattern:
            raise PreconditionError(f"frozen pattern has a gap at site {j}")
    for j in range(volume.hi + 1, volume.hi + bc.cutoff + 1):
        if j not in bc.pattern:
            raise PreconditionError(f"frozen pattern has a gap at site {j}")
