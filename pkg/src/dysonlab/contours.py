"""Triangle construction over spin-flip points and the interface observable.

Spin-flip points live on the dual lattice (half-integers).  Each one gets a
deterministically perturbed base so all pairwise base distances are distinct;
the diagram is built by repeatedly pairing the two closest remaining bases.
Under Dobrushin boundary conditions the flip count is odd and the leftover
point is the interface.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import CapExceededError, PreconditionError
from .exact import DEFAULT_CAP, enumerate_weights
from .lattice import (
    BcKind,
    BoundaryCondition,
    CouplingModel,
    SpinConfig,
    Volume,
)
from .mc import McParams, mc_sample_array

_KAPPA = 1e-3

_DOBRUSHIN_KINDS = {BcKind.DOBRUSHIN_MINUS_PLUS, BcKind.DOBRUSHIN_PLUS_MINUS}


def _hash_unit(k: int) -> float:
    """Deterministic hash of an integer into [0, 1) with 53 random-looking bits.

    An additive low-discrepancy sequence (e.g. frac(k * golden)) is unusable
    here: its increments at a fixed lag take only two values, so pairs of
    points at equal integer separation get exactly equal perturbed distances.
    A mixing finalizer has no such additive structure.
    """
    z = (k * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 31
    return (z >> 11) / float(1 << 53)


def _perturbation(rank: int) -> float:
    """Deterministic, seed-free offset in (-1/100, 1/100), distinct per rank."""
    return _KAPPA * (_hash_unit(rank + 1) - 0.5) / 50.0


@dataclass(frozen=True)
class FlipPoint:
    """A dual-lattice site between two unequal spins.

    ``double_position`` is twice the half-integer position (always odd).
    """

    double_position: int
    perturbed_base: float

    def __post_init__(self) -> None:
        if self.double_position % 2 == 0:
            raise PreconditionError("flip position must be a half-integer")
        if abs(self.perturbed_base - self.position) > 0.01:
            raise PreconditionError("perturbed base strays more than 1/100 from the position")

    @property
    def position(self) -> float:
        return self.double_position / 2.0


@dataclass(frozen=True)
class TriangleDiagram:
    """Non-crossing pairing of flip points, plus the unpaired interface point."""

    triangles: tuple[tuple[FlipPoint, FlipPoint], ...]
    interface: FlipPoint | None

    def validate(self) -> None:
        spans = []
        for left, right in self.triangles:
            if left.double_position >= right.double_position:
                raise PreconditionError("triangle vertices out of order")
            spans.append((left.double_position, right.double_position))
        for a, b in spans:
            for c, d in spans:
                if (a, b) >= (c, d):
                    continue
                nested = (c > a and d < b) or (a > c and b < d)
                disjoint = b < c or d < a
                if not (nested or disjoint):
                    raise PreconditionError("triangles cross")


@dataclass(frozen=True)
class ThetaGrid:
    """Admissible interface locations: odd multiples of 1/(2L)."""

    L: int

    def __post_init__(self) -> None:
        if self.L < 1:
            raise PreconditionError("L must be >= 1")

    @property
    def values(self) -> tuple[float, ...]:
        return tuple((2 * j + 1) / (2 * self.L) for j in range(-self.L - 1, self.L + 1))

    def snap(self, theta: float) -> float:
        vals = self.values
        k = min(range(len(vals)), key=lambda j: abs(vals[j] - theta))
        return vals[k]


def _edge_spins(config: SpinConfig, bc: BoundaryCondition) -> tuple[int, int]:
    vol = config.volume
    if bc.kind is BcKind.FREE:
        # No exterior spins: edge flips cannot occur.
        return config.spins[0], config.spins[-1]
    return bc.exterior_spin(vol.lo - 1, vol), bc.exterior_spin(vol.hi + 1, vol)


def _flip_double_positions(spins: Iterable[int], left: int, right: int, lo: int) -> list[int]:
    ext = [left, *spins, right]
    return [
        2 * (lo - 1 + k) + 1
        for k in range(len(ext) - 1)
        if ext[k] != ext[k + 1]
    ]


def spin_flip_points(config: SpinConfig, bc: BoundaryCondition) -> list[FlipPoint]:
    """Ordered dual sites where the spin changes, boundary spins included."""
    left, right = _edge_spins(config, bc)
    doubled = _flip_double_positions(config.spins, left, right, config.volume.lo)
    points = [
        FlipPoint(dp, dp / 2.0 + _perturbation(rank))
        for rank, dp in enumerate(doubled)
    ]
    _check_distinct_distances([p.perturbed_base for p in points])
    return points


def _check_distinct_distances(bases: list[float]) -> None:
    dists = sorted(
        abs(bases[a] - bases[b])
        for a in range(len(bases))
        for b in range(a + 1, len(bases))
    )
    for x, y in zip(dists, dists[1:]):
        if x == y:
            raise PreconditionError("perturbed bases yield a repeated pairwise distance")


def _match_bases(bases: list[float]) -> tuple[list[tuple[int, int]], int | None]:
    """Pair indices of the two closest bases, repeatedly; return leftover index."""
    m = len(bases)
    prev = list(range(-1, m - 1))
    nxt = list(range(1, m + 1))
    alive = [True] * m
    heap = [(bases[k + 1] - bases[k], k, k + 1) for k in range(m - 1)]
    heapq.heapify(heap)
    pairs: list[tuple[int, int]] = []
    removed = 0
    while heap and removed < m - 1:
        _, a, b = heapq.heappop(heap)
        if not (alive[a] and alive[b] and nxt[a] == b):
            continue
        alive[a] = alive[b] = False
        removed += 2
        pa, nb = prev[a], nxt[b]
        if pa >= 0:
            nxt[pa] = nb
        if nb < m:
            prev[nb] = pa
        if pa >= 0 and nb < m:
            heapq.heappush(heap, (bases[nb] - bases[pa], pa, nb))
        pairs.append((a, b))
    leftover = next((k for k in range(m) if alive[k]), None)
    return pairs, leftover


def build_triangles(flips: list[FlipPoint]) -> TriangleDiagram:
    """Iteratively pair the two flip points at minimal base distance."""
    bases = [p.perturbed_base for p in flips]
    if any(b >= c for b, c in zip(bases, bases[1:])):
        raise PreconditionError("flip points must be ordered by base")
    _check_distinct_distances(bases)
    pairs, leftover = _match_bases(bases)
    diagram = TriangleDiagram(
        tuple((flips[a], flips[b]) for a, b in pairs),
        flips[leftover] if leftover is not None else None,
    )
    diagram.validate()
    return diagram


def _interface_double_position(spins, left: int, right: int, lo: int) -> int:
    doubled = _flip_double_positions(spins, left, right, lo)
    bases = [dp / 2.0 + _perturbation(rank) for rank, dp in enumerate(doubled)]
    _, leftover = _match_bases(bases)
    if leftover is None:
        raise PreconditionError("even flip count: no interface point")
    return doubled[leftover]


def interface_point(config: SpinConfig, bc: BoundaryCondition) -> float:
    """The unique unpaired flip position under Dobrushin boundary conditions."""
    if bc.kind not in _DOBRUSHIN_KINDS:
        raise PreconditionError("interface point requires a Dobrushin boundary condition")
    left, right = _edge_spins(config, bc)
    return _interface_double_position(config.spins, left, right, config.volume.lo) / 2.0


def _require_centered(volume: Volume) -> int:
    if volume.lo != -volume.hi or volume.hi < 1:
        raise PreconditionError("interface statistics need a centered volume [-L, L]")
    return volume.hi


@dataclass(frozen=True)
class InterfaceHistogram:
    grid: ThetaGrid
    probabilities: dict[float, float]
    std_errors: dict[float, float] | None
    n_samples: int | None

    def escape_probability(self, eps: float) -> float:
        return sum(p for theta, p in self.probabilities.items() if abs(theta) > eps)


def _theta_index(double_pos: int, L: int) -> int:
    # double_pos = 2*theta*L, odd; grid index over 2L+2 bins.
    return (double_pos + 2 * L + 1) // 2


def interface_histogram(
    volume: Volume,
    model: CouplingModel,
    bc: BoundaryCondition | None = None,
    engine: str = "exact",
    params: McParams | None = None,
    cap: int = DEFAULT_CAP,
) -> InterfaceHistogram:
    """Distribution of theta = I*/L over the admissible grid."""
    L = _require_centered(volume)
    bc = bc or BoundaryCondition(BcKind.DOBRUSHIN_MINUS_PLUS)
    if bc.kind not in _DOBRUSHIN_KINDS:
        raise PreconditionError("interface histogram requires a Dobrushin boundary condition")
    grid = ThetaGrid(L)
    lv, rv = bc.side_signs()
    nbins = 2 * L + 2

    if engine == "exact":
        mass = np.zeros(nbins)
        shift = None
        for spins, logw in enumerate_weights(volume, bc, model, None, cap):
            m = float(logw.max())
            if shift is None:
                shift = m
            elif m > shift:
                mass *= math.exp(shift - m)
                shift = m
            w = np.exp(logw - shift)
            rows = spins.astype(np.int8)
            for r in range(rows.shape[0]):
                dp = _interface_double_position(rows[r], lv, rv, volume.lo)
                mass[_theta_index(dp, L)] += w[r]
        probs = mass / mass.sum()
        return InterfaceHistogram(
            grid,
            {theta: float(p) for theta, p in zip(grid.values, probs)},
            None,
            None,
        )

    if engine != "mc":
        raise PreconditionError(f"unknown engine {engine!r}")
    if params is None:
        raise PreconditionError("mc engine requires params")
    if params.chains < 2:
        raise PreconditionError("error bars need chains >= 2")
    freqs = np.empty((params.chains, nbins))
    for chain in range(params.chains):
        counts = np.zeros(nbins)
        samples = mc_sample_array(volume, bc, model, None, params, chain)
        for row in samples:
            dp = _interface_double_position(row, lv, rv, volume.lo)
            counts[_theta_index(dp, L)] += 1
        freqs[chain] = counts / counts.sum()
    probs = freqs.mean(axis=0)
    sems = freqs.std(axis=0, ddof=1) / np.sqrt(params.chains)
    n_total = params.chains * params.samples_per_chain
    return InterfaceHistogram(
        grid,
        {theta: float(p) for theta, p in zip(grid.values, probs)},
        {theta: float(s) for theta, s in zip(grid.values, sems)},
        n_total,
    )


def conditional_profile(
    volume: Volume,
    model: CouplingModel,
    theta: float,
    engine: str = "exact",
    bc: BoundaryCondition | None = None,
    params: McParams | None = None,
    cap: int = DEFAULT_CAP,
) -> dict[int, float]:
    """<sigma_i | I* = theta L> per site."""
    L = _require_centered(volume)
    bc = bc or BoundaryCondition(BcKind.DOBRUSHIN_MINUS_PLUS)
    if bc.kind not in _DOBRUSHIN_KINDS:
        raise PreconditionError("conditional profile requires a Dobrushin boundary condition")
    theta = ThetaGrid(L).snap(theta)
    target = int(round(2 * theta * L))
    lv, rv = bc.side_signs()

    if engine == "exact":
        z = 0.0
        spin_sum = np.zeros(volume.size)
        shift = None
        for spins, logw in enumerate_weights(volume, bc, model, None, cap):
            if shift is None:
                shift = float(logw.max())
            m = float(logw.max())
            if m > shift:
                scale = math.exp(shift - m)
                z *= scale
                spin_sum *= scale
                shift = m
            w = np.exp(logw - shift)
            rows = spins.astype(np.int8)
            for r in range(rows.shape[0]):
                if _interface_double_position(rows[r], lv, rv, volume.lo) == target:
                    z += w[r]
                    spin_sum += w[r] * spins[r]
        if z == 0.0:
            raise PreconditionError(f"no configuration has its interface at theta={theta}")
        prof = spin_sum / z
        return {site: float(prof[k]) for k, site in enumerate(volume.sites())}

    if engine != "mc":
        raise PreconditionError(f"unknown engine {engine!r}")
    if params is None:
        raise PreconditionError("mc engine requires params")
    count = 0
    spin_sum = np.zeros(volume.size)
    for chain in range(params.chains):
        for row in mc_sample_array(volume, bc, model, None, params, chain):
            if _interface_double_position(row, lv, rv, volume.lo) == target:
                count += 1
                spin_sum += row
    if count == 0:
        raise PreconditionError(f"no sampled configuration has its interface at theta={theta}")
    prof = spin_sum / count
    return {site: float(prof[k]) for k, site in enumerate(volume.sites())}
