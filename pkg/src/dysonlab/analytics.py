"""Closed-form quantities: the interface free-energy shape f_alpha and its
derivatives, the localization coefficient g(alpha, beta), alternating tail
remainders, the exterior-influence observable B and its uniform bound, the
one-sided external-field profiles h_x, and the boundary-energy tail bound.

Infinite power-law tails are evaluated by partial sums plus an Euler-Maclaurin
closure accurate to well below 1e-12 for alpha > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import PreconditionError

_EM_TERMS = 256


def tail_power_sum(start: float, alpha: float) -> float:
    """sum_{k >= start} k^(-alpha) for integer start >= 1 (Euler-Maclaurin)."""
    if start < 1:
        raise PreconditionError("tail starts at k >= 1")
    if alpha <= 1:
        raise PreconditionError("alpha must exceed 1")
    start = int(start)
    base = start + _EM_TERMS
    k = np.arange(start, base, dtype=np.float64)
    head = float(np.sum(k**-alpha)) if len(k) else 0.0
    x = float(base)
    tail = (
        x ** (1.0 - alpha) / (alpha - 1.0)
        + 0.5 * x**-alpha
        + alpha / 12.0 * x ** (-alpha - 1.0)
        - alpha * (alpha + 1.0) * (alpha + 2.0) / 720.0 * x ** (-alpha - 3.0)
    )
    return head + tail


def zeta_alpha(alpha: float) -> float:
    """Riemann zeta at alpha > 1."""
    return tail_power_sum(1, alpha)


def f_alpha(theta, alpha: float):
    """(1+theta)^(2-alpha) + (1-theta)^(2-alpha) on [-1, 1]."""
    _check_theta_alpha(theta, alpha)
    t = np.asarray(theta, dtype=np.float64)
    out = (1.0 + t) ** (2.0 - alpha) + (1.0 - t) ** (2.0 - alpha)
    return float(out) if np.isscalar(theta) else out


def f_alpha_prime(theta, alpha: float):
    """First derivative; one-sided +-inf at theta = -+1."""
    _check_theta_alpha(theta, alpha)
    t = np.asarray(theta, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = (2.0 - alpha) * ((1.0 + t) ** (1.0 - alpha) - (1.0 - t) ** (1.0 - alpha))
    out = np.where(t == 1.0, -np.inf, out)
    out = np.where(t == -1.0, np.inf, out)
    return float(out) if np.isscalar(theta) else out


def f_alpha_second(theta, alpha: float):
    """Second derivative; strictly negative on (-1, 1), -inf at the endpoints."""
    _check_theta_alpha(theta, alpha)
    t = np.asarray(theta, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = (2.0 - alpha) * (1.0 - alpha) * ((1.0 + t) ** -alpha + (1.0 - t) ** -alpha)
    out = np.where(np.abs(t) == 1.0, -np.inf, out)
    return float(out) if np.isscalar(theta) else out


def _check_theta_alpha(theta, alpha: float) -> None:
    if not 1.0 < alpha < 2.0:
        raise PreconditionError("f_alpha needs 1 < alpha < 2")
    if np.any(np.abs(np.asarray(theta, dtype=np.float64)) > 1.0):
        raise PreconditionError("|theta| must be <= 1")


def g_coefficient(
    alpha: float,
    beta: float,
    eps: float,
    j1: float,
    c1: float = 1.0,
    grid_points: int = 20001,
) -> float:
    """Localization exponent coefficient

    g = exp(-2 beta (zeta(alpha)+J)) / ((2-alpha)(alpha-1))
        * [ f(1/2) (1 - e^{-c1 beta}) - M (1 + e^{-c1 beta}) ],

    with M the maximum of f_alpha over |theta| > eps (fine grid).
    The error-rate constant c1 is a caller-supplied parameter.
    """
    if not 0.0 < eps < 1.0:
        raise PreconditionError("eps must lie in (0, 1)")
    thetas = np.linspace(-1.0, 1.0, grid_points)
    mask = np.abs(thetas) > eps
    m_alpha = float(f_alpha(thetas[mask], alpha).max())
    x = math.exp(-c1 * beta)
    prefactor = math.exp(-2.0 * beta * (zeta_alpha(alpha) + j1))
    prefactor /= (2.0 - alpha) * (alpha - 1.0)
    return prefactor * (f_alpha(0.5, alpha) * (1.0 - x) - m_alpha * (1.0 + x))


def alternating_remainder(N, alpha: float):
    """R_N = sum_{n > N} (-1)^(n+1) n^(-alpha), |error| < 1e-14.

    Evaluated by iterated averaging of the partial sums of the alternating
    tail, which converges geometrically for this totally monotone term
    sequence; satisfies |R_N| <= (N+1)^(-alpha) for N >= 1.
    """
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    n_arr = np.atleast_1d(np.asarray(N, dtype=np.int64))
    if np.any(n_arr < 0):
        raise PreconditionError("N must be >= 0")
    depth = 60
    # terms a_j = (N+1+j)^(-alpha), series sum_j (-1)^j a_j
    j = np.arange(depth + 1, dtype=np.float64)
    a = (n_arr[:, None] + 1.0 + j[None, :]) ** (-alpha)
    partial = np.cumsum(a * ((-1.0) ** j)[None, :], axis=1)
    while partial.shape[1] > 1:
        partial = 0.5 * (partial[:, :-1] + partial[:, 1:])
    tail = partial[:, 0]
    out = np.where(n_arr % 2 == 0, tail, -tail)
    return float(out[0]) if np.isscalar(N) or np.asarray(N).ndim == 0 else out


def _alternating_block_sum(j: np.ndarray, L1: int, alpha: float) -> np.ndarray:
    """sum_{i=1..L1} (-1)^(i+1) (j+i)^(-alpha) = R_j - R_{L1+j}, vectorized."""
    return alternating_remainder(j, alpha) - alternating_remainder(j + L1, alpha)


def b_observable(
    config_exterior: Mapping[int, int],
    L1: int,
    alpha: float,
    tol: float = 1e-6,
) -> float:
    """B = sum_{j outside [-L1,-1]} sum_{i in [-L1,-1]} (-1)^i |i-j|^(-alpha) w_j.

    ``config_exterior`` maps sites j outside [-L1, -1] to spins; the double
    sum is truncated to its support.  Raises if the omitted tail could exceed
    ``tol``.
    """
    if L1 < 1:
        raise PreconditionError("L1 must be >= 1")
    i = np.arange(-L1, 0, dtype=np.float64)
    signs = (-1.0) ** np.abs(i)
    total = 0.0
    max_right = -1
    min_left = 0
    for j, w in config_exterior.items():
        if -L1 <= j <= -1:
            raise PreconditionError(f"site {j} is inside [-L1, -1]")
        if w not in (-1, 1):
            raise PreconditionError("exterior spins must be +1 or -1")
        total += w * float(np.sum(signs * np.abs(i - j) ** (-alpha)))
        max_right = max(max_right, j)
        min_left = min(min_left, j)
    # Tail allowance: each omitted |inner sum| <= (d+1)^-a + (L1+d+1)^-a.
    right_gap = max(max_right + 1, 0)
    left_gap = max(-L1 - min_left, 1)
    allowance = 2.0 * (tail_power_sum(right_gap + 1, alpha) + tail_power_sum(left_gap + 1, alpha))
    if allowance > tol:
        raise PreconditionError(
            f"exterior support too small: tail allowance {allowance:.3g} exceeds tol {tol:.3g}"
        )
    return total


@dataclass(frozen=True)
class BoundReport:
    computed_value: float
    analytic_bound: float
    satisfied: bool

    def __post_init__(self) -> None:
        expect = self.computed_value <= self.analytic_bound + 1e-12
        if self.satisfied != expect:
            raise PreconditionError("satisfied flag inconsistent with the values")


def b_max(L1: int, alpha: float, j_cutoff: int = 100_000) -> BoundReport:
    """B evaluated at its maximizing exterior configuration, with the uniform
    analytic bound 2 zeta(alpha) + 2 sum_{m > L1} m^(-alpha).

    Maximizer: w_j = -1 for j >= 0; for j < -L1, +1 when L1 is even and
    -1 when L1 is odd.
    """
    if L1 < 1:
        raise PreconditionError("L1 must be >= 1")
    j = np.arange(0, j_cutoff, dtype=np.int64)
    # Right part (j >= 0, w_j = -1): the inner block sum against site j is
    # -(-1)^j (R_j - R_{L1+j}) and has constant sign, so the maximized
    # contribution is sum_j (-1)^j [R_j - R_{L1+j}].
    sign_j = np.where(j % 2 == 0, 1.0, -1.0)
    right = float(np.sum(sign_j * _alternating_block_sum(j, L1, alpha)))
    # Left part (sites -L1-m, m >= 1): inner alternating sum against the
    # parity-chosen spin (+1 for even L1, -1 for odd).
    m = np.arange(1, j_cutoff, dtype=np.int64)
    spin = 1.0 if L1 % 2 == 0 else -1.0
    left = spin * float(np.sum(_left_inner(m, L1, alpha)))
    computed = right + left
    bound = 2.0 * zeta_alpha(alpha) + 2.0 * tail_power_sum(L1 + 1, alpha)
    return BoundReport(computed, bound, computed <= bound + 1e-12)


def _left_inner(m: np.ndarray, L1: int, alpha: float) -> np.ndarray:
    """sum_{i=1..L1} (-1)^i (L1 + m - i)^(-alpha) for each m >= 1.

    Equals (-1)^(L1+m+1) (R_{m-1} - R_{m+L1-1}).
    """
    sign = np.where((L1 + m + 1) % 2 == 0, 1.0, -1.0)
    return sign * (
        alternating_remainder(m - 1, alpha) - alternating_remainder(m + L1 - 1, alpha)
    )


@dataclass(frozen=True)
class FieldProfileSpec:
    """Parameters of the one-sided external-field profile h_x.

    The past decomposes into an alternating block of length ``L``, an annulus
    of ``annulus_sign`` spins out to ``N``, an explicit pattern out to ``n``,
    and a homogeneous plus tail beyond ``n`` counted with weight 2 (both far
    boundaries).
    """

    L: int
    N: int
    n: int
    alpha: float
    annulus_sign: int = -1
    far_pattern: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not (0 < self.L < self.N < self.n):
            raise PreconditionError("need 0 < L < N < n")
        if self.annulus_sign not in (-1, 1):
            raise PreconditionError("annulus_sign must be +1 or -1")
        if not 1.0 < self.alpha <= 2.0:
            raise PreconditionError("alpha must lie in (1, 2]")
        if self.far_pattern is not None:
            if len(self.far_pattern) != self.n - self.N + 1:
                raise PreconditionError("far_pattern must cover k = N..n")
            if any(s not in (-1, 1) for s in self.far_pattern):
                raise PreconditionError("far_pattern spins must be +1 or -1")

    def far(self) -> np.ndarray:
        if self.far_pattern is not None:
            return np.array(self.far_pattern, dtype=np.float64)
        return np.full(self.n - self.N + 1, float(self.annulus_sign))


def field_profile(spec: FieldProfileSpec, x: int) -> float:
    """h_x = sum_{k=1}^L (-1)^k (k+x)^-a + s sum_{k=L+1}^N (k+x)^-a
             + sum_{k=N}^n w_{-k} (k+x)^-a + 2 sum_{k>n} (k+x)^-a."""
    if x < 0:
        raise PreconditionError("x must be >= 0")
    a = spec.alpha
    k1 = np.arange(1, spec.L + 1, dtype=np.float64)
    term1 = float(np.sum(((-1.0) ** k1) * (k1 + x) ** -a))
    k2 = np.arange(spec.L + 1, spec.N + 1, dtype=np.float64)
    term2 = spec.annulus_sign * float(np.sum((k2 + x) ** -a))
    k3 = np.arange(spec.N, spec.n + 1, dtype=np.float64)
    term3 = float(np.sum(spec.far() * (k3 + x) ** -a))
    term4 = 2.0 * tail_power_sum(spec.n + 1 + x, a)
    return term1 + term2 + term3 + term4


def field_profile_curve(spec: FieldProfileSpec, xs: Sequence[int]) -> np.ndarray:
    return np.array([field_profile(spec, int(x)) for x in xs])


def boundary_tail_bound(L: int, N: int, alpha: float) -> float:
    """(3/(alpha-1)) L N^(1-alpha), the continuum bound on the boundary energy."""
    if L < 1 or N < 1:
        raise PreconditionError("need L >= 1 and N >= 1")
    if alpha <= 1:
        raise PreconditionError("alpha must exceed 1")
    return 3.0 / (alpha - 1.0) * L * float(N) ** (1.0 - alpha)


def boundary_tail_double_sum(L: int, N: int, alpha: float) -> float:
    """Exact sum_{j < -N} sum_{i=0..2L} |i-j|^(-alpha) (companion to the bound)."""
    if L < 1 or N < 1:
        raise PreconditionError("need L >= 1 and N >= 1")
    return sum(tail_power_sum(N + 1 + i, alpha) for i in range(0, 2 * L + 1))
