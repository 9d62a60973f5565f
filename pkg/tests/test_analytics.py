import math

import numpy as np
import pytest

from dysonlab import (
    BoundReport,
    CouplingModel,
    FieldProfileSpec,
    PreconditionError,
    Volume,
    alternating_remainder,
    b_max,
    b_observable,
    boundary_field,
    boundary_tail_bound,
    boundary_tail_double_sum,
    f_alpha,
    f_alpha_prime,
    f_alpha_second,
    field_profile,
    field_profile_curve,
    frozen_bc,
    g_coefficient,
    tail_power_sum,
    zeta_alpha,
)

ZETA_15 = 2.612375348685488  # zeta(3/2), standard reference value


class TestTailSums:
    def test_zeta_reference_values(self):
        assert zeta_alpha(1.5) == pytest.approx(ZETA_15, abs=1e-12)
        assert zeta_alpha(2.0) == pytest.approx(math.pi**2 / 6.0, abs=1e-12)

    def test_tail_is_partial_sum_complement(self):
        for alpha in (1.2, 1.5, 1.9):
            head = sum(k**-alpha for k in range(1, 50))
            assert tail_power_sum(50, alpha) == pytest.approx(
                zeta_alpha(alpha) - head, abs=1e-12
            )

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            tail_power_sum(0, 1.5)
        with pytest.raises(PreconditionError):
            tail_power_sum(1, 1.0)


def pairwise_remainder_oracle(N: int, alpha: float, pairs: int = 4_000_000) -> float:
    """R_N by absolutely convergent pair summation (independent of the
    iterated-averaging implementation)."""
    m = np.arange(pairs, dtype=np.float64)
    first = N + 1 + 2 * m
    block = first**-alpha - (first + 1.0) ** -alpha
    sign = 1.0 if N % 2 == 0 else -1.0
    # Tail beyond the last pair is below (N + 2*pairs)^(-alpha).
    return sign * float(block.sum())


class TestAlternatingRemainder:
    def test_r0_closed_forms(self):
        # R_0 is the alternating zeta value eta(alpha) = (1 - 2^(1-alpha)) zeta(alpha).
        assert alternating_remainder(0, 2.0) == pytest.approx(math.pi**2 / 12.0, abs=1e-12)
        assert alternating_remainder(0, 1.5) == pytest.approx(
            (1.0 - 2.0**-0.5) * ZETA_15, abs=1e-12
        )

    @pytest.mark.parametrize("N,alpha", [(0, 1.5), (1, 1.5), (7, 1.2), (12, 1.9)])
    def test_matches_pairwise_oracle(self, N, alpha):
        oracle = pairwise_remainder_oracle(N, alpha)
        tol = (N + 8_000_000) ** -alpha + 1e-11
        assert alternating_remainder(N, alpha) == pytest.approx(oracle, abs=tol)

    def test_bound_and_sign_alternation(self):
        for alpha in (1.2, 1.5, 1.9):
            n = np.arange(1, 2000)
            r = alternating_remainder(n, alpha)
            assert np.all(np.abs(r) <= (n + 1.0) ** -alpha)
            assert np.all(np.sign(r) == np.where(n % 2 == 0, 1.0, -1.0))

    def test_vector_matches_scalar(self):
        vec = alternating_remainder(np.array([0, 3, 10]), 1.5)
        for k, n in enumerate((0, 3, 10)):
            assert vec[k] == pytest.approx(alternating_remainder(n, 1.5), abs=1e-15)


class TestFreeEnergyShape:
    def test_values_and_symmetry(self):
        assert f_alpha(0.0, 1.5) == pytest.approx(2.0, abs=1e-14)
        assert f_alpha(1.0, 1.5) == pytest.approx(math.sqrt(2.0), abs=1e-14)
        t = np.linspace(-1, 1, 101)
        assert np.allclose(f_alpha(t, 1.7), f_alpha(-t, 1.7), atol=1e-14)

    def test_derivatives(self):
        assert f_alpha_prime(0.0, 1.5) == 0.0
        assert f_alpha_prime(-1.0, 1.5) == math.inf
        assert f_alpha_prime(1.0, 1.5) == -math.inf
        assert f_alpha_second(0.0, 1.5) < 0.0
        assert f_alpha_second(1.0, 1.5) == -math.inf
        # Finite-difference check of the first derivative.
        h = 1e-6
        for theta in (-0.6, 0.1, 0.45):
            fd = (f_alpha(theta + h, 1.5) - f_alpha(theta - h, 1.5)) / (2 * h)
            assert f_alpha_prime(theta, 1.5) == pytest.approx(fd, abs=1e-6)

    @pytest.mark.parametrize("alpha", [1.42, 1.5, 1.7, 1.9])
    def test_maximum_at_zero(self, alpha):
        t = np.linspace(-1.0, 1.0, 20001)
        vals = f_alpha(t, alpha)
        assert t[int(np.argmax(vals))] == pytest.approx(0.0, abs=1e-12)
        assert np.all(vals <= f_alpha(0.0, alpha) + 1e-15)

    def test_domain_checks(self):
        with pytest.raises(PreconditionError):
            f_alpha(1.5, 1.5)
        with pytest.raises(PreconditionError):
            f_alpha(0.0, 2.0)


class TestLocalizationCoefficient:
    def test_golden_value(self):
        got = g_coefficient(1.5, 5.0, 0.5, 3.0, c1=1.0)
        assert got == pytest.approx(-4.3939248666380423e-26, rel=1e-9)

    def test_sign_flip_in_eps(self):
        # Past eps = 1/2 the restricted maximum of the shape function drops
        # below f(1/2), so at large beta the bracket turns positive.
        assert g_coefficient(1.5, 50.0, 0.9, 1.0, c1=1.0) > 0.0
        assert g_coefficient(1.5, 50.0, 0.1, 1.0, c1=1.0) < 0.0

    def test_eps_domain(self):
        with pytest.raises(PreconditionError):
            g_coefficient(1.5, 1.0, 0.0, 1.0)
        with pytest.raises(PreconditionError):
            g_coefficient(1.5, 1.0, 1.0, 1.0)


class TestExteriorInfluenceBound:
    @pytest.mark.parametrize("L1", [1, 2, 3, 8, 33, 64])
    def test_bound_satisfied(self, L1):
        for alpha in (1.2, 1.5, 1.9):
            rep = b_max(L1, alpha, j_cutoff=20_000)
            assert isinstance(rep, BoundReport)
            assert rep.satisfied
            assert rep.computed_value <= rep.analytic_bound + 1e-12
            assert rep.computed_value > 0.0

    def test_l1_equal_one_closed_form(self):
        # With a single interior site the maximizer aligns every exterior spin,
        # giving two full zeta tails up to the j-truncation deficit, which for
        # L1 = 1 is exactly the two omitted power tails.
        cutoff = 100_000
        for alpha in (1.3, 1.7):
            rep = b_max(1, alpha, j_cutoff=cutoff)
            target = 2.0 * zeta_alpha(alpha)
            deficit = 2.2 * tail_power_sum(cutoff, alpha)
            assert rep.computed_value <= target + 1e-9
            assert rep.computed_value == pytest.approx(target, abs=deficit + 1e-9)

    def test_doubling_within_allowance(self):
        for alpha in (1.3, 1.5, 1.9):
            for L1 in (4, 16, 64):
                a = b_max(L1, alpha, j_cutoff=20_000).computed_value
                b = b_max(2 * L1, alpha, j_cutoff=20_000).computed_value
                assert abs(b - a) <= 2.0 * tail_power_sum(L1 + 1, alpha) + 1e-9

    def test_maximizer_beats_random_configs(self, rng):
        L1, alpha, K = 4, 1.9, 1500
        right = list(range(0, K))
        left = list(range(-L1 - K, -L1))
        maximizer = {j: -1 for j in right}
        maximizer.update({j: 1 for j in left})  # L1 even -> plus on the left
        best = b_observable(maximizer, L1, alpha, tol=1e-2)
        assert best == pytest.approx(b_max(L1, alpha).computed_value, abs=1e-2)
        for _ in range(100):
            w = {j: int(s) for j, s in zip(right + left,
                                           rng.choice((-1, 1), size=2 * K))}
            assert b_observable(w, L1, alpha, tol=1e-2) <= best + 1e-12

    def test_b_observable_validation(self):
        with pytest.raises(PreconditionError):
            b_observable({-2: 1}, 4, 1.5)  # interior site
        with pytest.raises(PreconditionError):
            b_observable({0: 2}, 4, 1.5)  # bad spin
        with pytest.raises(PreconditionError):
            b_observable({0: 1}, 4, 1.5, tol=1e-9)  # support too small

    def test_bound_report_consistency_check(self):
        with pytest.raises(PreconditionError):
            BoundReport(2.0, 1.0, True)


class TestFieldProfile:
    SPEC = dict(L=3, N=64, n=150, alpha=1.9)

    def test_annulus_sign_difference(self):
        # Flipping the annulus sign changes h_x by exactly twice the annulus
        # block sum_{k=L+1}^N (k+x)^(-alpha).
        minus = FieldProfileSpec(annulus_sign=-1, **self.SPEC)
        plus = FieldProfileSpec(annulus_sign=1, **self.SPEC)
        for x in (0, 3, 40):
            k = np.arange(self.SPEC["L"] + 1, self.SPEC["N"] + 1, dtype=np.float64)
            block = float(np.sum((k + x) ** -self.SPEC["alpha"]))
            diff = field_profile(plus, x) - field_profile(minus, x)
            # Without an explicit far pattern the far block k = N..n rides
            # along with the annulus sign too.
            kf = np.arange(self.SPEC["N"], self.SPEC["n"] + 1, dtype=np.float64)
            far_block = float(np.sum((kf + x) ** -self.SPEC["alpha"]))
            assert diff == pytest.approx(2.0 * (block + far_block), abs=1e-12)

    def test_far_pattern_override(self):
        base = FieldProfileSpec(**self.SPEC)
        n, N = self.SPEC["n"], self.SPEC["N"]
        explicit = FieldProfileSpec(far_pattern=tuple([-1] * (n - N + 1)), **self.SPEC)
        assert field_profile(base, 5) == pytest.approx(field_profile(explicit, 5), abs=1e-14)

    def test_decay_at_large_x(self):
        spec = FieldProfileSpec(**self.SPEC)
        xs = (0, 10, 100, 1000, 10_000)
        vals = np.abs(field_profile_curve(spec, xs))
        assert vals[-1] < 1e-3
        assert vals[-1] < vals[-2] < vals[-3]

    def test_matches_boundary_field_at_origin(self):
        # Reconstruct the same one-sided past as a frozen exterior pattern of
        # the volume [0, n] and compare at x = 0.  The profile formula counts
        # the site at distance N twice (its far block starts at N), so one
        # copy is removed before comparing; the truncated exterior sum is
        # completed with the analytic remainder of both plus tails.
        L, N, n, alpha = (self.SPEC[k] for k in ("L", "N", "n", "alpha"))
        for sign in (-1, 1):
            spec = FieldProfileSpec(annulus_sign=sign, **self.SPEC)
            cutoff = n + 5000
            pattern = {}
            for k in range(1, cutoff + 1):
                if k <= L:
                    pattern[-k] = 1 if k % 2 == 0 else -1
                elif k <= n:
                    pattern[-k] = sign
                else:
                    pattern[-k] = 1
            for k in range(n + 1, cutoff + 1):
                pattern[k] = 1
            model = CouplingModel(alpha, 1.0, 1.0)
            field = boundary_field(0, Volume(0, n), frozen_bc(pattern, cutoff), model)
            field += 2.0 * tail_power_sum(cutoff + 1, alpha)
            assert field_profile(spec, 0) - sign * float(N) ** -alpha == pytest.approx(
                field, abs=1e-10
            )

    def test_validation(self):
        with pytest.raises(PreconditionError):
            FieldProfileSpec(L=5, N=5, n=9, alpha=1.5)
        with pytest.raises(PreconditionError):
            FieldProfileSpec(L=1, N=2, n=3, alpha=1.5, annulus_sign=0)
        with pytest.raises(PreconditionError):
            FieldProfileSpec(L=1, N=2, n=4, alpha=1.5, far_pattern=(1, 1))
        with pytest.raises(PreconditionError):
            field_profile(FieldProfileSpec(L=1, N=2, n=3, alpha=1.5), -1)


class TestBoundaryTail:
    def test_bound_dominates_exact_sum(self):
        for L, N, alpha in ((2, 50, 1.5), (4, 200, 1.3), (8, 1000, 1.9)):
            assert boundary_tail_double_sum(L, N, alpha) <= boundary_tail_bound(L, N, alpha)

    def test_scaling(self):
        assert boundary_tail_bound(8, 100, 1.5) == pytest.approx(
            4.0 * boundary_tail_bound(2, 100, 1.5), abs=1e-12
        )
        assert boundary_tail_bound(2, 400, 1.5) < boundary_tail_bound(2, 100, 1.5)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            boundary_tail_bound(0, 10, 1.5)
        with pytest.raises(PreconditionError):
            boundary_tail_bound(1, 10, 1.0)
