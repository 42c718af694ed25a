import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from choquard_hardy.beta_spectrum import (
    RadialBump,
    SignCase,
    beta_star,
    g_eval,
    g_prime,
    hardy_check,
    sign_classification,
    solve_beta_roots,
    sphere_area,
)
from choquard_hardy.errors import NoRealRoots
from choquard_hardy.model import hardy_constant


class TestGEval:
    def test_zero_at_origin(self):
        for N, m in [(1, 1.5), (3, 2.0), (5, 3.7)]:
            assert g_eval(0.0, N, m) == 0.0

    def test_harmonic_exponent_in_three_dim(self):
        assert g_eval(-1.0, 3, 2.0) == 0.0

    def test_maximum_value_is_hardy_constant(self):
        assert g_eval(-0.5, 3, 2.0) == 0.25

    def test_continuous_at_zero_for_small_m(self):
        # beta |beta|^(m-2) is the continuous extension sign(beta)|beta|^(m-1)
        vals = [g_eval(b, 3, 1.2) for b in (-1e-12, 1e-12)]
        assert all(abs(v) < 1e-2 for v in vals)

    @given(
        st.floats(min_value=-8, max_value=8, allow_nan=False),
        st.integers(min_value=1, max_value=6),
        st.floats(min_value=1.1, max_value=4, allow_nan=False),
    )
    def test_bounded_by_hardy_constant(self, beta, N, m):
        assert g_eval(beta, N, m) <= hardy_constant(N, m) + 1e-12

    @given(
        st.integers(min_value=1, max_value=6),
        st.floats(min_value=1.1, max_value=4, allow_nan=False),
        st.floats(min_value=0.01, max_value=4, allow_nan=False),
        st.floats(min_value=0.01, max_value=4, allow_nan=False),
    )
    def test_monotone_on_each_side_of_maximiser(self, N, m, d1, d2):
        bs = beta_star(N, m)
        lo, hi = sorted((d1, d1 + d2))
        # increasing left of the maximiser, decreasing right of it
        assert g_eval(bs - hi, N, m) <= g_eval(bs - lo, N, m) + 1e-12
        assert g_eval(bs + lo, N, m) >= g_eval(bs + hi, N, m) - 1e-12

    def test_derivative_matches_finite_difference(self):
        for beta, N, m in [(-1.3, 3, 2.0), (0.7, 2, 3.0), (-0.2, 4, 1.7)]:
            h = 1e-6
            fd = (g_eval(beta + h, N, m) - g_eval(beta - h, N, m)) / (2 * h)
            assert math.isclose(g_prime(beta, N, m), fd, rel_tol=1e-6, abs_tol=1e-6)


class TestSolveBetaRoots:
    def test_laplacian_three_dim(self):
        roots = solve_beta_roots(3, 2.0, 0.0)
        assert roots.beta_minus == pytest.approx(-1.0, abs=1e-12)
        assert roots.beta_plus == pytest.approx(0.0, abs=1e-12)

    def test_quadratic_case(self):
        roots = solve_beta_roots(3, 2.0, 3 / 16)
        assert roots.beta_minus == pytest.approx(-0.75, abs=1e-12)
        assert roots.beta_plus == pytest.approx(-0.25, abs=1e-12)

    def test_degenerate_at_hardy_constant(self):
        roots = solve_beta_roots(3, 2.0, 0.25)
        assert roots.degenerate
        assert roots.beta_minus == roots.beta_star == roots.beta_plus == -0.5

    def test_symmetric_case(self):
        roots = solve_beta_roots(2, 2.0, -1.0)
        assert roots.beta_minus == pytest.approx(-1.0, abs=1e-12)
        assert roots.beta_plus == pytest.approx(1.0, abs=1e-12)

    def test_no_real_roots_above_hardy(self):
        with pytest.raises(NoRealRoots):
            solve_beta_roots(3, 2.0, 0.3)

    @given(
        st.integers(min_value=1, max_value=6),
        st.floats(min_value=1.1, max_value=4, allow_nan=False),
        st.floats(min_value=0, max_value=6, allow_nan=False),
    )
    @settings(max_examples=200, deadline=None)
    def test_residuals_and_ordering(self, N, m, drop):
        mu = hardy_constant(N, m) - drop
        roots = solve_beta_roots(N, m, mu)
        assert roots.beta_minus <= roots.beta_star <= roots.beta_plus
        tol = 1e-9 * (1 + abs(mu))
        assert roots.residual_minus <= tol
        assert roots.residual_plus <= tol
        assert abs(g_eval(roots.beta_minus, N, m) - mu) <= tol
        assert abs(g_eval(roots.beta_plus, N, m) - mu) <= tol

    @given(
        st.integers(min_value=1, max_value=6),
        st.floats(min_value=0, max_value=6, allow_nan=False),
    )
    @settings(max_examples=200, deadline=None)
    def test_m2_matches_quadratic_formula(self, N, drop):
        mu = hardy_constant(N, 2.0) - drop
        roots = solve_beta_roots(N, 2.0, mu)
        disc = max((N - 2.0) ** 2 - 4 * mu, 0.0)
        assert abs(roots.beta_minus - (-(N - 2.0) - math.sqrt(disc)) / 2) <= 1e-10
        assert abs(roots.beta_plus - (-(N - 2.0) + math.sqrt(disc)) / 2) <= 1e-10


class TestSignClassification:
    def test_large_dimension(self):
        roots = solve_beta_roots(3, 2.0, 0.0)
        assert sign_classification(roots, 3, 2.0, 0.0) is SignCase.BOTH_NONPOSITIVE

    def test_straddle(self):
        roots = solve_beta_roots(2, 2.0, -1.0)
        assert sign_classification(roots, 2, 2.0, -1.0) is SignCase.STRADDLE_ZERO

    def test_nonnegative(self):
        roots = solve_beta_roots(2, 3.0, 0.01)
        assert sign_classification(roots, 2, 3.0, 0.01) is SignCase.BOTH_NONNEGATIVE


class TestHardyCheck:
    def test_zero_function(self):
        res = hardy_check(RadialBump(2.0, 1.0, 0.0), 3, 2.0)
        assert res == {"lhs": 0.0, "rhs": 0.0}

    def test_reference_bump_against_fine_grid(self):
        bump = RadialBump(2.0, 1.0, 1.0)
        res = hardy_check(bump, 3, 2.0)
        r = np.linspace(1.0, 3.0, 200_001)
        phi = np.array([bump(x) for x in r])
        dphi = np.array([bump.derivative(x) for x in r])
        area = sphere_area(3)
        lhs_grid = area * np.trapz(dphi**2 * r**2, r)
        rhs_grid = 0.25 * area * np.trapz(phi**2, r)
        assert res["lhs"] == pytest.approx(lhs_grid, rel=1e-6)
        assert res["rhs"] == pytest.approx(rhs_grid, rel=1e-6)
        assert res["lhs"] >= res["rhs"]

    def test_scaling_homogeneity(self):
        for m in (2.0, 2.7):
            one = hardy_check(RadialBump(3.0, 1.5, 1.0), 4, m)
            two = hardy_check(RadialBump(3.0, 1.5, 2.0), 4, m)
            assert two["lhs"] == pytest.approx(2**m * one["lhs"], rel=1e-10)
            assert two["rhs"] == pytest.approx(2**m * one["rhs"], rel=1e-10)
            assert one["lhs"] / max(one["rhs"], 1e-300) == pytest.approx(
                two["lhs"] / max(two["rhs"], 1e-300), rel=1e-8
            )

    def test_inequality_on_random_bumps(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            N = int(rng.integers(1, 6))
            m = float(rng.uniform(1.2, 3.5))
            center = float(rng.uniform(1.5, 6.0))
            bump = RadialBump(center, float(rng.uniform(0.3, center - 0.1)), float(rng.uniform(0.1, 5)))
            res = hardy_check(bump, N, m)
            assert res["lhs"] >= res["rhs"] - 1e-8 * (1 + res["lhs"])


def test_sphere_area_values():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
