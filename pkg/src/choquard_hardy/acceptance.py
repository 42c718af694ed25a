"""Acceptance criteria, runnable as named suites.

Each suite draws its randomness from a seeded generator, checks its criterion
at the stated tolerance and reports a one-line detail.  The CLI `selftest`
command and the pytest acceptance module both run these.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .beta_spectrum import RadialBump, beta_star, g_eval, hardy_check, solve_beta_roots
from .classifier import WITNESS_PREDICATES, Outcome, classify
from .cli import RegionScanSpec, run_region_scan
from .construct_verify import existence_certificate
from .errors import BudgetExhausted, EmptyInterval
from .model import ComparisonPolicy, ProblemParams, hardy_constant
from .radial_calculus import RadialProfile, fd_radial_operator, operator_exact
from .riesz import (
    RadialFunction,
    power_lower_bound,
    power_upper_bounds,
    riesz_convolve_radial,
    sphere_area,
)

DEFAULT_SEED = 20250811


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _result(name: str, started: float, passed: bool, detail: str) -> SuiteResult:
    return SuiteResult(name, passed, detail, time.time() - started)


# ---------------------------------------------------------------------------
# 1. Root solver: residuals, ordering, m=2 closed form.


def suite_root_solver(seed: int) -> SuiteResult:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_resid = 0.0
    worst_quad = 0.0
    for i in range(1000):
        N = int(rng.integers(1, 7))
        m = 2.0 if i % 3 == 0 else float(rng.uniform(1.1, 4.0))
        ch = hardy_constant(N, m)
        mu = ch if i % 50 == 0 else ch - float(rng.uniform(0.0, 5.0))
        roots = solve_beta_roots(N, m, mu)
        tol = 1e-9 * (1 + abs(mu))
        if roots.residual_minus > tol or roots.residual_plus > tol:
            return _result("root_solver", t0, False, f"residual above {tol} at {(N, m, mu)}")
        if not roots.beta_minus <= roots.beta_star <= roots.beta_plus:
            return _result("root_solver", t0, False, f"ordering violated at {(N, m, mu)}")
        worst_resid = max(worst_resid, roots.residual_minus, roots.residual_plus)
        if m == 2.0:
            disc = max((N - 2.0) ** 2 - 4.0 * mu, 0.0)
            exact_minus = (-(N - 2.0) - math.sqrt(disc)) / 2.0
            exact_plus = (-(N - 2.0) + math.sqrt(disc)) / 2.0
            dev = max(abs(roots.beta_minus - exact_minus), abs(roots.beta_plus - exact_plus))
            worst_quad = max(worst_quad, dev)
            if dev > 1e-10:
                return _result("root_solver", t0, False, f"m=2 deviation {dev} at {(N, mu)}")
    return _result(
        "root_solver",
        t0,
        True,
        f"1000 draws: max residual {worst_resid:.2e}, max m=2 deviation {worst_quad:.2e}",
    )


# ---------------------------------------------------------------------------
# 2. Indicial function bounded by the Hardy constant.


def suite_indicial_bound(seed: int) -> SuiteResult:
    t0 = time.time()
    rng = np.random.default_rng(seed + 1)
    worst_gap = math.inf
    for _ in range(10_000):
        N = int(rng.integers(1, 7))
        m = float(rng.uniform(1.1, 4.0))
        bs = beta_star(N, m)
        beta = bs + float(rng.normal(0.0, 3.0))
        ch = hardy_constant(N, m)
        g = g_eval(beta, N, m)
        if g > ch + 1e-12:
            return _result("indicial_bound", t0, False, f"G({beta}) = {g} > C_H = {ch}")
        if ch - g <= 1e-12 and abs(beta - bs) > 1e-6:
            return _result(
                "indicial_bound", t0, False, f"near-equality away from the maximiser at {beta}"
            )
        worst_gap = min(worst_gap, ch - g)
    return _result("indicial_bound", t0, True, f"10000 draws, min slack {worst_gap:.2e}")


# ---------------------------------------------------------------------------
# 3. Closed-form radial operator vs finite-difference oracle.


def _random_power_profile(rng) -> tuple[RadialProfile, int, float, float]:
    N = int(rng.integers(1, 6))
    m = float(rng.uniform(1.5, 3.0))
    gamma = float(rng.uniform(-3.0, -0.1))
    mu = float(rng.uniform(-2.0, hardy_constant(N, m)))
    return RadialProfile.power(float(rng.uniform(0.5, 2.0)), gamma), N, m, mu


def suite_radial_oracle(seed: int) -> SuiteResult:
    t0 = time.time()
    rng = np.random.default_rng(seed + 2)
    worst = 0.0
    count = 0
    attempts = 0
    while count < 500 and attempts < 5000:
        attempts += 1
        profile, N, m, mu = _random_power_profile(rng)
        if count % 2 == 1:
            tau = float(rng.uniform(-0.8, 1.5))
            log_s = (max(tau, 0.0) + float(rng.uniform(0.3, 2.0))) / abs(profile.gamma)
            profile = RadialProfile.power_log(profile.kappa, profile.gamma, tau, math.exp(log_s))
        r = float(rng.uniform(1.5, 50.0))
        closed = operator_exact(profile, N, m, mu, r)
        # relative comparison is ill-posed when the operator nearly vanishes
        scale = profile.kappa ** (m - 1) * r ** (profile.gamma * (m - 1) - m) * (1 + abs(mu))
        if profile.variant.value == "power_log":
            scale *= math.log(profile.s * r) ** (profile.tau * (m - 1))
        if abs(closed) < 0.05 * abs(scale):
            continue
        fd = fd_radial_operator(profile, N, m, mu, r, h=1e-4 * r)
        rel = abs(fd - closed) / abs(closed)
        worst = max(worst, rel)
        if rel > 1e-4:
            return _result(
                "radial_oracle", t0, False, f"relative gap {rel:.2e} at {(N, m, mu, r)}"
            )
        count += 1
    if count < 500:
        return _result("radial_oracle", t0, False, "could not draw 500 well-scaled profiles")
    return _result("radial_oracle", t0, True, f"500 comparisons, worst relative gap {worst:.2e}")


# ---------------------------------------------------------------------------
# 4. Newtonian shell oracle.


def suite_shell_oracle(seed: int) -> SuiteResult:
    t0 = time.time()
    rng = np.random.default_rng(seed + 3)
    worst = 0.0
    densities: list[Callable[[float], float]] = [lambda rho: 1.0]
    for _ in range(3):
        a, b, c = rng.uniform(0.3, 2.0, size=3)
        densities.append(lambda rho, a=a, b=b, c=c: a + b * (rho - 1.5) ** 2 + c * (2.0 - rho))
    for f in densities:
        shell = RadialFunction.compact(lambda rho, f=f: f(rho) if rho < 2.0 else 0.0, 2.0)
        from scipy.integrate import quad

        mass = 4 * math.pi * quad(lambda rho: f(rho) * rho**2, 1.0, 2.0, epsrel=1e-12)[0]
        for r in (3.0, 4.0, 10.0):
            enclosure = riesz_convolve_radial(shell, 3, 2.0, 1.0, r, tol=1e-8)
            exact = mass / (4 * math.pi * r)
            mid = 0.5 * (enclosure.lower + enclosure.upper)
            rel = abs(mid - exact) / exact
            worst = max(worst, rel)
            if rel > 1e-6:
                return _result("shell_oracle", t0, False, f"relative error {rel:.2e} at r={r}")
            if not enclosure.lower <= exact * (1 + 1e-12) and exact * (1 - 1e-12) <= enclosure.upper:
                return _result("shell_oracle", t0, False, f"enclosure misses shell value at r={r}")
    return _result("shell_oracle", t0, True, f"4 densities x 3 radii, worst relative {worst:.2e}")


# ---------------------------------------------------------------------------
# 5. Kernel decay exponents and divergence dichotomy.


def _fit_slope(N: int, alpha: float, p: float, gamma: float) -> float:
    radii = np.geomspace(10.0, 1000.0, 12)
    vals = []
    for r in radii:
        enclosure = riesz_convolve_radial(RadialProfile.power(1.0, gamma), N, alpha, p, float(r), 1e-7)
        vals.append(0.5 * (enclosure.lower + enclosure.upper))
    return float(np.polyfit(np.log(radii), np.log(vals), 1)[0])


def suite_kernel_exponents(seed: int) -> SuiteResult:
    t0 = time.time()
    details = []
    # power regime p|gamma| < N; exponents well separated from the alpha - N
    # correction so the finite fit window resolves the leading power
    for N, alpha, p, gamma in [(3, 2.0, 3.0, -0.717), (4, 2.5, 2.0, -1.3), (2, 0.8, 2.0, -0.45)]:
        slope = _fit_slope(N, alpha, p, gamma)
        target = alpha + p * gamma
        details.append(f"{slope:+.3f}~{target:+.3f}")
        if abs(slope - target) > 0.05:
            return _result(
                "kernel_exponents", t0, False, f"power slope {slope} vs {target} at {(N, alpha, p, gamma)}"
            )
    for N, alpha, p, gamma in [(3, 2.0, 3.0, -2.0), (2, 1.2, 4.0, -1.0)]:
        slope = _fit_slope(N, alpha, p, gamma)
        target = alpha - N
        details.append(f"{slope:+.3f}~{target:+.3f}")
        if abs(slope - target) > 0.05:
            return _result(
                "kernel_exponents", t0, False, f"far slope {slope} vs {target} at {(N, alpha, p, gamma)}"
            )
    for N, alpha, p, gamma, expect in [
        (3, 2.0, 3.0, -0.5, True),
        (3, 2.25, 3.0, -0.75, True),
        (3, 2.0, 3.0, -0.75, False),
    ]:
        value = riesz_convolve_radial(RadialProfile.power(1.0, gamma), N, alpha, p, 5.0, 1e-6)
        if value.divergent is not expect:
            return _result(
                "kernel_exponents", t0, False, f"divergence flag {value.divergent} at {(alpha, gamma)}"
            )
    return _result("kernel_exponents", t0, True, "slopes " + ", ".join(details))


# ---------------------------------------------------------------------------
# 6. Explicit bounds sandwich the quadrature enclosure.


def suite_bound_sandwich(seed: int) -> SuiteResult:
    t0 = time.time()
    rng = np.random.default_rng(seed + 5)
    count = 0
    while count < 50:
        N = int(rng.integers(1, 6))
        alpha = float(rng.uniform(0.15, N - 0.15)) if N > 1 else float(rng.uniform(0.1, 0.9))
        gamma = float(rng.uniform(-3.0, -0.1))
        p = float(rng.uniform(0.5, 4.0))
        if alpha + p * gamma > -0.05:
            continue
        c = float(rng.uniform(0.5, 2.0))
        profile = RadialProfile.power(c, gamma)
        lb = power_lower_bound(c, gamma, N, alpha, p)
        ub = power_upper_bounds(c, gamma, 0.0, 2.0, N, alpha, p)
        for r in (5.0, 20.0, 100.0):
            enclosure = riesz_convolve_radial(profile, N, alpha, p, r, tol=1e-6)
            lo, hi = lb.evaluate(r), ub.evaluate(r)
            if not (lo <= enclosure.lower and enclosure.upper <= hi):
                return _result(
                    "bound_sandwich",
                    t0,
                    False,
                    f"sandwich broken at {(N, alpha, gamma, p, r)}: "
                    f"{lo} <= {enclosure.lower} <= {enclosure.upper} <= {hi}",
                )
        count += 1
    return _result("bound_sandwich", t0, True, "50 profiles x 3 radii enclosed")


# ---------------------------------------------------------------------------
# 7. Classifier / constructor iff-consistency.

_BACKGROUNDS = [
    # (N, m, alpha, mu, p-range, q-range): spans N>m / N<=m, alpha vs N-m,
    # mu < 0 / inside (0, C_H) / at C_H
    (3, 2.0, 2.0, -0.5, (0.5, 5.0), (0.5, 5.0)),
    (3, 2.0, 1.0, 0.1, (0.4, 4.0), (0.2, 5.0)),
    (5, 2.0, 1.0, 0.2, (0.2, 5.0), (-2.0, 4.0)),
    (3, 2.0, 2.0, 0.25, (2.0, 8.0), (1.0, 8.0)),
    (5, 2.0, 2.0, -1.0, (0.3, 4.0), (-1.0, 4.0)),
    (2, 3.0, 1.0, -1.0, (0.5, 6.0), (2.0, 9.0)),
]


def suite_iff_consistency(seed: int) -> SuiteResult:
    t0 = time.time()
    policy = ComparisonPolicy()
    n_exists = n_not = n_boundary = 0
    for N, m, alpha, mu, p_range, q_range in _BACKGROUNDS:
        for p in np.linspace(*p_range, 15):
            for q in np.linspace(*q_range, 15):
                params = ProblemParams(N, m, float(p), float(q), alpha, mu)
                verdict = classify(params, policy)
                if verdict.outcome is Outcome.BOUNDARY:
                    n_boundary += 1
                    continue
                if verdict.outcome is Outcome.EXISTS:
                    try:
                        _, report = existence_certificate(params, policy, tol=1e-5)
                    except (BudgetExhausted, EmptyInterval) as exc:
                        return _result(
                            "iff_consistency",
                            t0,
                            False,
                            f"Exists point {(N, m, alpha, mu, float(p), float(q))} "
                            f"failed construction: {exc}",
                        )
                    if not (report.passed and report.min_margin >= 0):
                        return _result(
                            "iff_consistency",
                            t0,
                            False,
                            f"certificate failed at {(N, m, alpha, mu, float(p), float(q))}",
                        )
                    n_exists += 1
                else:
                    if not verdict.witnesses:
                        return _result(
                            "iff_consistency", t0, False, f"NotExists without witness at {(p, q)}"
                        )
                    for w in verdict.witnesses:
                        pred = WITNESS_PREDICATES[w.result_id]
                        ok = (
                            pred(params, verdict.roots, policy.boundary_band)
                            if w.result_id == "annulus-capacity-estimate"
                            else pred(params, verdict.roots)
                        )
                        if not ok:
                            return _result(
                                "iff_consistency",
                                t0,
                                False,
                                f"unsound witness {w.result_id} at {(N, m, alpha, mu, float(p), float(q))}",
                            )
                    n_not += 1
    return _result(
        "iff_consistency",
        t0,
        True,
        f"6 backgrounds x 225 points: {n_exists} certified, {n_not} witnessed, "
        f"{n_boundary} boundary",
    )


# ---------------------------------------------------------------------------
# 8. Hand-checked classification thresholds.


def _check_grid(N, m, alpha, mu, p_grid, q_grid, expected) -> tuple[bool, str]:
    policy = ComparisonPolicy()
    mismatches = 0
    checked = 0
    for p in p_grid:
        for q in q_grid:
            verdict = classify(ProblemParams(N, m, float(p), float(q), alpha, mu), policy)
            if verdict.outcome is Outcome.BOUNDARY:
                continue
            checked += 1
            if (verdict.outcome is Outcome.EXISTS) != expected(float(p), float(q)):
                mismatches += 1
    return mismatches == 0, f"{checked} points, {mismatches} mismatches"


def suite_hand_thresholds(seed: int) -> SuiteResult:
    t0 = time.time()
    ok1, d1 = _check_grid(
        3,
        2.0,
        2.0,
        0.0,
        np.linspace(0.12, 6.0, 50),
        np.linspace(-0.88, 6.0, 50),
        lambda p, q: p > 2 and p + q > 5 and q > 2,
    )
    if not ok1:
        return _result("hand_thresholds", t0, False, f"first instance: {d1}")
    ok2, d2 = _check_grid(
        2,
        2.0,
        1.0,
        -1.0,
        np.linspace(0.1, 4.0, 50),
        np.linspace(0.5, 6.0, 50),
        lambda p, q: p > 1 and p + q > 4 and q > 2,
    )
    if not ok2:
        return _result("hand_thresholds", t0, False, f"second instance: {d2}")
    return _result("hand_thresholds", t0, True, f"{d1}; {d2}")


# ---------------------------------------------------------------------------
# 9. Hardy inequality sampling.


def suite_hardy_sampling(seed: int) -> SuiteResult:
    t0 = time.time()
    rng = np.random.default_rng(seed + 8)
    worst = math.inf
    for _ in range(100):
        N = int(rng.integers(1, 6))
        m = float(rng.uniform(1.2, 3.5))
        center = float(rng.uniform(1.5, 8.0))
        halfwidth = float(rng.uniform(0.3, min(center - 0.05, 4.0)))
        bump = RadialBump(center, halfwidth, float(rng.uniform(0.1, 10.0)))
        res = hardy_check(bump, N, m)
        slack = res["lhs"] - res["rhs"]
        worst = min(worst, slack + 1e-8 * (1 + res["lhs"]))
        if res["lhs"] < res["rhs"] - 1e-8 * (1 + res["lhs"]):
            return _result(
                "hardy_sampling",
                t0,
                False,
                f"inequality violated: lhs {res['lhs']} < rhs {res['rhs']} at {(N, m, center)}",
            )
    return _result("hardy_sampling", t0, True, f"100 bumps, min adjusted slack {worst:.2e}")


# ---------------------------------------------------------------------------
# 10. Region scans reproduce the threshold lines.

_FIGURES = [
    ("alpha > N-m, mu = 0", 3, 2.0, 2.0, 0.0, (0.03, 6.0), (-1.0, 6.0)),
    ("alpha < N-m, mu = 0", 5, 2.0, 1.0, 0.0, (0.05, 6.0), (-2.0, 4.0)),
    ("alpha < N-m, mu > 0", 5, 2.0, 1.0, 0.2, (0.05, 40.0), (-30.0, 6.0)),
]


def _threshold_lines(N, m, alpha, mu):
    roots = solve_beta_roots(N, m, mu)
    abm = abs(roots.beta_minus)
    lines = {
        "p": alpha / abm,
        "pq": m - 1 + (m + alpha) / abm,
    }
    if alpha > N - m:
        lines["q"] = m - 1 - (N - m - alpha) / abm
    else:
        lines["q_slope"] = (m - 1, (N - m - alpha) / N)  # q = m-1 - slope*p
        if mu > 0:
            lines["q4"] = m - 1 - (N - m - alpha) / abs(roots.beta_plus)
    return lines


def _expected_outcome(p, q, N, m, alpha, mu, lines) -> bool:
    ok = p > lines["p"] and p + q > lines["pq"]
    if "q" in lines:
        ok = ok and q > lines["q"]
    else:
        base, slope = lines["q_slope"]
        ok = ok and q > base - slope * p
        if "q4" in lines:
            ok = ok and q > lines["q4"]
    return ok


def _near_any_line(p, q, lines, cell_p, cell_q) -> bool:
    if abs(p - lines["p"]) <= cell_p:
        return True
    if abs(p + q - lines["pq"]) <= cell_p + cell_q:
        return True
    if "q" in lines and abs(q - lines["q"]) <= cell_q:
        return True
    if "q_slope" in lines:
        base, slope = lines["q_slope"]
        if abs(q - (base - slope * p)) <= cell_q + abs(slope) * cell_p:
            return True
    if "q4" in lines and abs(q - lines["q4"]) <= cell_q:
        return True
    return False


def suite_region_figures(seed: int) -> SuiteResult:
    t0 = time.time()
    steps = 200
    for label, N, m, alpha, mu, p_range, q_range in _FIGURES:
        base = {"N": N, "m": m, "alpha": alpha, "mu": mu}
        spec = RegionScanSpec(base, p_range, q_range, steps)
        rows = run_region_scan(spec)
        lines = _threshold_lines(N, m, alpha, mu)
        cell_p = (p_range[1] - p_range[0]) / (steps - 1)
        cell_q = (q_range[1] - q_range[0]) / (steps - 1)
        for p, q, outcome, _ in rows:
            if _near_any_line(p, q, lines, cell_p, cell_q):
                continue
            expected = _expected_outcome(p, q, N, m, alpha, mu, lines)
            actual = outcome == "exists"
            if outcome == "boundary" or actual != expected:
                return _result(
                    "region_figures",
                    t0,
                    False,
                    f"{label}: outcome {outcome} vs expected exists={expected} at ({p}, {q})",
                )
    return _result("region_figures", t0, True, f"3 regimes x {steps}x{steps} grid points")


# ---------------------------------------------------------------------------

SUITES: dict[str, Callable[[int], SuiteResult]] = {
    "root_solver": suite_root_solver,
    "indicial_bound": suite_indicial_bound,
    "radial_oracle": suite_radial_oracle,
    "shell_oracle": suite_shell_oracle,
    "kernel_exponents": suite_kernel_exponents,
    "bound_sandwich": suite_bound_sandwich,
    "iff_consistency": suite_iff_consistency,
    "hand_thresholds": suite_hand_thresholds,
    "hardy_sampling": suite_hardy_sampling,
    "region_figures": suite_region_figures,
}


def run_all(seed: int = DEFAULT_SEED, names: list[str] | None = None) -> list[SuiteResult]:
    selected = names if names is not None else list(SUITES)
    results = []
    for name in selected:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        results.append(SUITES[name](seed))
    return results
