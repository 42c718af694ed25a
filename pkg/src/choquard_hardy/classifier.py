"""Existence / nonexistence classification in the (p, q) parameter plane.

The decision procedure evaluates the necessary-and-sufficient condition list
for the exterior inequality: a Hardy-constant cap on mu, a Riesz
integrability floor on p, a combined growth condition on p + q, and a
dimension/alpha-dependent condition on q.  Every violated condition is
reported together with the nonexistence mechanism that proves it, named by
what the mechanism does, and each mechanism's hypothesis can be re-checked
independently through WITNESS_PREDICATES.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .beta_spectrum import BetaRoots, solve_beta_roots
from .errors import DomainError, NoRealRoots
from .model import ComparisonPolicy, ProblemParams, hardy_constant

# condition identifiers
COND_MU = "i"
COND_P = "ii"
COND_PQ = "iii"
COND_Q_ALPHA_GT = "iv.1"
COND_Q_ALPHA_EQ = "iv.2"
COND_Q_ALPHA_LT = "iv.3"
COND_Q_BETA_PLUS = "iv.4"
COND_Q_SMALL_DIM = "iv"

# witness (nonexistence mechanism) identifiers
W_MU_ABOVE_HARDY = "mu-above-hardy-constant"
W_MU_NONNEG_FLOOR = "mu-nonnegative-exterior-floor"
W_P_RIESZ = "p-below-riesz-integrability"
W_PQ_BAND = "pq-sum-in-critical-band"
W_PQ_DEFICIT = "pq-sum-balance-deficit"
W_Q_LOCAL_WINDOW = "q-in-local-window"
W_Q_BETA_PLUS = "q-below-beta-plus-threshold"
W_ANNULUS = "annulus-capacity-estimate"


class Outcome(enum.Enum):
    EXISTS = "exists"
    NOT_EXISTS = "not_exists"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class ConditionCheck:
    condition_id: str
    formula: str
    strict: bool
    margin: float
    status: str  # "satisfied" | "violated" | "boundary"

    @property
    def satisfied(self) -> bool:
        return self.status == "satisfied"


@dataclass(frozen=True)
class Witness:
    condition_id: str
    result_id: str
    margin: float


@dataclass(frozen=True)
class Verdict:
    """Classification outcome with full condition trace.

    NOT_EXISTS carries at least one witness naming a nonexistence mechanism
    whose hypothesis holds for these parameters; EXISTS carries none and every
    condition is satisfied beyond the comparison band (equality-admitting
    conditions may sit exactly on their thresholds); BOUNDARY means no
    decisive violation but at least one strict condition inside the band.
    """

    outcome: Outcome
    witnesses: list[Witness] = field(default_factory=list)
    boundary_conditions: list[str] = field(default_factory=list)
    checks: list[ConditionCheck] = field(default_factory=list)
    roots: BetaRoots | None = None

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "witnesses": [
                {"condition": w.condition_id, "result": w.result_id, "margin": w.margin}
                for w in self.witnesses
            ],
            "boundary": list(self.boundary_conditions),
            "conditions": [
                {
                    "condition": c.condition_id,
                    "formula": c.formula,
                    "strict": c.strict,
                    "margin": c.margin,
                    "status": c.status,
                }
                for c in self.checks
            ],
        }


def _status(margin: float, strict: bool, band: float) -> str:
    if strict:
        if margin > band:
            return "satisfied"
        if margin < -band:
            return "violated"
        # an exact threshold hit is decidable: a strict condition fails at
        # equality; only inexact near-threshold values are indeterminate
        return "violated" if margin == 0.0 else "boundary"
    return "satisfied" if margin >= -band else "violated"


# ---------------------------------------------------------------------------
# Witness predicates: independent re-checks of each mechanism's hypothesis.
# Signature: predicate(params, roots) -> bool, roots may be None.


def _pred_mu_above_hardy(params: ProblemParams, roots) -> bool:
    return params.mu > hardy_constant(params.N, params.m)


def _pred_mu_nonneg_floor(params: ProblemParams, roots) -> bool:
    return params.N <= params.m and 0 <= params.mu <= hardy_constant(params.N, params.m)


def _pred_p_riesz(params: ProblemParams, roots) -> bool:
    if roots is None or not roots.beta_minus < 0:
        return False
    return params.alpha + params.p * roots.beta_minus >= 0


def _pred_pq_band(params: ProblemParams, roots) -> bool:
    if roots is None or not roots.beta_minus < 0:
        return False
    s = params.p + params.q
    return params.m - 1 <= s <= params.m - 1 + (params.m + params.alpha) / abs(roots.beta_minus)


def _pred_pq_deficit(params: ProblemParams, roots) -> bool:
    s = params.p + params.q
    mn = min(params.theta, params.m)
    if s < params.m - 1:
        return mn >= -params.alpha
    if s == params.m - 1:
        return mn > -params.alpha
    return False


def _pred_q_local_window(params: ProblemParams, roots) -> bool:
    if roots is None or not roots.beta_minus < 0:
        return False
    if not params.alpha > params.N - params.m:
        return False
    thr = params.m - 1 - (params.N - params.m - params.alpha) / abs(roots.beta_minus)
    return params.m - 1 < params.q <= thr


def _pred_q_beta_plus(params: ProblemParams, roots) -> bool:
    if roots is None or not (params.mu > 0 and params.alpha < params.N - params.m):
        return False
    if not roots.beta_plus < 0:
        return False
    thr = params.m - 1 - (params.N - params.m - params.alpha) / abs(roots.beta_plus)
    return params.q <= thr


def _pred_annulus(params: ProblemParams, roots, band: float = 0.0) -> bool:
    mn = min(params.theta, params.m)
    thr = params.m - 1 + (mn + params.alpha - params.N) / params.N * params.p
    if not (params.p + params.q > params.m - 1 and params.q <= params.m - 1):
        return False
    if params.q < thr:
        return True
    return abs(params.q - thr) <= band and params.q < params.m - 1


WITNESS_PREDICATES = {
    W_MU_ABOVE_HARDY: _pred_mu_above_hardy,
    W_MU_NONNEG_FLOOR: _pred_mu_nonneg_floor,
    W_P_RIESZ: _pred_p_riesz,
    W_PQ_BAND: _pred_pq_band,
    W_PQ_DEFICIT: _pred_pq_deficit,
    W_Q_LOCAL_WINDOW: _pred_q_local_window,
    W_Q_BETA_PLUS: _pred_q_beta_plus,
    W_ANNULUS: _pred_annulus,
}

_CONDITION_WITNESSES = {
    COND_MU: (W_MU_ABOVE_HARDY, W_MU_NONNEG_FLOOR),
    COND_P: (W_P_RIESZ,),
    COND_PQ: (W_PQ_BAND, W_PQ_DEFICIT),
    COND_Q_ALPHA_GT: (W_Q_LOCAL_WINDOW, W_ANNULUS),
    COND_Q_ALPHA_EQ: (W_Q_LOCAL_WINDOW, W_ANNULUS),
    COND_Q_ALPHA_LT: (W_ANNULUS,),
    COND_Q_BETA_PLUS: (W_Q_BETA_PLUS,),
    COND_Q_SMALL_DIM: (W_Q_LOCAL_WINDOW, W_ANNULUS),
}


def _find_witness(cond_id: str, params, roots, margin: float, band: float) -> Witness | None:
    for result_id in _CONDITION_WITNESSES[cond_id]:
        pred = WITNESS_PREDICATES[result_id]
        ok = pred(params, roots, band) if result_id == W_ANNULUS else pred(params, roots)
        if ok:
            return Witness(cond_id, result_id, margin)
    return None


# ---------------------------------------------------------------------------


def _evaluate_conditions(
    params: ProblemParams, policy: ComparisonPolicy
) -> tuple[list[ConditionCheck], BetaRoots | None]:
    """Evaluate every applicable condition; stops after a decisive mu failure."""
    N, m, p, q, alpha, mu = params.N, params.m, params.p, params.q, params.alpha, params.mu
    band = policy.boundary_band
    ch = hardy_constant(N, m)
    checks: list[ConditionCheck] = []

    if N > m:
        margin_i = ch - mu
        check_i = ConditionCheck(COND_MU, "mu <= C_H", False, margin_i, _status(margin_i, False, band))
    else:
        margin_i = -mu
        check_i = ConditionCheck(COND_MU, "mu < 0", True, margin_i, _status(margin_i, True, band))
    checks.append(check_i)
    if check_i.status != "satisfied":
        # conditions (ii)-(iv) are stated in terms of the decay exponents,
        # which lose their meaning when the mu condition fails
        return checks, None

    mu_eff = ch if abs(mu - ch) <= band else mu
    roots = solve_beta_roots(N, m, mu_eff, band)
    abm = abs(roots.beta_minus)

    thr_p = alpha / abm
    margin_ii = p - thr_p
    checks.append(
        ConditionCheck(COND_P, "p > alpha/|beta-|", True, margin_ii, _status(margin_ii, True, band))
    )

    thr_pq = m - 1 + (m + alpha) / abm
    margin_iii = p + q - thr_pq
    checks.append(
        ConditionCheck(
            COND_PQ, "p+q > m-1+(m+alpha)/|beta-|", True, margin_iii, _status(margin_iii, True, band)
        )
    )

    if N > m:
        d = alpha - (N - m)
        if abs(d) <= band:
            margin = q - (m - 1)
            checks.append(
                ConditionCheck(
                    COND_Q_ALPHA_EQ, "q >= m-1 (alpha = N-m)", False, margin, _status(margin, False, band)
                )
            )
        elif d > band:
            thr = m - 1 + d / abm
            margin = q - thr
            checks.append(
                ConditionCheck(
                    COND_Q_ALPHA_GT,
                    "q > m-1-(N-m-alpha)/|beta-| (alpha > N-m)",
                    True,
                    margin,
                    _status(margin, True, band),
                )
            )
        else:
            thr = m - 1 - (N - m - alpha) * p / N
            margin = q - thr
            checks.append(
                ConditionCheck(
                    COND_Q_ALPHA_LT,
                    "q > m-1-(N-m-alpha)p/N (alpha < N-m)",
                    True,
                    margin,
                    _status(margin, True, band),
                )
            )
            if mu_eff > band:
                abp = abs(roots.beta_plus)
                thr4 = m - 1 - (N - m - alpha) / abp
                margin4 = q - thr4
                checks.append(
                    ConditionCheck(
                        COND_Q_BETA_PLUS,
                        "q > m-1-(N-m-alpha)/|beta+| (alpha < N-m, mu > 0)",
                        True,
                        margin4,
                        _status(margin4, True, band),
                    )
                )
    else:
        thr = m - 1 - (N - m - alpha) / abm
        margin = q - thr
        checks.append(
            ConditionCheck(
                COND_Q_SMALL_DIM,
                "q > m-1-(N-m-alpha)/|beta-|",
                True,
                margin,
                _status(margin, True, band),
            )
        )
    return checks, roots


def classify(params: ProblemParams, policy: ComparisonPolicy = ComparisonPolicy()) -> Verdict:
    """Decide existence of a positive solution for theta = m parameters."""
    band = policy.boundary_band
    if abs(params.theta - params.m) > band:
        raise DomainError("theta", "classification requires theta = m")

    if params.N <= params.m and abs(params.mu) <= band:
        # the sign of mu decides the qualitative root structure here, so an
        # input inside the band cannot be resolved either way
        check = ConditionCheck(COND_MU, "mu < 0", True, -params.mu, "boundary")
        return Verdict(Outcome.BOUNDARY, [], [COND_MU], [check], None)

    checks, roots = _evaluate_conditions(params, policy)
    witnesses = []
    boundary = [c.condition_id for c in checks if c.status == "boundary"]
    for c in checks:
        if c.status == "violated":
            w = _find_witness(c.condition_id, params, roots, c.margin, band)
            if w is not None:
                witnesses.append(w)
    violated = [c for c in checks if c.status == "violated"]
    if violated:
        if not witnesses:
            raise RuntimeError(
                "internal inconsistency: violation without a matching nonexistence mechanism"
            )
        return Verdict(Outcome.NOT_EXISTS, witnesses, boundary, checks, roots)
    if boundary:
        return Verdict(Outcome.BOUNDARY, [], boundary, checks, roots)
    return Verdict(Outcome.EXISTS, [], [], checks, roots)


def necessary_condition_trace(
    params: ProblemParams, policy: ComparisonPolicy = ComparisonPolicy()
) -> list[tuple[str, str, bool, float]]:
    """One (condition_id, formula, satisfied, margin) entry per applicable condition."""
    checks, _ = _evaluate_conditions(params, policy)
    return [(c.condition_id, c.formula, c.satisfied, c.margin) for c in checks]


def nonexistence_general(
    params: ProblemParams, policy: ComparisonPolicy = ComparisonPolicy()
) -> str | None:
    """First matching nonexistence case for general theta, or None.

    The cases compare p + q against m - 1 and q against the capacity line
    q = m - 1 + (min(theta, m) + alpha - N) p / N; equalities are resolved
    through the comparison band.
    """
    N, m, p, q, alpha = params.N, params.m, params.p, params.q, params.alpha
    band = policy.boundary_band
    mn = min(params.theta, m)
    s = p + q
    thr = m - 1 + (mn + alpha - N) / N * p
    if s > m - 1 + band and q <= m - 1 + band and q < thr - band:
        return "i"
    if s > m - 1 + band and q < m - 1 - band and abs(q - thr) <= band:
        return "ii"
    if abs(s - (m - 1)) <= band and mn > -alpha + band:
        return "iii"
    if s < m - 1 - band and mn >= -alpha - band:
        return "iv"
    return None


def local_nonexistence(
    q: float,
    sigma: float,
    mu: float,
    N: int,
    m: float,
    policy: ComparisonPolicy = ComparisonPolicy(),
) -> tuple[bool, str | None]:
    """Nonexistence test for the local weighted inequality with weight |x|^-sigma.

    Returns (True, case_tag) when the inequality with right-hand side
    C |x|^-sigma u^q admits no positive solution by the decay-exponent
    comparison, (False, None) otherwise.  Raises NoRealRoots when mu exceeds
    the Hardy constant beyond the band (a stronger nonexistence applies).
    """
    band = policy.boundary_band
    ch = hardy_constant(N, m)
    if mu > ch + band:
        raise NoRealRoots(f"mu = {mu} exceeds the Hardy constant {ch}")
    mu_eff = ch if abs(mu - ch) <= band else mu
    roots = solve_beta_roots(N, m, mu_eff, band)
    at_hardy = roots.degenerate
    thr_minus = roots.beta_minus * (q - m + 1) + m
    thr_plus = roots.beta_plus * (q - m + 1) + m
    if q >= m - 1 - band and sigma <= thr_minus + band:
        return True, "i"
    if q < m - 1 - band:
        if not at_hardy and sigma <= thr_plus + band:
            return True, "ii"
        if at_hardy and sigma < thr_plus - band:
            return True, "iii"
        if at_hardy and q >= -1 - band and abs(sigma - thr_plus) <= band:
            return True, "iv"
    return False, None
