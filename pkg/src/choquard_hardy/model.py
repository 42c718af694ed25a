"""Problem parameters, validation and the comparison policy shared by all modules.

The inequality under study lives on the exterior of the unit ball and is
parametrised by (N, m, p, q, alpha, mu, theta):

    -div(|grad u|^(m-2) grad u) - mu |x|^(-theta) u^(m-1)  >=  (K_alpha * u^p) u^q

where K_alpha is the Riesz kernel of order alpha.  The headline problem has
theta = m; theta is carried only for the general nonexistence criteria.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ValidationError

#: Default half-width of the indeterminacy band around condition boundaries.
DEFAULT_BAND = 1e-9

_REQUIRED_KEYS = ("N", "m", "p", "q", "alpha", "mu")


@dataclass(frozen=True)
class ProblemParams:
    """One instance of the inequality.  Immutable value object."""

    N: int
    m: float
    p: float
    q: float
    alpha: float
    mu: float
    theta: float | None = None

    def __post_init__(self):
        if self.theta is None:
            object.__setattr__(self, "theta", float(self.m))
        violations = _check(self.N, self.m, self.p, self.alpha)
        if violations:
            raise ValidationError(violations)

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "m": self.m,
            "p": self.p,
            "q": self.q,
            "alpha": self.alpha,
            "mu": self.mu,
            "theta": self.theta,
        }


@dataclass(frozen=True)
class ComparisonPolicy:
    """How strict/non-strict threshold comparisons are resolved in floating point.

    Inputs within ``boundary_band`` of a strict threshold are reported as
    boundary cases instead of being silently resolved to one side; inputs
    within the band of a non-strict (equality-admitting) threshold are snapped
    to the equality branch.
    """

    boundary_band: float = DEFAULT_BAND

    def __post_init__(self):
        if self.boundary_band < 0:
            raise DomainError("boundary_band", "boundary_band >= 0 required")

    def close(self, x: float, threshold: float) -> bool:
        """True when x is within the band of the threshold."""
        return abs(x - threshold) <= self.boundary_band


def _check(N, m, p, alpha) -> list[DomainError]:
    violations = []
    if not N >= 1:
        violations.append(DomainError("N", "N >= 1 required"))
    if not m > 1:
        violations.append(DomainError("m", "m > 1 required"))
    if not p > 0:
        violations.append(DomainError("p", "p > 0 required"))
    if not alpha > 0:
        violations.append(DomainError("alpha", "alpha > 0 required"))
    elif not alpha < N:
        violations.append(DomainError("alpha", "alpha < N required"))
    return violations


def validate_params(raw: dict) -> ProblemParams:
    """Validate a name->number mapping and build ProblemParams.

    Raises ValidationError naming every violated constraint; never crashes on
    malformed numeric input (non-numeric values are reported as violations).
    """
    violations = []
    clean = {}
    for key in _REQUIRED_KEYS + ("theta",):
        if key not in raw:
            if key == "theta":
                continue
            violations.append(DomainError(key, "required parameter missing"))
            continue
        try:
            clean[key] = int(raw[key]) if key == "N" else float(raw[key])
        except (TypeError, ValueError):
            violations.append(DomainError(key, "not a number"))
    if violations:
        raise ValidationError(violations)
    violations = _check(clean["N"], clean["m"], clean["p"], clean["alpha"])
    if violations:
        raise ValidationError(violations)
    return ProblemParams(**clean)


def hardy_constant(N: int, m: float) -> float:
    """Optimal constant |(N-m)/m|^m of the m-Hardy inequality on R^N."""
    if not m > 1:
        raise DomainError("m", "m > 1 required")
    return abs((N - m) / m) ** m
