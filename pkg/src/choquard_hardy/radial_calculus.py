"""Exact radial evaluation of the Hardy m-Laplace operator on candidate profiles.

For u(x) = kappa |x|^gamma the operator
    L u = -div(|grad u|^(m-2) grad u) - mu |x|^(-m) u^(m-1)
has the closed form kappa^(m-1) (G(gamma) - mu) |x|^(gamma(m-1)-m).  For the
log-corrected profile u = kappa |x|^gamma log^tau(s|x|) there is an exact
bracket identity (derived by differentiating through the divergence form),
an asymptotic expansion of the bracket in inverse powers of log(s|x|), and a
finite-difference oracle used to cross-check both.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .beta_spectrum import g_eval
from .errors import DomainError, SingularPointError


class ProfileKind(enum.Enum):
    POWER = "power"
    POWER_LOG = "power_log"


@dataclass(frozen=True)
class RadialProfile:
    """Candidate radial profile kappa r^gamma or kappa r^gamma log^tau(s r).

    Power-log profiles require s > 1, gamma < 0 and |gamma| log(s) > tau,
    which makes the profile positive and strictly decreasing on r >= 1.
    """

    variant: ProfileKind
    kappa: float
    gamma: float
    tau: float = 0.0
    s: float = math.e

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError("kappa", "kappa > 0 required")
        if self.variant is ProfileKind.POWER_LOG:
            if not self.s > 1:
                raise DomainError("s", "s > 1 required")
            if not self.gamma < 0:
                raise DomainError("gamma", "gamma < 0 required for power-log profiles")
            if not abs(self.gamma) * math.log(self.s) > self.tau:
                raise DomainError("tau", "|gamma| log(s) > tau required")

    @classmethod
    def power(cls, kappa: float, gamma: float) -> "RadialProfile":
        return cls(ProfileKind.POWER, kappa, gamma)

    @classmethod
    def power_log(cls, kappa: float, gamma: float, tau: float, s: float) -> "RadialProfile":
        return cls(ProfileKind.POWER_LOG, kappa, gamma, tau, s)

    def __call__(self, r: float) -> float:
        if self.variant is ProfileKind.POWER:
            return self.kappa * r**self.gamma
        return self.kappa * r**self.gamma * math.log(self.s * r) ** self.tau

    def with_kappa(self, kappa: float) -> "RadialProfile":
        return RadialProfile(self.variant, kappa, self.gamma, self.tau, self.s)

    def as_dict(self) -> dict:
        d = {"variant": self.variant.value, "kappa": self.kappa, "gamma": self.gamma}
        if self.variant is ProfileKind.POWER_LOG:
            d["tau"] = self.tau
            d["s"] = self.s
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RadialProfile":
        kind = ProfileKind(d["variant"])
        if kind is ProfileKind.POWER:
            return cls.power(float(d["kappa"]), float(d["gamma"]))
        return cls.power_log(float(d["kappa"]), float(d["gamma"]), float(d["tau"]), float(d["s"]))


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficients of the power-log operator bracket.

    (a, b, c) multiply inverse powers of L = log(s r) inside the exact bracket
    (|gamma| - tau/L)^(m-2) (a + b/L + c/L^2); (A, B, C) are the first three
    coefficients of the expanded bracket A + B/L + C/L^2 + ... including the
    Hardy shift, so A = G(gamma) - mu.
    """

    a: float
    b: float
    c: float
    A: float
    B: float
    C: float


def operator_power(profile: RadialProfile, N: int, m: float, mu: float, r: float) -> float:
    """Exact operator value kappa^(m-1)(G(gamma)-mu) r^(gamma(m-1)-m) at radius r."""
    if profile.variant is not ProfileKind.POWER:
        raise DomainError("profile", "power profile required")
    g = profile.gamma
    return profile.kappa ** (m - 1) * (g_eval(g, N, m) - mu) * r ** (g * (m - 1) - m)


def expansion_coefficients(
    gamma: float, tau: float, N: int, m: float, mu: float
) -> ExpansionCoefficients:
    """Bracket coefficients (a, b, c) and expanded coefficients (A, B, C) for gamma < 0."""
    if not gamma < 0:
        raise DomainError("gamma", "gamma < 0 required")
    ag = abs(gamma)
    a = ag * (gamma * (m - 1) + (N - m))
    b = -tau * (2 * gamma * (m - 1) + (N - m))
    c = -tau * (tau - 1) * (m - 1)
    A = g_eval(gamma, N, m) - mu
    B = ag ** (m - 3) * (b * ag - (m - 2) * a * tau)
    C = ag ** (m - 4) * (
        c * gamma**2 + b * gamma * tau * (m - 2) + 0.5 * (m - 2) * (m - 3) * a * tau**2
    )
    return ExpansionCoefficients(a, b, c, A, B, C)


def operator_powerlog_exact(
    profile: RadialProfile, N: int, m: float, mu: float, r: float
) -> float:
    """Exact operator value on a power-log profile via the bracket identity.

    Valid for r >= 1 under the profile invariant |gamma| log(s) > tau, which
    keeps |gamma| - tau/log(s r) positive on the whole exterior domain.
    """
    if profile.variant is not ProfileKind.POWER_LOG:
        raise DomainError("profile", "power-log profile required")
    g, tau, s = profile.gamma, profile.tau, profile.s
    L = math.log(s * r)
    coeffs = expansion_coefficients(g, tau, N, m, mu)
    slope = abs(g) - tau / L
    bracket = -mu + slope ** (m - 2) * (coeffs.a + coeffs.b / L + coeffs.c / (L * L))
    return (
        profile.kappa ** (m - 1)
        * r ** (g * (m - 1) - m)
        * L ** (tau * (m - 1))
        * bracket
    )


def operator_exact(profile: RadialProfile, N: int, m: float, mu: float, r: float) -> float:
    """Dispatch to the closed form matching the profile variant."""
    if profile.variant is ProfileKind.POWER:
        return operator_power(profile, N, m, mu, r)
    return operator_powerlog_exact(profile, N, m, mu, r)


def fd_radial_operator(
    u: Callable[[float], float],
    N: int,
    m: float,
    mu: float,
    r: float,
    h: float,
    guard_rtol: float = 1e-3,
) -> float:
    """Finite-difference oracle for -r^(1-N)(r^(N-1)|u'|^(m-2)u')' - mu r^(-m) u^(m-1).

    Nested central differences with step h, O(h^2) for smooth u with u' != 0.
    The value is recomputed at step h/2; if the two disagree by more than
    10 * guard_rtol relative to scale the point is flagged as singular
    instead of silently returning a number.
    """
    if not h <= 1e-3 * r:
        raise DomainError("h", "h <= 1e-3 * r required")

    def value(step: float) -> float:
        def flux(rho: float) -> float:
            du = (u(rho + step) - u(rho - step)) / (2 * step)
            return rho ** (N - 1) * abs(du) ** (m - 2) * du

        div = (flux(r + step) - flux(r - step)) / (2 * step)
        return -(r ** (1 - N)) * div - mu * r ** (-m) * u(r) ** (m - 1)

    v1, v2 = value(h), value(h / 2)
    scale = max(abs(v1), abs(v2), 1e-300)
    if abs(v1 - v2) > 10 * guard_rtol * scale:
        raise SingularPointError(
            f"finite differences at r={r} disagree between steps h and h/2"
        )
    return v2


def check_c1_integrability(profile: RadialProfile, N: int, alpha: float, p: float) -> bool:
    """Whether u^p / (1 + |y|^(N-alpha)) is integrable over the exterior domain.

    The radial integrand decays like r^(alpha + p gamma - 1) (times a log power
    for power-log profiles), so the integral is finite iff alpha + p gamma < 0.
    On the borderline alpha + p gamma = 0 the integrand is r^(-1) times
    log^(p tau), which still diverges whenever p tau >= -1; this covers every
    profile with tau >= 0 and the tau < 0 corner is handled by the same test.
    """
    edge = alpha + p * profile.gamma
    if edge < 0:
        return True
    if edge == 0 and p * profile.tau < -1:
        return True
    return False
