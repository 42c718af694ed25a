"""Decay-exponent spectrum of the radial Hardy operator.

The radial power profile |x|^beta solves the homogeneous inequality with
coefficient G(beta) = -beta |beta|^(m-2) (beta (m-1) + N - m).  The level set
G(beta) = mu is a finite interval [beta_minus, beta_plus] exactly when
mu <= hardy_constant(N, m); its midpoint of collapse is
beta_star = (m - N)/m, the unique maximiser of G.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad

from .errors import DomainError, NoRealRoots, QuadratureFailure
from .model import DEFAULT_BAND, hardy_constant

_MAX_NEWTON_ITERS = 200
_RESIDUAL_RTOL = 1e-12
_WIDTH_RTOL = 1e-13


def g_eval(beta: float, N: int, m: float) -> float:
    """G(beta) = -beta|beta|^(m-2)(beta(m-1) + N - m), continuously extended to 0.

    The product beta|beta|^(m-2) equals sign(beta)|beta|^(m-1), which is
    continuous at 0 for every m > 1 even though |beta|^(m-2) alone is not.
    """
    if beta == 0.0:
        return 0.0
    return -math.copysign(abs(beta) ** (m - 1), beta) * (beta * (m - 1) + N - m)


def g_prime(beta: float, N: int, m: float) -> float:
    """G'(beta) = -(m-1)|beta|^(m-2)(m beta + N - m); singular at 0 when m < 2."""
    return -(m - 1) * abs(beta) ** (m - 2) * (m * beta + N - m)


def beta_star(N: int, m: float) -> float:
    """Unique maximiser (m-N)/m of G; G(beta_star) = hardy_constant(N, m)."""
    return (m - N) / m


@dataclass(frozen=True)
class BetaRoots:
    """Both solutions of G(beta) = mu, with solve residuals.

    degenerate is True exactly when mu sits at the Hardy constant, in which
    case both roots coincide with beta_star.
    """

    beta_minus: float
    beta_plus: float
    beta_star: float
    degenerate: bool
    residual_minus: float
    residual_plus: float


def _bracketed_newton(
    f: Callable[[float], float],
    df: Callable[[float], float],
    lo: float,
    hi: float,
    f_scale: float,
) -> float:
    """Root of f in [lo, hi] with f(lo), f(hi) of opposite (or zero) sign.

    Newton steps are accepted only while they stay inside the current bracket;
    otherwise the step falls back to bisection, which converges
    unconditionally.  Needed because df blows up at beta = 0 for m < 2.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoRealRoots("root bracket does not change sign")
    x = 0.5 * (lo + hi)
    best_x, best_f = x, math.inf
    for it in range(_MAX_NEWTON_ITERS):
        fx = f(x)
        if fx == 0.0:
            return x
        if abs(fx) < best_f:
            best_x, best_f = x, abs(fx)
        if fx * flo < 0:
            hi = x
        else:
            lo, flo = x, fx
        width = hi - lo
        if best_f <= _RESIDUAL_RTOL * f_scale and width <= _WIDTH_RTOL * (1 + abs(x)):
            return best_x
        # Alternate forced bisection with Newton so the bracket provably
        # halves at least every other step; pure Newton can polish the root
        # while leaving one bracket endpoint behind.
        x_new = None
        if it % 2 == 0:
            dfx = df(x)
            if dfx != 0.0 and math.isfinite(dfx):
                cand = x - fx / dfx
                if lo < cand < hi:
                    x_new = cand
        if x_new is None:
            x_new = 0.5 * (lo + hi)
            if not lo < x_new < hi:
                # no representable point strictly inside the bracket
                return best_x
        x = x_new
    return best_x


@functools.lru_cache(maxsize=4096)
def solve_beta_roots(N: int, m: float, mu: float, band: float = DEFAULT_BAND) -> BetaRoots:
    """Solve G(beta) = mu for the two roots beta_minus <= beta_star <= beta_plus.

    mu within ``band`` of the Hardy constant is treated as exactly equal to it
    (degenerate double root at beta_star); mu above the constant by more than
    the band raises NoRealRoots.  Results are cached: region scans solve the
    same (N, m, mu) for every grid point.
    """
    ch = hardy_constant(N, m)
    bs = beta_star(N, m)
    if mu > ch + band:
        raise NoRealRoots(f"mu = {mu} exceeds the Hardy constant {ch}")
    if mu >= ch - band:
        res = abs(ch - mu)
        return BetaRoots(bs, bs, bs, True, res, res)

    def f(beta):
        return g_eval(beta, N, m) - mu

    def df(beta):
        return g_prime(beta, N, m)

    f_scale = 1 + abs(mu)
    # G decreases to -inf on both sides of beta_star: double the bracket width
    # until the endpoint values drop below mu.
    T = 1.0
    while f(bs - T) >= 0:
        T *= 2.0
        if T > 1e18:
            raise NoRealRoots("could not bracket beta_minus")
    bm = _bracketed_newton(f, df, bs - T, bs, f_scale)
    T = 1.0
    while f(bs + T) >= 0:
        T *= 2.0
        if T > 1e18:
            raise NoRealRoots("could not bracket beta_plus")
    bp = _bracketed_newton(f, df, bs, bs + T, f_scale)
    return BetaRoots(bm, bp, bs, False, abs(f(bm)), abs(f(bp)))


class SignCase(enum.Enum):
    """Guaranteed sign pattern of the roots, by the case that produced it.

    BOTH_NONPOSITIVE: N > m and mu <= C_H; guarantees beta_minus <= beta_star < 0
    (the sign of beta_plus is not constrained in this case).
    STRADDLE_ZERO:    N <= m and mu < 0; guarantees beta_minus < 0 < beta_plus.
    BOTH_NONNEGATIVE: N <= m and 0 <= mu <= C_H; guarantees 0 <= beta_minus <= beta_star.
    """

    BOTH_NONPOSITIVE = "BothNonpositive"
    STRADDLE_ZERO = "StraddleZero"
    BOTH_NONNEGATIVE = "BothNonnegative"


def sign_classification(roots: BetaRoots, N: int, m: float, mu: float) -> SignCase:
    """Classify the root signs and assert the guaranteed facts on the roots."""
    if N > m:
        case = SignCase.BOTH_NONPOSITIVE
        assert roots.beta_minus <= roots.beta_star < 0
    elif mu < 0:
        case = SignCase.STRADDLE_ZERO
        assert roots.beta_minus < 0 < roots.beta_plus
    else:
        case = SignCase.BOTH_NONNEGATIVE
        assert 0 <= roots.beta_minus + 1e-9 and roots.beta_minus <= roots.beta_star + 1e-9
    return case


@dataclass(frozen=True)
class RadialBump:
    """Smooth closed-form bump amplitude*exp(-1/(1-z^2)), z=(r-center)/halfwidth.

    Compactly supported on (center-halfwidth, center+halfwidth), which must
    stay inside (0, inf).
    """

    center: float
    halfwidth: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.halfwidth > 0 and self.center - self.halfwidth > 0):
            raise DomainError("bump", "support must lie inside (0, inf)")

    def __call__(self, r: float) -> float:
        z = (r - self.center) / self.halfwidth
        if abs(z) >= 1.0:
            return 0.0
        return self.amplitude * math.exp(-1.0 / (1.0 - z * z))

    def derivative(self, r: float) -> float:
        z = (r - self.center) / self.halfwidth
        if abs(z) >= 1.0:
            return 0.0
        w = 1.0 - z * z
        return self(r) * (-2.0 * z / (w * w)) / self.halfwidth


def sphere_area(N: int) -> float:
    """Surface measure of the unit sphere in R^N (equals 2 for N = 1)."""
    return 2.0 * math.pi ** (N / 2) / math.gamma(N / 2)


def hardy_check(phi, N: int, m: float, rtol: float = 1e-10) -> dict:
    """Numerically evaluate both sides of the m-Hardy inequality for a radial bump.

    Returns {"lhs": int |grad phi|^m, "rhs": C_H int |phi|^m / |x|^m}, computed
    by 1-D radial quadrature against the measure r^(N-1) dr times the sphere
    area.  The inequality guarantees lhs >= rhs.
    """
    a, b = phi.center - phi.halfwidth, phi.center + phi.halfwidth
    area = sphere_area(N)
    ch = hardy_constant(N, m)
    lhs_val, lhs_err = quad(
        lambda r: abs(phi.derivative(r)) ** m * r ** (N - 1), a, b, epsabs=0, epsrel=rtol, limit=200
    )
    rhs_val, rhs_err = quad(
        lambda r: abs(phi(r)) ** m * r ** (N - 1 - m), a, b, epsabs=0, epsrel=rtol, limit=200
    )
    lhs, rhs = area * lhs_val, area * ch * rhs_val
    if lhs_err > 1e-6 * (1 + abs(lhs_val)) or rhs_err > 1e-6 * (1 + abs(rhs_val)):
        raise QuadratureFailure("hardy_check quadrature did not reach tolerance")
    return {"lhs": lhs, "rhs": rhs}
