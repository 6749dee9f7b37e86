"""Closed-form stationary generating functions and their limits.

For two-photon absorption, saturated two-photon emission and one-photon
absorption/emission the stationary generating function is

    F(z) = exp(h (1 - z)) Phi(a; c; R (1 + z)) / Phi(a; c; 2R)

with a = nu g, c = nu (1 + s), R = sqrt((nu s)^2 + 4 r^2),
h = (R - nu s)/2 and g = [s + sigma + h (1 + s)]/R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import mpmath

from .distribution import PhotonDistribution, beta_from_initial  # noqa: F401
from .errors import DegenerateFamilyError, DomainError
from .oracle import choose_truncation
from .rates import DimensionlessParams, RawRates
from .specfun import LogScaledReal, kummer_phi_log, kummer_phi_mp

MAX_MOMENT = 4


@dataclass(frozen=True)
class GfClosedForm:
    params: DimensionlessParams
    R: float
    h: float
    g: float
    a: float
    c: float
    norm: LogScaledReal

    def __call__(self, z: float) -> float:
        return gf_eval(self, z)


@dataclass(frozen=True)
class PaeosParams:
    """Phase-averaged even/odd state: odd weight ``beta`` and scale ``r``.

    ``s_eff`` is set when beta was derived from the weak one-photon limit.
    r = 0 is the degenerate limit in which the state lives on |0>, |1>.
    """

    beta: float
    r: float
    s_eff: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [0, 1], got {self.beta}")
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise DomainError(f"r must be finite and >= 0, got {self.r}")

    @property
    def is_vacuum(self) -> bool:
        return self.r == 0.0 and self.beta == 0.0


@dataclass(frozen=True)
class No2aForm:
    """Parameters of the branch without two-photon absorption."""

    rho: float
    s: float
    sigma: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise DomainError(f"closed form valid only for s in (0, 1), got s={self.s}")
        if self.rho < 0 or self.sigma < 0:
            raise DomainError("rho and sigma must be nonnegative")

    @property
    def gamma(self) -> float:
        return (self.sigma + self.rho + self.rho / self.s) / self.s

    def to_raw(self) -> RawRates:
        return RawRates(d1a=1.0, d1e=self.s, d11e=self.sigma, d2e=self.rho)


@dataclass(frozen=True)
class AnalyticSolution:
    """Distribution of a limit regime together with its generating function."""

    distribution: PhotonDistribution
    gf: Callable[[float], float]
    mean: float


# ------------------------------------------------------------- closed form

def _constants(nu, s, sigma, r, sqrt, ):
    R = sqrt((nu * s) ** 2 + 4 * r * r)
    # h = (R - nu s)/2 without the cancellation at large nu
    h = 2 * r * r / (R + nu * s)
    g = (s + sigma + h * (1 + s)) / R
    return R, h, g


def closed_form(params: DimensionlessParams) -> GfClosedForm:
    """Constants and normalization of the stationary generating function."""
    nu, s, sigma, r = params.nu, params.s, params.sigma, params.r
    if nu == 0:
        raise DegenerateFamilyError(
            "nu = 0: parity is conserved and the steady state depends on the initial "
            "odd weight; use the phase-averaged even/odd branch", route="paeos")
    if r == 0 and nu * s == 0:
        if sigma == 0:
            raise DegenerateFamilyError("R = 0 with sigma = 0: the steady state is the vacuum",
                                        route="vacuum")
        raise DegenerateFamilyError("R = 0 with sigma > 0 has no closed form; use the oracle",
                                    route="oracle")
    R, h, g = _constants(nu, s, sigma, r, math.sqrt)
    a = nu * g
    c = nu * (1 + s)
    return GfClosedForm(params, R, h, g, a, c, kummer_phi_log(a, c, 2 * R))


def gf_eval(cf: GfClosedForm, z: float) -> float:
    """F(z) for z in [-1, 1]."""
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"z must lie in [-1, 1], got {z}")
    if z == 1.0:
        return 1.0
    log_f = cf.h * (1 - z) + kummer_phi_log(cf.a, cf.c, cf.R * (1 + z)).log() - cf.norm.log()
    return math.exp(log_f)


def _working_dps(h: float) -> int:
    # the e^{-hz} factor has alternating coefficients; the Cauchy product
    # loses about 2h/ln(10) digits
    return 25 + int(math.ceil(2 * h / math.log(10)))


def photon_probabilities(cf: GfClosedForm, nmax: Optional[int] = None,
                         eps: float = 1e-12) -> PhotonDistribution:
    """Taylor coefficients p_0..p_nmax of F about z = 0.

    p_n is the Cauchy product of the series of exp(-h z) with the Taylor
    series of Phi(a; c; R(1+z)), whose m-th coefficient is
    (R^m/m!) (a)_m/(c)_m Phi(a+m; c+m; R). It runs in extended precision
    because of the alternating exponential factor.
    """
    if nmax is None:
        nmax = choose_truncation(cf.params, eps)
    if nmax < 1:
        raise DomainError(f"nmax must be >= 1, got {nmax}")
    p = cf.params
    with mpmath.workdps(_working_dps(cf.h)):
        nu, s, sigma, r = (mpmath.mpf(v) for v in (p.nu, p.s, p.sigma, p.r))
        R, h, g = _constants(nu, s, sigma, r, mpmath.sqrt)
        a = nu * g
        c = nu * (1 + s)
        taylor = []
        coef = mpmath.mpf(1)
        for m in range(nmax + 1):
            taylor.append(coef * kummer_phi_mp(a + m, c + m, R))
            coef *= R * (a + m) / ((c + m) * (m + 1))
        expo = [mpmath.mpf(1)]
        for j in range(1, nmax + 1):
            expo.append(expo[-1] * (-h) / j)
        pref = mpmath.exp(h) / kummer_phi_mp(a, c, 2 * R)
        probs = [pref * mpmath.fsum(expo[n - k] * taylor[k] for k in range(n + 1))
                 for n in range(nmax + 1)]
        tail = 1 - mpmath.fsum(probs)
        values = [float(v) for v in probs]
        tail = float(tail)
    return PhotonDistribution.from_values(values, tail)


def factorial_moment(cf: GfClosedForm, m: int) -> float:
    """m-th derivative of F at z = 1 by the product rule (1 <= m <= 4)."""
    if not 1 <= m <= MAX_MOMENT:
        raise DomainError(f"factorial moments supported for 1 <= m <= {MAX_MOMENT}, got {m}")
    total = 0.0
    poch = 1.0
    for k in range(m + 1):
        if k > 0:
            poch *= (cf.a + k - 1) / (cf.c + k - 1)
        ratio = math.exp(kummer_phi_log(cf.a + k, cf.c + k, 2 * cf.R).log() - cf.norm.log())
        total += math.comb(m, k) * (-cf.h) ** (m - k) * cf.R**k * poch * ratio
    return total


def mandel_q(cf: GfClosedForm) -> float:
    n1 = factorial_moment(cf, 1)
    if n1 <= 0:
        raise DomainError("Mandel Q undefined for zero mean photon number")
    return factorial_moment(cf, 2) / n1 - n1


# ------------------------------------------------------------ limit regimes

def _collect(terms: Iterator[float], eps: float, nmax: Optional[int],
             min_len: int = 20, max_len: int = 200_000) -> PhotonDistribution:
    """Take terms until the missing mass 1 - sum drops below eps.

    When eps is below round-off the missing mass can stall just above it;
    then we also stop once the terms decay and the geometric tail estimate
    is far below eps.
    """
    probs: list[float] = []
    acc = 0.0
    prev = math.inf
    for n, t in enumerate(terms):
        probs.append(t)
        if nmax is not None:
            if n == nmax:
                break
            continue
        acc += t
        if t == 0.0:
            # parity-pure distributions: compare against the last nonzero term
            continue
        if n + 1 >= min_len and t < prev:
            missing = 1.0 - math.fsum(probs) if 1.0 - acc < 1e-3 else 1.0 - acc
            ratio = t / prev
            if missing < eps or (missing < 1e-13 and t * ratio / (1 - ratio) < 1e-3 * eps):
                break
        prev = t
        if n >= max_len:
            raise DomainError("distribution tail did not fall below eps")
    return PhotonDistribution.from_values(probs, 1.0 - math.fsum(probs))


def negbin_limit(s: float, sigma: float = 0.0, nmax: Optional[int] = None,
                 eps: float = 1e-12) -> AnalyticSolution:
    """Dominant one-photon processes (nu -> infinity): negative binomial law."""
    if not 0.0 < s < 1.0:
        raise DomainError(f"negative binomial limit valid only for 0 < s < 1, got s={s}")
    if sigma < 0:
        raise DomainError("sigma must be nonnegative")
    alpha = 1.0 + sigma / s

    def terms():
        p = math.exp(alpha * math.log1p(-s))
        n = 0
        while True:
            yield p
            p *= s * (n + alpha) / (n + 1)
            n += 1

    def gf(z: float) -> float:
        return ((1.0 - s) / (1.0 - s * z)) ** alpha

    return AnalyticSolution(_collect(terms(), eps, nmax), gf, alpha * s / (1.0 - s))


def no_two_photon_absorption(form: No2aForm, nmax: Optional[int] = None,
                             eps: float = 1e-12) -> AnalyticSolution:
    """Branch without two-photon absorption (first-order equation for F)."""
    s, sigma, rho = form.s, form.sigma, form.rho
    alpha = 1.0 + form.gamma
    lam = rho / s
    lead = s + sigma + rho

    def terms():
        # (1 - s z) F' = (lead + rho z) F, read off F'/F of the closed form
        prev = 0.0
        p = math.exp(alpha * math.log1p(-s) + lam)
        n = 0
        while True:
            yield p
            prev, p = p, ((s * n + lead) * p + rho * prev) / (n + 1)
            n += 1

    def gf(z: float) -> float:
        return ((1.0 - s) / (1.0 - s * z)) ** alpha * math.exp(lam * (1.0 - z))

    mean = alpha * s / (1.0 - s) - lam
    return AnalyticSolution(_collect(terms(), eps, nmax), gf, mean)


def paeos_limit(params: DimensionlessParams) -> PaeosParams:
    """Odd weight of the stationary state when one-photon processes are weak."""
    r = params.r
    S = params.S
    if r == 0:
        if S == 0:
            return PaeosParams(0.0, 0.0, 0.0)
        return PaeosParams(S / (1.0 + 2.0 * S), 0.0, S)
    if r < 20:
        # beta = x / (2 (1 + x)) with x = cosh 2r - 1 + (S/r) sinh 2r; never above 1/2
        x = 2.0 * math.sinh(r) ** 2 + (S / r) * math.sinh(2 * r)
        beta = 0.5 * x / (1.0 + x)
    else:
        # 1 - 2 beta = 1/[cosh 2r + (S/r) sinh 2r]
        q = math.exp(-4 * r)
        beta = 0.5 - math.exp(-2 * r) / ((1 + q) + (S / r) * (1 - q))
    return PaeosParams(beta, r, S)


def _log_cosh(r):
    return r + math.log1p(math.exp(-2 * r)) - math.log(2.0)


def _log_sinh(r):
    if r < 1.0:
        return math.log(math.sinh(r))
    return r + math.log1p(-math.exp(-2 * r)) - math.log(2.0)


def paeos_probabilities(p: PaeosParams, nmax: Optional[int] = None,
                        eps: float = 1e-12) -> PhotonDistribution:
    """Even/odd coherent-state photon statistics mixed with odd weight beta."""
    beta, r = p.beta, p.r
    if r == 0:
        vals = [1.0 - beta, beta] + [0.0] * (max(nmax or 1, 1) - 1)
        return PhotonDistribution.from_values(vals[: (nmax or 1) + 1])
    log_r = math.log(r)
    lc, ls = _log_cosh(r), _log_sinh(r)

    def terms():
        n = 0
        while True:
            weight, log_norm = (1.0 - beta, lc) if n % 2 == 0 else (beta, ls)
            if weight == 0.0:
                yield 0.0
            else:
                yield weight * math.exp(n * log_r - math.lgamma(n + 1) - log_norm)
            n += 1

    return _collect(terms(), eps, nmax)


def paeos_mandel_q(p: PaeosParams) -> float:
    """Q = (r/B)(1 - B^2) with B = (1-beta) tanh r + beta coth r."""
    r, beta = p.r, p.beta
    if r <= 0:
        raise DomainError("Mandel Q of the phase-averaged state needs r > 0")
    # coth r - tanh r = 2/sinh 2r
    b = math.tanh(r) + beta * 2.0 / math.sinh(2 * r) if r < 300 else math.tanh(r)
    return r * (1.0 - b * b) / b


def sub_poisson_threshold(r: float) -> float:
    """Odd weight above which the phase-averaged state is sub-Poissonian."""
    return -0.5 * math.expm1(-2 * r)


def _sech_sq(x):
    q = math.exp(-2 * x)
    return 4 * q / (1 + q) ** 2


def paeos_mandel_q_weak(r: float, S: float) -> float:
    """Mandel Q of the weak one-photon stationary state."""
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    if S < 0:
        raise DomainError(f"S must be nonnegative, got {S}")
    u = S / r
    t = math.tanh(2 * r)
    return r * (1 - u * u) * _sech_sq(2 * r) / ((1 + u * t) * (u + t))


# ---------------------------------------------------------------- dispatch

def vacuum(nmax: int = 1) -> PhotonDistribution:
    return PhotonDistribution.fock(0, nmax)


def stationary_distribution(params: DimensionlessParams, nmax: Optional[int] = None,
                            eps: float = 1e-12) -> PhotonDistribution:
    """Closed-form stationary distribution, routing the vacuum branch.

    Raises DegenerateFamilyError for nu = 0 and for R = 0 with sigma > 0.
    """
    try:
        cf = closed_form(params)
    except DegenerateFamilyError as err:
        if err.route == "vacuum":
            return vacuum(nmax or 1)
        raise
    return photon_probabilities(cf, nmax, eps)
