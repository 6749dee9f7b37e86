"""Radial Wigner functions of phase-symmetric photon-number mixtures.

Convention: W_n(p, q) = 2 (-1)^n exp(-p^2 - q^2) L_n(2 p^2 + 2 q^2), so every
state integrates to 2*pi over the plane, i.e. int_0^inf W(x) x dx = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import PhotonDistribution
from .errors import DomainError
from .gf import PaeosParams
from .specfun import bessel_i0_scaled, bessel_j0, laguerre, laguerre_all

MIXTURE_CUTOFF = 1e-12


@dataclass(frozen=True)
class RadialWignerCurve:
    xs: np.ndarray
    ws: np.ndarray

    def __post_init__(self):
        if len(self.xs) != len(self.ws):
            raise DomainError("xs and ws must have equal length")
        if np.any(np.diff(self.xs) <= 0) or self.xs[0] < 0:
            raise DomainError("xs must be nonnegative and increasing")


@dataclass(frozen=True)
class PureEocsParams:
    """Even (sign=+1) or odd (sign=-1) coherent state centred at (qbar, pbar)."""

    qbar: float
    pbar: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 (even) or -1 (odd)")
        if self.sign == -1 and self.alpha_sq == 0:
            raise DomainError("the odd coherent state is undefined at alpha = 0")

    @property
    def alpha_sq(self) -> float:
        return 0.5 * (self.qbar**2 + self.pbar**2)

    @property
    def norm_sq(self) -> float:
        """N^2 = exp(|a|^2) / (4 cosh|a|^2) or / (4 sinh|a|^2)."""
        a2 = self.alpha_sq
        q = math.exp(-2 * a2)
        if self.sign == 1:
            return 0.5 / (1 + q)
        return 0.5 / -math.expm1(-2 * a2)


def wigner_fock_radial(n: int, x):
    """Radial Wigner function of the Fock state |n>."""
    x = np.asarray(x, dtype=float)
    val = 2.0 * (-1) ** n * np.exp(-x * x) * laguerre(n, 2 * x * x)
    return float(val) if val.ndim == 0 else val


def wigner_mixture_radial(probs: PhotonDistribution, x):
    """Sum_n p_n W_n(x), dropping trailing terms with 2 p_n < 1e-12."""
    p = probs.probs
    big = np.flatnonzero(2.0 * p >= MIXTURE_CUTOFF)
    last = int(big[-1]) if big.size else 0
    x = np.asarray(x, dtype=float)
    lag = laguerre_all(last, 2 * x * x)
    signs = (-1.0) ** np.arange(last + 1)
    coeff = (signs * p[: last + 1]).reshape((-1,) + (1,) * x.ndim)
    val = 2.0 * np.exp(-x * x) * np.sum(coeff * lag, axis=0)
    return float(val) if val.ndim == 0 else val


def wigner_paeos_radial(p: PaeosParams, x):
    """Closed-form Wigner function of the phase-averaged even/odd mixture.

    W = exp(-x^2)/sinh(2r) {[1 - (1-2b) e^{-2r}] I0(y) + [(1-2b) e^{2r} - 1] J0(y)},
    y = sqrt(8r) x, evaluated with exponents combined so r ~ 10 and beyond
    never overflows.
    """
    r, beta = p.r, p.beta
    if r <= 0:
        raise DomainError("closed-form Wigner function needs r > 0")
    x = np.asarray(x, dtype=float)
    y = math.sqrt(8 * r) * x
    d = 1.0 - 2.0 * beta
    e2 = math.exp(-2 * r)
    inv_one_minus = 1.0 / -math.expm1(-4 * r)   # 1/(1 - e^{-4r})
    # 1/sinh(2r) = 2 e^{-2r} / (1 - e^{-4r})
    c_i = (1.0 - d * e2) * 2.0 * inv_one_minus
    c_j = (d - e2) * 2.0 * inv_one_minus
    term_i = c_i * bessel_i0_scaled(y) * np.exp(-x * x + y - 2 * r)
    term_j = c_j * np.exp(-x * x) * bessel_j0(y)
    val = term_i + term_j
    return float(val) if np.ndim(val) == 0 else val


def wigner_pure_eocs(p: PureEocsParams, q, pp):
    """Wigner function of a pure even/odd coherent state at (q, p)."""
    q = np.asarray(q, dtype=float)
    pp = np.asarray(pp, dtype=float)
    c2 = p.qbar**2 + p.pbar**2
    if p.sign == -1 and c2 < 1.0:
        # small odd cat: the three terms nearly cancel, regroup with expm1
        u = 2.0 * (q * p.qbar + pp * p.pbar)
        v = 2.0 * (q * p.pbar - pp * p.qbar)
        em = math.expm1(-c2)
        inner = em * np.cosh(u) + 2.0 * np.sinh(u / 2) ** 2 + 2.0 * np.sin(v / 2) ** 2
        val = 2.0 * np.exp(-q * q - pp * pp) * inner / -em
        return float(val) if np.ndim(val) == 0 else val
    g1 = np.exp(-(q - p.qbar) ** 2 - (pp - p.pbar) ** 2)
    g2 = np.exp(-(q + p.qbar) ** 2 - (pp + p.pbar) ** 2)
    fringe = 2.0 * np.exp(-q * q - pp * pp) * np.cos(2.0 * (q * p.pbar - pp * p.qbar))
    val = 2.0 * p.norm_sq * (g1 + g2 + p.sign * fringe)
    return float(val) if np.ndim(val) == 0 else val


def phase_average(r: float, sign: int, q: float, pp: float, nodes: int = 256,
                  tol: float = 1e-8, max_nodes: int = 1 << 16) -> float:
    """Average of the pure even/odd Wigner function over the coherent phase.

    Centres run over qbar = sqrt(2r) cos(phi), pbar = sqrt(2r) sin(phi).
    The integrand is periodic, so the trapezoid rule converges
    spectrally; the node count doubles until successive values agree
    to ``tol``.
    """
    if r <= 0:
        raise DomainError("phase average needs r > 0")
    if nodes < 64:
        raise DomainError("use at least 64 quadrature nodes")
    amp = math.sqrt(2 * r)
    # every centre on the circle has |alpha|^2 = r, so N^2 is constant
    norm_sq = PureEocsParams(amp, 0.0, sign).norm_sq

    def trapezoid(m):
        phi = np.arange(m) * (2 * math.pi / m)
        qb, pb = amp * np.cos(phi), amp * np.sin(phi)
        g1 = np.exp(-(q - qb) ** 2 - (pp - pb) ** 2)
        g2 = np.exp(-(q + qb) ** 2 - (pp + pb) ** 2)
        fringe = 2.0 * math.exp(-q * q - pp * pp) * np.cos(2.0 * (q * pb - pp * qb))
        return float(np.mean(2.0 * norm_sq * (g1 + g2 + sign * fringe)))

    prev = trapezoid(nodes)
    while nodes < max_nodes:
        nodes *= 2
        cur = trapezoid(nodes)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def _bessel_sums(r):
    """(I0(2r) + J0(2r))/2 and (I0(2r) - J0(2r))/2 as positive series."""
    u = r * r
    even = 1.0
    odd = 0.0
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= u / (k * k)
        if k % 2:
            odd += term
        else:
            even += term
        if term < 1e-18 * even:
            return even, odd


def purity_paeos(p: PaeosParams) -> float:
    """Tr(rho^2) of the phase-averaged even/odd mixture."""
    r, beta = p.r, p.beta
    if r <= 0:
        if r == 0:
            return (1 - beta) ** 2 + beta**2
        raise DomainError("r must be >= 0")
    if r <= 15:
        even, odd = _bessel_sums(r)
        return ((1 - beta) / math.cosh(r)) ** 2 * even + (beta / math.sinh(r)) ** 2 * odd
    # large r: I0(2r)/cosh^2 r = 4 i0e(2r)/(1+e^{-2r})^2, J0 terms carry e^{-2r}
    q = math.exp(-2 * r)
    i0s = bessel_i0_scaled(2 * r)
    j0 = bessel_j0(2 * r)
    sech2 = 4 * q / (1 + q) ** 2
    csch2 = 4 * q / (1 - q) ** 2
    ch = (4 * i0s / (1 + q) ** 2 + sech2 * j0) / 2
    sh = (4 * i0s / (1 - q) ** 2 - csch2 * j0) / 2
    return (1 - beta) ** 2 * ch + beta**2 * sh


def purity_from_probs(probs: PhotonDistribution) -> float:
    return probs.purity()


def radial_curve(p: PaeosParams, xmax: float = 8.0, points: int = 801) -> RadialWignerCurve:
    if points < 2:
        raise DomainError("need at least two grid points")
    xs = np.linspace(0.0, xmax, points)
    return RadialWignerCurve(xs, np.asarray(wigner_paeos_radial(p, xs)))


def radial_norm(fn, upper: float = np.inf) -> float:
    """int_0^upper W(x) x dx by adaptive quadrature."""
    from scipy.integrate import quad

    val, _ = quad(lambda t: fn(t) * t, 0.0, upper, limit=400, epsabs=1e-12, epsrel=1e-12)
    return val
