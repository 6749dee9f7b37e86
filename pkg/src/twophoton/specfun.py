"""Special functions: Kummer's confluent hypergeometric function, J0, scaled I0,
Laguerre polynomials.

Only the positive-parameter, nonnegative-argument Kummer function is needed
(every term of the series is positive, so there is no cancellation). Large
arguments overflow a double, hence the log-scaled variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError

SERIES_TOL = 1e-17
MAX_TERMS = 20_000

_RESCALE_AT = 2.0**512
_RESCALE_BITS = 512


@dataclass(frozen=True)
class LogScaledReal:
    """Nonnegative real stored as ``mantissa * 2**exponent``.

    ``mantissa`` lies in [1, 2), or is exactly 0 for the value zero.
    """

    mantissa: float
    exponent: int = 0

    def __post_init__(self):
        m = self.mantissa
        if not (m == 0.0 or 1.0 <= m < 2.0):
            raise ValueError(f"mantissa {m!r} not in [1, 2)")
        if m == 0.0 and self.exponent != 0:
            raise ValueError("zero must have exponent 0")

    @classmethod
    def scaled(cls, value: float, exponent: int = 0) -> "LogScaledReal":
        """Normalize ``value * 2**exponent``."""
        if value < 0 or not math.isfinite(value):
            raise DomainError(f"cannot represent {value!r}")
        if value == 0.0:
            return cls(0.0, 0)
        m, e = math.frexp(value)
        return cls(2.0 * m, exponent + e - 1)

    @classmethod
    def from_float(cls, value: float) -> "LogScaledReal":
        return cls.scaled(float(value))

    @classmethod
    def from_log(cls, log_value: float) -> "LogScaledReal":
        """Build from a natural logarithm."""
        log2 = log_value / math.log(2.0)
        e = math.floor(log2)
        return cls.scaled(2.0 ** (log2 - e), e)

    def __float__(self) -> float:
        # ldexp raises OverflowError past the double range
        return math.ldexp(self.mantissa, self.exponent)

    def log(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(self.mantissa) + self.exponent * math.log(2.0)

    def __mul__(self, other: "LogScaledReal") -> "LogScaledReal":
        return LogScaledReal.scaled(self.mantissa * other.mantissa,
                                    self.exponent + other.exponent)

    def __truediv__(self, other: "LogScaledReal") -> "LogScaledReal":
        if other.mantissa == 0.0:
            raise ZeroDivisionError("division by log-scaled zero")
        return LogScaledReal.scaled(self.mantissa / other.mantissa,
                                    self.exponent - other.exponent)


def _check_kummer_args(a, c, x):
    if not (a > 0 and c > 0):
        raise DomainError(f"Kummer parameters must be positive, got a={a}, c={c}")
    if not x >= 0:
        raise DomainError(f"Kummer argument must be nonnegative, got x={x}")


def _tail_ratio(a, c, x, j):
    """Upper bound on the term ratio t_{i+1}/t_i for every i >= j."""
    b1 = x / (j + 1) * max(1.0, (a + j) / (c + j))
    b2 = max(1.0, (a + j) / (j + 1)) * x / (c + j)
    return min(b1, b2)


def kummer_phi_log(a: float, c: float, x: float) -> LogScaledReal:
    """Phi(a; c; x) as a :class:`LogScaledReal`, for a, c > 0 and x >= 0."""
    _check_kummer_args(a, c, x)
    a, c, x = float(a), float(c), float(x)
    term = 1.0
    total = 1.0
    exp2 = 0
    for k in range(MAX_TERMS):
        term *= (a + k) * x / ((c + k) * (k + 1))
        total += term
        if total > _RESCALE_AT:
            term = math.ldexp(term, -_RESCALE_BITS)
            total = math.ldexp(total, -_RESCALE_BITS)
            exp2 += _RESCALE_BITS
        if term == 0.0:
            return LogScaledReal.scaled(total, exp2)
        rho = _tail_ratio(a, c, x, k + 1)
        if rho < 1.0 and term * rho / (1.0 - rho) < SERIES_TOL * total:
            return LogScaledReal.scaled(total, exp2)
    raise ConvergenceError(
        f"Kummer series did not converge in {MAX_TERMS} terms (a={a}, c={c}, x={x})")


def kummer_phi(a: float, c: float, x: float) -> float:
    """Phi(a; c; x) as a plain float.

    Raises OverflowError when the value leaves the double range; use
    :func:`kummer_phi_log` there.
    """
    return float(kummer_phi_log(a, c, x))


def kummer_phi_mp(a, c, x):
    """Same series in mpmath arithmetic at the caller's working precision."""
    _check_kummer_args(a, c, x)
    a, c, x = mpmath.mpf(a), mpmath.mpf(c), mpmath.mpf(x)
    tol = mpmath.mpf(2) ** (-mpmath.mp.prec - 4)
    term = mpmath.mpf(1)
    total = mpmath.mpf(1)
    for k in range(MAX_TERMS):
        term *= (a + k) * x / ((c + k) * (k + 1))
        total += term
        if term == 0:
            return total
        rho = _tail_ratio(float(a), float(c), float(x), k + 1)
        if rho < 1.0 and term * rho / (1.0 - rho) < tol * total:
            return total
    raise ConvergenceError(
        f"Kummer series did not converge in {MAX_TERMS} terms (a={a}, c={c}, x={x})")


# ---------------------------------------------------------------- Bessel J0

_J0_SERIES_MAX = 8.0
_J0_ASYMPTOTIC_MIN = 25.0


def _j0_series(x):
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if abs(term) < 1e-18:
            return total


def _j0_trapezoid(x):
    # J0(x) = (1/pi) int_0^pi cos(x sin t) dt; the integrand has period pi,
    # so the trapezoid error is 2*J_{2N}(x)
    n = int(x) + 40
    theta = np.arange(n) * (math.pi / n)
    return float(np.mean(np.cos(x * np.sin(theta))))


def _hankel_pq(x):
    """P and Q of the large-argument expansion of J0."""
    p = 0.0
    q = 0.0
    term = 1.0
    k = 0
    while True:
        if k % 4 == 0:
            p += term
        elif k % 4 == 1:
            q -= term
        elif k % 4 == 2:
            p -= term
        else:
            q += term
        nxt = term * (2 * k + 1) ** 2 / ((k + 1) * 8.0 * x)
        if nxt > term or abs(nxt) < 1e-17:
            return p, q
        term = nxt
        k += 1


def _j0_scalar(x: float) -> float:
    x = float(x)
    if x < 0:
        raise DomainError(f"bessel_j0 defined here for x >= 0, got {x}")
    if x <= _J0_SERIES_MAX:
        return _j0_series(x)
    if x <= _J0_ASYMPTOTIC_MIN:
        return _j0_trapezoid(x)
    p, q = _hankel_pq(x)
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


# ---------------------------------------------------------------- Bessel I0

_I0_SERIES_MAX = 30.0


def _i0_scaled_scalar(x: float) -> float:
    x = float(x)
    if x < 0:
        raise DomainError(f"bessel_i0_scaled defined here for x >= 0, got {x}")
    if x <= _I0_SERIES_MAX:
        q = 0.25 * x * x
        term = 1.0
        total = 1.0
        k = 0
        while term > 1e-18 * total:
            k += 1
            term *= q / (k * k)
            total += term
        return total * math.exp(-x)
    total = 1.0
    term = 1.0
    k = 0
    while True:
        nxt = term * (2 * k + 1) ** 2 / ((k + 1) * 8.0 * x)
        if nxt > term or nxt < 1e-18:
            break
        total += nxt
        term = nxt
        k += 1
    return total / math.sqrt(2.0 * math.pi * x)


def _scalar_or_array(fn, x):
    if np.ndim(x) == 0:
        return fn(x)
    arr = np.asarray(x, dtype=float)
    return np.array([fn(v) for v in arr.ravel()]).reshape(arr.shape)


def bessel_j0(x):
    """Bessel function J0 for x >= 0 (scalar or array)."""
    return _scalar_or_array(_j0_scalar, x)


def bessel_i0_scaled(x):
    """exp(-x) * I0(x) for x >= 0 (scalar or array)."""
    return _scalar_or_array(_i0_scaled_scalar, x)


# ---------------------------------------------------------------- Laguerre

def laguerre(n: int, x):
    """Laguerre polynomial L_n(x) by the three-term recurrence."""
    if n < 0:
        raise DomainError(f"Laguerre degree must be >= 0, got {n}")
    return laguerre_all(n, x)[n]


def laguerre_all(nmax: int, x):
    """Array of L_0(x) .. L_nmax(x); rows are degrees.

    Works on numbers, numpy arrays and ``fractions.Fraction`` scalars.
    """
    if np.ndim(x) != 0:
        x = np.asarray(x, dtype=float)
    out = [x * 0 + 1]
    if nmax >= 1:
        out.append(1 - x)
    for k in range(1, nmax):
        out.append(((2 * k + 1 - x) * out[k] - k * out[k - 1]) / (k + 1))
    if np.ndim(x) != 0:
        return np.stack(out)
    return out
