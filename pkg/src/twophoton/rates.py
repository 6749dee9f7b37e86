"""Rate coefficients of the one-/two-photon master equation and the truncated
generator of the population dynamics.

Transition convention (state m is the photon number before the jump):

* k-photon absorption  m -> m-k  at rate  m!/(m-k)! * f_k^a(m-k)
* k-photon emission    m -> m+k  at rate  (m+k)!/m! * f_k^e(m)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sps

from .errors import DomainError, NegativeRateError


@dataclass(frozen=True)
class RawRates:
    """Nonnegative coefficients of the exactly solvable rate family.

    ``w1e`` holds ``(j, weight)`` pairs of the extra one-photon emission
    terms; only j >= 0, j != 1 is accepted (negative j makes the emission
    rate negative at small n).
    """

    d1a: float = 0.0
    d2a: float = 0.0
    d1e: float = 0.0
    d2e: float = 0.0
    d11e: float = 0.0
    d10a: float = 0.0
    d12a: float = 0.0
    w1e: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "w1e", tuple((int(j), float(w)) for j, w in self.w1e))
        for name in ("d1a", "d2a", "d1e", "d2e", "d11e", "d10a", "d12a"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be finite and >= 0, got {v}")
        js = [j for j, _ in self.w1e]
        if len(set(js)) != len(js):
            raise DomainError(f"w1e indices must be distinct, got {js}")
        for j, w in self.w1e:
            if j < 0 or j == 1:
                raise DomainError(f"w1e index must satisfy j >= 0, j != 1; got {j}")
            if not (w >= 0 and math.isfinite(w)):
                raise DomainError(f"w1e weight must be >= 0, got {w}")
        if not self.any_positive():
            raise DomainError("at least one rate coefficient must be positive")

    def any_positive(self) -> bool:
        coeffs = (self.d1a, self.d2a, self.d1e, self.d2e, self.d11e, self.d10a, self.d12a)
        return any(v > 0 for v in coeffs) or any(w > 0 for _, w in self.w1e)

    @property
    def is_five_parameter(self) -> bool:
        return self.d10a == 0 and self.d12a == 0 and not any(w > 0 for _, w in self.w1e)

    @classmethod
    def from_mapping(cls, data: Mapping) -> "RawRates":
        """Build from the JSON-config form (absent keys default to 0)."""
        w1e = tuple((int(e["j"]), float(e["w"])) for e in data.get("w1e", ()))
        keys = ("d1a", "d2a", "d1e", "d2e", "d11e", "d10a", "d12a")
        return cls(**{k: float(data.get(k, 0.0)) for k in keys}, w1e=w1e)


@dataclass(frozen=True)
class SaturatedEmission:
    """Scully-Lamb-type k-photon gain d / (1 + gamma * (n+k)!/n!)."""

    k: int
    d: float
    gamma: float = 0.0

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"emission order k must be >= 1, got {self.k}")
        if not (self.d >= 0 and self.gamma >= 0):
            raise DomainError("d and gamma must be nonnegative")


@dataclass(frozen=True)
class DimensionlessParams:
    """Rates normalized by two-photon absorption: nu, s, sigma, r."""

    nu: float
    s: float = 0.0
    sigma: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        for name in ("nu", "s", "sigma", "r"):
            v = getattr(self, name)
            if not (v >= 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be finite and >= 0, got {v}")

    @property
    def S(self) -> float:
        """Effective one-photon emission strength (s + sigma)/(s + 1)."""
        return (self.s + self.sigma) / (self.s + 1.0)

    def to_raw(self, d2a: float = 1.0) -> RawRates:
        """Rates with the given two-photon absorption scale."""
        return RawRates(d1a=self.nu * d2a, d2a=d2a, d1e=self.nu * self.s * d2a,
                        d11e=self.nu * self.sigma * d2a, d2e=self.r**2 * d2a)


def rising(n: int, k: int) -> float:
    """(n+k)!/n!"""
    return float(math.prod(range(n + 1, n + k + 1)))


def f1_absorption(n: int, raw: RawRates) -> float:
    return raw.d1a + raw.d10a * n + raw.d12a * (n + 2)


def f1_emission(n: int, raw: RawRates) -> float:
    extra = raw.d11e + sum(w * (n + j) for j, w in raw.w1e)
    return raw.d1e + extra / (n + 1)


def f2_emission(n: int, raw: RawRates) -> float:
    return raw.d2e / ((n + 1) * (n + 2))


def f2_absorption(n: int, raw: RawRates) -> float:
    return raw.d2a


def saturated_emission_rate(n: int, spec: SaturatedEmission) -> float:
    return spec.d / (1.0 + spec.gamma * rising(n, spec.k))


def to_dimensionless(raw: RawRates) -> DimensionlessParams:
    """Reduce the five-parameter subfamily to (nu, s, sigma, r)."""
    if raw.d2a <= 0:
        raise DomainError(
            "d2a = 0: no two-photon absorption; use the no-two-photon-absorption limit")
    if not raw.is_five_parameter:
        raise DomainError("d10a, d12a and w1e must vanish for the dimensionless reduction")
    if raw.d1a == 0:
        if raw.d1e > 0 or raw.d11e > 0:
            raise DomainError("s and sigma are undefined when d1a = 0 and d1e, d11e > 0")
        s = sigma = 0.0
    else:
        s = raw.d1e / raw.d1a
        sigma = raw.d11e / raw.d1a
    return DimensionlessParams(nu=raw.d1a / raw.d2a, s=s, sigma=sigma,
                               r=math.sqrt(raw.d2e / raw.d2a))


@dataclass(frozen=True)
class RateTable:
    """Rate functions f_k^a, f_k^e tabulated on n = 0..nmax."""

    nmax: int
    absorption: dict[int, np.ndarray] = field(default_factory=dict)
    emission: dict[int, np.ndarray] = field(default_factory=dict)

    @classmethod
    def from_rates(cls, raw: RawRates | None, nmax: int,
                   saturated: Sequence[SaturatedEmission] = ()) -> "RateTable":
        ns = range(nmax + 1)
        absorption: dict[int, np.ndarray] = {}
        emission: dict[int, np.ndarray] = {}
        if raw is not None:
            absorption[1] = np.array([f1_absorption(n, raw) for n in ns])
            absorption[2] = np.array([f2_absorption(n, raw) for n in ns])
            emission[1] = np.array([f1_emission(n, raw) for n in ns])
            emission[2] = np.array([f2_emission(n, raw) for n in ns])
        for sat in saturated:
            vals = np.array([saturated_emission_rate(n, sat) for n in ns])
            emission[sat.k] = emission.get(sat.k, 0.0) + vals
        return cls(nmax, absorption, emission)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Truncated rate matrix G with dp/dt = G p (column = source state)."""

    nmax: int
    matrix: sps.csc_matrix

    @property
    def size(self) -> int:
        return self.nmax + 1

    @property
    def bandwidth(self) -> int:
        coo = self.matrix.tocoo()
        if coo.nnz == 0:
            return 0
        return int(np.max(np.abs(coo.row - coo.col)))

    def column_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def is_parity_split(self) -> bool:
        """True when no nonzero entry couples even and odd photon numbers."""
        coo = self.matrix.tocoo()
        mask = coo.data != 0
        return bool(np.all((coo.row[mask] - coo.col[mask]) % 2 == 0))

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def apply(self, p: np.ndarray) -> np.ndarray:
        return self.matrix @ p


def _transitions(table: RateTable):
    """Yield (source, target, rate) for every kept transition."""
    nmax = table.nmax
    for k, f in table.absorption.items():
        for m in range(k, nmax + 1):
            yield m, m - k, rising(m - k, k) * f[m - k]
    for k, f in table.emission.items():
        # emission beyond nmax is dropped together with its loss term
        for m in range(0, nmax - k + 1):
            yield m, m + k, rising(m, k) * f[m]


def assemble_generator(source: RawRates | RateTable, nmax: int,
                       saturated: Sequence[SaturatedEmission] = ()) -> GeneratorMatrix:
    """Build the truncated generator on photon numbers 0..nmax."""
    if nmax < 4:
        raise DomainError(f"nmax must be >= 4, got {nmax}")
    if isinstance(source, RateTable):
        if saturated:
            raise DomainError("pass saturated terms through RateTable.from_rates")
        if source.nmax < nmax:
            raise DomainError("rate table shorter than nmax")
        table = source
    else:
        table = RateTable.from_rates(source, nmax, saturated)
    for label, group in (("absorption", table.absorption), ("emission", table.emission)):
        for k, f in group.items():
            if np.any(np.asarray(f)[: nmax + 1] < 0):
                raise NegativeRateError(f"negative {k}-photon {label} rate")
    if table.nmax != nmax:
        table = RateTable(nmax, {k: v[: nmax + 1] for k, v in table.absorption.items()},
                          {k: v[: nmax + 1] for k, v in table.emission.items()})

    rows, cols, vals = [], [], []
    for m, target, rate in _transitions(table):
        if rate != 0.0:
            rows.append(target)
            cols.append(m)
            vals.append(rate)
    size = nmax + 1
    off = sps.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsc()
    off.sum_duplicates()
    diag = -np.asarray(off.sum(axis=0)).ravel()
    mat = (off + sps.diags(diag)).tocsc()
    mat.eliminate_zeros()
    return GeneratorMatrix(nmax, mat)


def emission_and_absorption_rates(raw: RawRates, saturated: Sequence[SaturatedEmission] = ()):
    """Rate callables used by the truncation estimate.

    Returns ``(emit, absorb_out, kmax)`` where ``emit(m)`` maps jump size to
    rate out of state m and ``absorb_out(m)`` is the total absorption rate
    out of m.
    """
    kmax = max([2] + [s.k for s in saturated])

    def emit(m: int) -> dict[int, float]:
        out = {1: rising(m, 1) * f1_emission(m, raw), 2: rising(m, 2) * f2_emission(m, raw)}
        for sat in saturated:
            out[sat.k] = out.get(sat.k, 0.0) + rising(m, sat.k) * saturated_emission_rate(m, sat)
        return out

    def absorb_out(m: int) -> float:
        total = 0.0
        if m >= 1:
            total += m * f1_absorption(m - 1, raw)
        if m >= 2:
            total += m * (m - 1) * raw.d2a
        return total

    return emit, absorb_out, kmax
