"""Truncated photon-number distributions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

NEGATIVE_SLACK = 1e-12


@dataclass(frozen=True)
class PhotonDistribution:
    """Probabilities p_0..p_nmax plus an estimate of the mass beyond nmax."""

    probs: np.ndarray
    nmax: int
    tail_bound: float = 0.0

    @classmethod
    def from_values(cls, probs, tail_bound: float = 0.0) -> "PhotonDistribution":
        """Clamp round-off negatives (down to -1e-12) to zero and freeze."""
        p = np.array(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise DomainError("probabilities must be a non-empty 1-D sequence")
        if np.any(p < -NEGATIVE_SLACK):
            raise DomainError(f"probability {p.min():.3e} below round-off slack")
        p[p < 0] = 0.0
        p.setflags(write=False)
        return cls(p, p.size - 1, max(0.0, float(tail_bound)))

    @classmethod
    def fock(cls, n: int, nmax: int) -> "PhotonDistribution":
        p = np.zeros(nmax + 1)
        p[n] = 1.0
        return cls.from_values(p)

    def padded(self, nmax: int) -> np.ndarray:
        out = np.zeros(max(nmax, self.nmax) + 1)
        out[: self.nmax + 1] = self.probs
        return out

    def total(self) -> float:
        return math.fsum(self.probs)

    def factorial_moment(self, m: int) -> float:
        n = np.arange(self.nmax + 1, dtype=float)
        fall = np.ones_like(n)
        for i in range(m):
            fall *= n - i
        return math.fsum(fall * self.probs)

    def mean(self) -> float:
        return self.factorial_moment(1)

    def mandel_q(self) -> float:
        n1 = self.factorial_moment(1)
        if n1 <= 0:
            raise DomainError("Mandel Q undefined for zero mean")
        return self.factorial_moment(2) / n1 - n1

    def purity(self) -> float:
        return math.fsum(self.probs**2)

    def odd_mass(self) -> float:
        return math.fsum(self.probs[1::2])

    def total_variation(self, other: "PhotonDistribution") -> float:
        nmax = max(self.nmax, other.nmax)
        return 0.5 * math.fsum(np.abs(self.padded(nmax) - other.padded(nmax)))

    def sup_distance(self, other: "PhotonDistribution") -> float:
        nmax = max(self.nmax, other.nmax)
        return float(np.max(np.abs(self.padded(nmax) - other.padded(nmax))))


def beta_from_initial(p0: PhotonDistribution) -> float:
    """Odd-parity weight of an initial distribution."""
    return p0.odd_mass()
