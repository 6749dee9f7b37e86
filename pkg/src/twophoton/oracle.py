"""Stationary distribution of the truncated population master equation.

This is the ground truth the closed forms are checked against. It never
touches a generating function: it works on the generator matrix alone,
either by a direct linear solve or by implicit time stepping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sps
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import splu

from .distribution import PhotonDistribution
from .errors import (ConvergenceError, DomainError, NonUniqueSteadyStateError,
                     UnsupportedStructureError)
from .rates import (DimensionlessParams, GeneratorMatrix, RawRates, SaturatedEmission,
                    emission_and_absorption_rates)

RESIDUAL_TOL = 1e-10
MIN_NMAX = 20


@dataclass(frozen=True)
class SteadyReport:
    distribution: PhotonDistribution
    residual: float
    method: str
    parity_weight: Optional[float] = None


def residual_l1(g: GeneratorMatrix, p: np.ndarray) -> float:
    return float(np.sum(np.abs(g.apply(p))))


def _closed_classes(mat: sps.csc_matrix) -> list[np.ndarray]:
    """Recurrent communicating classes of the chain with generator ``mat``."""
    coo = mat.tocoo()
    off = (coo.row != coo.col) & (coo.data > 0)
    src, dst = coo.col[off], coo.row[off]
    n = mat.shape[0]
    adj = sps.coo_matrix((np.ones(src.size), (src, dst)), shape=(n, n))
    ncomp, labels = connected_components(adj, directed=True, connection="strong")
    leaks = np.zeros(ncomp, dtype=bool)
    leaks[labels[src][labels[src] != labels[dst]]] = True
    return [np.flatnonzero(labels == c) for c in range(ncomp) if not leaks[c]]


def _solve_sector(mat: sps.csc_matrix, idx: np.ndarray) -> np.ndarray:
    """Normalized null vector of the sub-generator on ``idx``."""
    sub = mat[idx][:, idx].tocsr().astype(float)
    m = sub.shape[0]
    keep = np.ones(m)
    keep[-1] = 0.0
    norm_row = sps.csr_matrix((np.ones(m), (np.full(m, m - 1), np.arange(m))), shape=(m, m))
    a = (sps.diags(keep) @ sub + norm_row).tocsc()
    b = np.zeros(m)
    b[-1] = 1.0
    lu = splu(a)
    p = lu.solve(b)
    p += lu.solve(b - a @ p)
    return p


def _boundary_mass(p: np.ndarray, width: int) -> float:
    return float(np.sum(np.abs(p[-width:])))


def steady_state(g: GeneratorMatrix, parity_weight: Optional[float] = None) -> SteadyReport:
    """Stationary distribution of ``g`` by a direct sparse solve.

    If the generator splits into even and odd sectors (no one-photon terms)
    the odd-sector mass ``parity_weight`` must be given; each sector is
    solved with its own normalization and the two are mixed.
    """
    mat = g.matrix
    if mat.shape != (g.size, g.size):
        raise DomainError(f"generator shape {mat.shape} does not match nmax={g.nmax}")
    classes = _closed_classes(mat)
    p = np.zeros(g.size)
    used_weight = None
    if len(classes) == 1:
        p = _solve_sector(mat, np.arange(g.size))
    elif len(classes) == 2 and g.is_parity_split() and \
            {int(c[0]) % 2 for c in classes} == {0, 1}:
        if parity_weight is None:
            raise NonUniqueSteadyStateError(
                "generator conserves photon-number parity; supply the odd-sector weight")
        if not 0.0 <= parity_weight <= 1.0:
            raise DomainError(f"parity weight must lie in [0, 1], got {parity_weight}")
        even = np.arange(0, g.size, 2)
        odd = np.arange(1, g.size, 2)
        p[even] = (1.0 - parity_weight) * _solve_sector(mat, even)
        p[odd] = parity_weight * _solve_sector(mat, odd)
        used_weight = float(parity_weight)
    else:
        raise UnsupportedStructureError(
            f"{len(classes)} closed classes; only unique or parity-split steady states are handled")
    res = residual_l1(g, p)
    dist = PhotonDistribution.from_values(p, _boundary_mass(p, max(2, g.bandwidth)))
    return SteadyReport(dist, res, "nullspace", used_weight)


def _weak_components(mat: sps.csc_matrix) -> list[np.ndarray]:
    ncomp, labels = connected_components(mat, directed=True, connection="weak")
    return [np.flatnonzero(labels == c) for c in range(ncomp)]


def evolve_to_steady(g: GeneratorMatrix, p0: PhotonDistribution, tol: float = 1e-12,
                     max_time: float = 1e15, max_steps: int = 5000) -> SteadyReport:
    """Integrate dp/dt = G p with backward Euler until ||G p||_1 <= tol.

    The step size doubles after every accepted step. In each step one row
    per invariant block is replaced by that block's mass balance, so total
    probability (and, for parity-split generators, the odd mass) is kept
    to round-off. Steps that would break positivity or conservation at
    the 1e-12 level are rejected and retried with a smaller step.
    """
    if p0.nmax > g.nmax:
        raise DomainError("initial distribution longer than the generator")
    p = p0.padded(g.nmax)
    if abs(math.fsum(p) - 1.0) > 1e-12:
        raise DomainError("initial distribution must be normalized")
    mat = g.matrix
    parity = g.is_parity_split()
    odd0 = math.fsum(p[1::2])

    def report(vec, res):
        weight = math.fsum(vec[1::2]) if parity else None
        dist = PhotonDistribution.from_values(vec, _boundary_mass(vec, max(2, g.bandwidth)))
        return SteadyReport(dist, res, "evolve", weight)

    res = residual_l1(g, p)
    if res <= tol:
        return report(p, res)

    blocks = _weak_components(mat)
    reps = np.array([b[-1] for b in blocks])
    keep = np.ones(g.size)
    keep[reps] = 0.0
    rows = np.concatenate([np.full(b.size, r) for b, r in zip(blocks, reps)])
    cols = np.concatenate(blocks)
    balance = sps.csr_matrix((np.ones(cols.size), (rows, cols)), shape=mat.shape)
    eye = sps.identity(g.size, format="csr")
    keep_diag = sps.diags(keep)

    scale = float(np.max(np.abs(mat.diagonal()))) or 1.0
    dt = 0.1 / scale
    t = 0.0
    for _ in range(max_steps):
        a = (keep_diag @ (eye - dt * mat) + balance).tocsc()
        b = p.copy()
        for blk, r in zip(blocks, reps):
            b[r] = math.fsum(p[blk])
        trial = splu(a).solve(b)
        ok = trial.min() >= -1e-12 and abs(math.fsum(trial) - 1.0) <= 1e-12
        if parity:
            ok = ok and abs(math.fsum(trial[1::2]) - odd0) <= 1e-12
        if not ok:
            dt *= 0.25
            if dt * scale < 1e-12:
                raise ConvergenceError("time step collapsed while enforcing conservation")
            continue
        p = trial
        t += dt
        res = residual_l1(g, p)
        if res <= tol:
            return report(p, res)
        if t > max_time:
            break
        dt *= 2.0
    raise ConvergenceError(f"no steady state within t={t:.3g} (residual {res:.3e})")


def _as_raw(params) -> RawRates:
    if isinstance(params, RawRates):
        return params
    if isinstance(params, DimensionlessParams):
        return params.to_raw()
    if hasattr(params, "to_raw"):
        return params.to_raw()
    raise TypeError(f"cannot derive rates from {type(params).__name__}")


def choose_truncation(params, eps: float = 1e-12,
                      saturated: Sequence[SaturatedEmission] = ()) -> int:
    """Truncation index whose discarded stationary mass is below ``eps``.

    Uses the exact flux balance across the cut between n and n+1: the
    downward flux is at least (absorption out of n+1) * p_{n+1}, the upward
    flux at most (emission crossing the cut) * max(p_{n-K+1..n}). This gives
    a bounding sequence B_n >= p_n that starts at 1 and is summed for the
    tail; a safety margin is added on top.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    raw = _as_raw(params)
    emit, absorb_out, kmax = emission_and_absorption_rates(raw, saturated)
    bound = [1.0]
    prev_q = math.inf
    for n in range(10**6):
        up = 0.0
        for m in range(max(0, n - kmax + 1), n + 1):
            for k, rate in emit(m).items():
                if m + k > n:
                    up += rate
        down = absorb_out(n + 1)
        q = math.inf if down == 0 else up / down
        window = max(bound[max(0, n - kmax + 1): n + 1])
        bound.append(min(1.0, q * window))
        if q < 1.0 and q <= prev_q:
            block = max(bound[max(0, n + 2 - kmax): n + 2])
            tail = kmax * block / (1.0 - q)
            if tail < eps:
                cut = n + 1
                return max(MIN_NMAX, cut + max(12, cut // 3))
        prev_q = q
    raise DomainError("no normalizable steady state: emission outgrows absorption")
