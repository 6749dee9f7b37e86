"""User-facing verification sweep: closed forms against the oracle and the
exact identities of the phase-averaged states."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import gf, wigner
from .distribution import PhotonDistribution
from .oracle import choose_truncation, evolve_to_steady, steady_state
from .rates import DimensionlessParams, RawRates, assemble_generator


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float


@dataclass(frozen=True)
class VerifyConfig:
    quick: bool = False
    eps: float = 1e-12
    perturb: float = 0.0        # relative error injected into the oracle's d2e
    seed: int = 20240101


def _oracle_rates(raw: RawRates, cfg: VerifyConfig) -> RawRates:
    if cfg.perturb:
        return replace(raw, d2e=raw.d2e * (1.0 + cfg.perturb))
    return raw


def check_closed_vs_oracle(cfg):
    if cfg.quick:
        grid = itertools.product([1.0], [0.0, 0.5], [0.0, 1.0], [0.5, 2.0])
    else:
        grid = itertools.product([0.1, 1, 10], [0, 0.5, 2], [0, 1], [0.5, 2, 5])
    worst = 0.0
    for nu, s, sigma, r in grid:
        prm = DimensionlessParams(nu, s, sigma, r)
        nmax = choose_truncation(prm, cfg.eps)
        closed = gf.photon_probabilities(gf.closed_form(prm), nmax)
        rep = steady_state(assemble_generator(_oracle_rates(prm.to_raw(), cfg), nmax))
        worst = max(worst, closed.sup_distance(rep.distribution))
    return worst, 1e-8


def _paeos_limit_tv(cfg, nu):
    cases = [(0.0, 0.0, 1.0), (0.5, 1.0, 0.5), (2.0, 1.0, 2.0)]
    if cfg.quick:
        cases = cases[:1]
    worst = 0.0
    for s, sigma, r in cases:
        prm = DimensionlessParams(nu, s, sigma, r)
        dist = gf.photon_probabilities(gf.closed_form(prm), eps=cfg.eps)
        mix = gf.paeos_probabilities(gf.paeos_limit(prm), eps=cfg.eps)
        worst = max(worst, dist.total_variation(mix))
    return worst


def check_paeos_limit_weak(cfg):
    return _paeos_limit_tv(cfg, 1e-4), 1e-3


def check_paeos_limit_weaker(cfg):
    return _paeos_limit_tv(cfg, 1e-6), 1e-5


def check_negbin_limit(cfg):
    worst = 0.0
    for sigma in (0.0, 1.0):
        prm = DimensionlessParams(1e4, 0.5, sigma, 1.0)
        cf = gf.closed_form(prm)
        dist = gf.photon_probabilities(cf, eps=cfg.eps)
        worst = max(worst, dist.total_variation(gf.negbin_limit(0.5, sigma).distribution))
        if sigma == 0.0:
            worst = max(worst, abs(gf.factorial_moment(cf, 1) - 1.0))
    return worst, 1e-3


def check_mandel_threshold(cfg):
    worst = 0.0
    for r in (0.1, 1.0, 5.0, 10.0):
        p = gf.PaeosParams(gf.sub_poisson_threshold(r), r)
        worst = max(worst, abs(gf.paeos_mandel_q(p)))
    return worst, 1e-12


def check_mandel_sign_law(cfg):
    """Fraction of random (r, S) samples violating sign(Q) = sign(r - S) or |Q| < 1/2."""
    rng = np.random.default_rng(cfg.seed)
    n = 200 if cfg.quick else 1000
    bad = 0
    for r, S in zip(rng.uniform(0.01, 10, n), rng.uniform(0, 10, n)):
        q = gf.paeos_mandel_q_weak(r, S)
        if np.sign(q) != np.sign(r - S) or abs(q) >= 0.5:
            bad += 1
    return bad / n, 0.0


def check_wigner_routes(cfg):
    rs = (1.0,) if cfg.quick else (1.0, 5.0, 10.0)
    xs = np.linspace(0, 8, 9 if cfg.quick else 33)
    worst = 0.0
    for r in rs:
        for beta in (0.0, 0.5, 1.0):
            p = gf.PaeosParams(beta, r)
            closed = wigner.wigner_paeos_radial(p, xs)
            lag = wigner.wigner_mixture_radial(gf.paeos_probabilities(p, eps=cfg.eps), xs)
            avg = np.array([(1 - beta) * wigner.phase_average(r, 1, x, 0.0)
                            + beta * wigner.phase_average(r, -1, x, 0.0) for x in xs])
            worst = max(worst, np.max(np.abs(closed - lag)), np.max(np.abs(closed - avg)),
                        abs(closed[0] - 2 * (1 - 2 * beta)))
    return float(worst), 1e-6


def check_figures(cfg):
    worst = 0.0
    xs = np.linspace(0, 8, 801)
    for beta, w0 in ((0.0, 2.0), (1.0, -2.0), (0.5, 0.0)):
        w = wigner.wigner_paeos_radial(gf.PaeosParams(beta, 10.0), xs)
        worst = max(worst, abs(w[0] - w0))
        if beta == 0.5:
            worst = max(worst, max(0.0, -w.min() - 1e-9))
            worst = max(worst, max(0.0, abs(xs[np.argmax(w)] - math.sqrt(20)) - 0.5))
        elif w[xs < math.sqrt(5)].min() >= 0:
            worst = max(worst, 1.0)
    return worst, 1e-12


def check_purity(cfg):
    worst = 0.0
    for beta in (0.0, 0.3, 0.5, 1.0):
        for r in (0.2, 1.0, 3.0, 10.0):
            p = gf.PaeosParams(beta, r)
            mu = wigner.purity_paeos(p)
            worst = max(worst, abs(mu - gf.paeos_probabilities(p, eps=1e-14).purity()))
            if mu >= 1.0:
                worst = max(worst, 1.0)
    return worst, 1e-10


def check_parity(cfg):
    prm = DimensionlessParams(0.0, r=1.0)
    nmax = choose_truncation(prm, cfg.eps)
    g = assemble_generator(_oracle_rates(prm.to_raw(), cfg), nmax)
    rep = evolve_to_steady(g, PhotonDistribution.fock(1, nmax))
    target = gf.paeos_probabilities(gf.PaeosParams(1.0, 1.0), nmax)
    worst = max(rep.distribution.sup_distance(target), abs(rep.parity_weight - 1.0))
    return worst, 1e-8


def check_no2a(cfg):
    form = gf.No2aForm(rho=1.0, s=0.5, sigma=0.0)
    nmax = choose_truncation(form, cfg.eps)
    sol = gf.no_two_photon_absorption(form, nmax)
    rep = steady_state(assemble_generator(_oracle_rates(form.to_raw(), cfg), nmax))
    return max(sol.distribution.sup_distance(rep.distribution), abs(sol.mean - 5.0)), 1e-8


CHECKS: list[tuple[str, Callable]] = [
    ("closed_form_vs_oracle", check_closed_vs_oracle),
    ("paeos_limit_nu_1e-4", check_paeos_limit_weak),
    ("paeos_limit_nu_1e-6", check_paeos_limit_weaker),
    ("negbin_limit", check_negbin_limit),
    ("mandel_threshold", check_mandel_threshold),
    ("mandel_weak_sign_law", check_mandel_sign_law),
    ("wigner_route_triangle", check_wigner_routes),
    ("figures", check_figures),
    ("purity", check_purity),
    ("parity_evolution", check_parity),
    ("no_two_photon_absorption", check_no2a),
]


def run_checks(cfg: VerifyConfig = VerifyConfig()) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        dev, tol = fn(cfg)
        out.append(CheckResult(name, bool(dev <= tol), float(dev), tol))
    return out
