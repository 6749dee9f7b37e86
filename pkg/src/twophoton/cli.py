"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 routing/domain (another
branch handles these parameters), 3 convergence failure, 4 non-unique
steady state, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import gf, wigner
from .distribution import PhotonDistribution
from .errors import (ConvergenceError, DegenerateFamilyError, DomainError,
                     NonUniqueSteadyStateError, UnsupportedStructureError)
from .oracle import choose_truncation, evolve_to_steady, steady_state
from .rates import DimensionlessParams, RawRates, SaturatedEmission, assemble_generator
from .serialize import to_csv, to_json
from .verify import VerifyConfig, run_checks

EXIT_OK, EXIT_VERIFY, EXIT_ROUTE, EXIT_CONVERGENCE, EXIT_NONUNIQUE, EXIT_USAGE = 0, 1, 2, 3, 4, 64

FIGURES = {1: 0.0, 2: 1.0, 3: 0.5}
FIGURE_R = 10.0

CONFIG_KEYS = {"d1a", "d2a", "d1e", "d2e", "d11e", "d10a", "d12a", "w1e", "saturated"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    mode: str
    params: Any
    nmax: Optional[int] = None
    eps: float = 1e-12
    output: str = "json"
    out_path: Optional[Path] = None


def default_eps() -> float:
    raw = os.environ.get("TPS_EPS")
    if raw is None:
        return 1e-12
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"TPS_EPS must be a number, got {raw!r}")
    if not 0 < val < 1:
        raise UsageError(f"TPS_EPS must lie in (0, 1), got {raw!r}")
    return val


def _dist_payload(d: PhotonDistribution) -> dict:
    return {"nmax": d.nmax, "tail_bound": d.tail_bound, "p_n": list(d.probs)}


def _safe_q(d: PhotonDistribution):
    return d.mandel_q() if d.mean() > 0 else None


def _emit(cfg: RunConfig, payload: dict, csv_kind: str):
    if cfg.output == "csv":
        if csv_kind == "dist":
            probs = payload["distribution"]["p_n"]
            text = to_csv(("n", "p_n"), enumerate(probs))
        else:
            text = to_csv(("x", "W"), zip(payload["x"], payload["W"]))
    else:
        text = to_json(payload) + "\n"
    if cfg.out_path is not None:
        cfg.out_path.write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands

def cmd_solve(cfg: RunConfig) -> int:
    prm: DimensionlessParams = cfg.params
    params = {"nu": prm.nu, "s": prm.s, "sigma": prm.sigma, "r": prm.r}
    try:
        cf = gf.closed_form(prm)
    except DegenerateFamilyError as err:
        if err.route != "vacuum":
            hint = {"paeos": "tps paeos --r R --beta B (or tps oracle --nu 0 ... --beta0 B)",
                    "oracle": "tps oracle"}[err.route]
            print(f"error: {err}\nuse: {hint}", file=sys.stderr)
            return EXIT_ROUTE
        dist = gf.vacuum(cfg.nmax or 1)
        payload = {"command": "solve", "branch": "vacuum", "params": params,
                   "distribution": _dist_payload(dist), "mean": 0.0, "n2": 0.0,
                   "mandel_q": None, "purity": 1.0}
        _emit(cfg, payload, "dist")
        return EXIT_OK
    dist = gf.photon_probabilities(cf, cfg.nmax, cfg.eps)
    payload = {
        "command": "solve", "branch": "kummer", "params": params,
        "constants": {"R": cf.R, "h": cf.h, "g": cf.g, "a": cf.a, "c": cf.c},
        "distribution": _dist_payload(dist),
        "mean": gf.factorial_moment(cf, 1), "n2": gf.factorial_moment(cf, 2),
        "mandel_q": gf.mandel_q(cf), "purity": dist.purity(),
    }
    _emit(cfg, payload, "dist")
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, method: str = "nullspace", beta0: Optional[float] = None,
               tol: float = 1e-12) -> int:
    raw, saturated = cfg.params
    nmax = cfg.nmax or choose_truncation(raw, cfg.eps, saturated)
    g = assemble_generator(raw, nmax, saturated)
    if method == "nullspace":
        rep = steady_state(g, beta0)
    else:
        if g.is_parity_split() and beta0 is None:
            raise NonUniqueSteadyStateError(
                "generator conserves parity; pass --beta0 to fix the odd weight")
        b = beta0 or 0.0
        p0 = np.zeros(nmax + 1)
        p0[0], p0[1] = 1.0 - b, b
        rep = evolve_to_steady(g, PhotonDistribution.from_values(p0), tol)
    d = rep.distribution
    rates = {k: getattr(raw, k) for k in ("d1a", "d2a", "d1e", "d2e", "d11e", "d10a", "d12a")}
    rates["w1e"] = [{"j": j, "w": w} for j, w in raw.w1e]
    rates["saturated"] = [{"k": s.k, "d": s.d, "gamma": s.gamma} for s in saturated]
    payload = {"command": "oracle", "method": rep.method, "residual": rep.residual,
               "parity_weight": rep.parity_weight, "rates": rates,
               "distribution": _dist_payload(d), "mean": d.mean(), "purity": d.purity()}
    _emit(cfg, payload, "dist")
    return EXIT_OK


def cmd_limits(cfg: RunConfig, case: str) -> int:
    prm = cfg.params
    if case == "negbin":
        sol = gf.negbin_limit(prm["s"], prm["sigma"], cfg.nmax, cfg.eps)
        extra = {}
    else:
        form = gf.No2aForm(rho=prm["rho"], s=prm["s"], sigma=prm["sigma"])
        sol = gf.no_two_photon_absorption(form, cfg.nmax, cfg.eps)
        extra = {"gamma": form.gamma}
    d = sol.distribution
    payload = {"command": "limits", "case": case, "params": prm, "mean": sol.mean,
               "mandel_q": _safe_q(d), **extra, "distribution": _dist_payload(d)}
    _emit(cfg, payload, "dist")
    return EXIT_OK


def cmd_paeos(cfg: RunConfig) -> int:
    p: gf.PaeosParams = cfg.params
    d = gf.paeos_probabilities(p, cfg.nmax, cfg.eps)
    q = gf.paeos_mandel_q(p) if p.r > 0 else None
    q_weak = gf.paeos_mandel_q_weak(p.r, p.s_eff) if (p.s_eff is not None and p.r > 0) else None
    payload = {"command": "paeos", "beta": p.beta, "r": p.r, "S": p.s_eff,
               "mandel_q": q, "mandel_q_weak": q_weak, "purity": wigner.purity_paeos(p),
               "sub_poisson_threshold": gf.sub_poisson_threshold(p.r),
               "distribution": _dist_payload(d)}
    _emit(cfg, payload, "dist")
    return EXIT_OK


def cmd_wigner(cfg: RunConfig, xmax: float = 8.0, points: int = 801,
               figure: Optional[int] = None) -> int:
    p: gf.PaeosParams = cfg.params
    curve = wigner.radial_curve(p, xmax, points)
    payload = {"command": "figure" if figure else "wigner"}
    if figure:
        payload["figure"] = figure
    payload.update({"beta": p.beta, "r": p.r, "x": list(curve.xs), "W": list(curve.ws)})
    _emit(cfg, payload, "curve")
    return EXIT_OK


def cmd_figure(cfg: RunConfig, fig_id: int) -> int:
    cfg = RunConfig("figure", gf.PaeosParams(FIGURES[fig_id], FIGURE_R), None, cfg.eps,
                    cfg.output, cfg.out_path)
    return cmd_wigner(cfg, 8.0, 801, figure=fig_id)


def cmd_verify(cfg: RunConfig, quick: bool = False, perturb: float = 0.0) -> int:
    results = run_checks(VerifyConfig(quick=quick, eps=cfg.eps, perturb=perturb))
    ok = all(r.passed for r in results)
    if cfg.output == "json":
        payload = {"command": "verify", "passed": ok,
                   "checks": [{"name": r.name, "passed": r.passed,
                               "max_deviation": r.max_deviation, "tolerance": r.tolerance}
                              for r in results]}
        text = to_json(payload) + "\n"
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<28s} "
                 f"max_dev={r.max_deviation:.3e}  tol={r.tolerance:.1e}" for r in results]
        lines.append("all checks passed" if ok else "verification FAILED")
        text = "\n".join(lines) + "\n"
    if cfg.out_path is not None:
        cfg.out_path.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VERIFY


# ------------------------------------------------------------------ parsing

def _common(p):
    p.add_argument("--out", choices=("json", "csv"), default="json", dest="output")
    p.add_argument("--out-path", type=Path, default=None)
    p.add_argument("--eps", type=float, default=None,
                   help="truncation tolerance (default: $TPS_EPS or 1e-12)")
    p.add_argument("--nmax", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tps", description="Stationary photon statistics of competing "
                     "one- and two-photon processes with saturated two-photon emission.")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="closed-form stationary distribution")
    _common(p)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.0)

    p = sub.add_parser("oracle", help="truncated master-equation steady state")
    _common(p)
    p.add_argument("--config", type=Path, help="JSON rate configuration")
    for name in ("d1a", "d2a", "d1e", "d2e", "d11e", "d10a", "d12a"):
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--beta0", type=float, default=None,
                   help="initial odd-parity weight (needed when parity is conserved)")
    p.add_argument("--method", choices=("nullspace", "evolve"), default="nullspace")
    p.add_argument("--tol", type=float, default=1e-12, help="residual target for evolve")

    p = sub.add_parser("limits", help="negative-binomial and no-two-photon-absorption limits")
    _common(p)
    p.add_argument("--case", choices=("negbin", "no2a"), required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--rho", type=float, default=0.0)

    p = sub.add_parser("paeos", help="phase-averaged even/odd states")
    _common(p)
    p.add_argument("--r", type=float, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--beta", type=float, default=None, help="odd weight set directly")
    g.add_argument("--S", type=float, default=None, dest="S",
                   help="effective one-photon ratio (s+sigma)/(s+1)")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)

    p = sub.add_parser("wigner", help="radial Wigner function of a phase-averaged state")
    _common(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--xmax", type=float, default=8.0)
    p.add_argument("--points", type=int, default=801)

    p = sub.add_parser("figure", help="data for the r = 10 Wigner figures")
    _common(p)
    p.add_argument("id", type=int, choices=(1, 2, 3))

    p = sub.add_parser("verify", help="run the verification sweep")
    _common(p)
    p.set_defaults(output="text")
    p.add_argument("--json", action="store_const", const="json", dest="output")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def _oracle_params(args):
    raw_flags = {k: getattr(args, k) for k in ("d1a", "d2a", "d1e", "d2e", "d11e", "d10a", "d12a")
                 if getattr(args, k) is not None}
    sources = sum([args.config is not None, bool(raw_flags), args.nu is not None])
    if sources != 1:
        raise UsageError("give exactly one of --config, raw rate flags (--d1a ...), or --nu ...")
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise UsageError(f"cannot read config: {err}")
        if not isinstance(data, dict) or set(data) - CONFIG_KEYS:
            raise UsageError(f"config keys must be among {sorted(CONFIG_KEYS)}")
        saturated = tuple(SaturatedEmission(int(e["k"]), float(e["d"]), float(e.get("gamma", 0)))
                          for e in data.get("saturated", ()))
        rest = {k: v for k, v in data.items() if k != "saturated"}
        if not any(float(v) > 0 for k, v in rest.items() if k != "w1e") and \
                not any(float(e["w"]) > 0 for e in rest.get("w1e", ())) and saturated:
            raise UsageError("saturated emission needs some absorption to reach a steady state")
        return RawRates.from_mapping(rest), saturated
    if raw_flags:
        return RawRates(**raw_flags), ()
    return DimensionlessParams(args.nu, args.s, args.sigma, args.r).to_raw(), ()


def _paeos_params(args) -> gf.PaeosParams:
    if args.beta is not None:
        return gf.PaeosParams(args.beta, args.r)
    if args.S is not None:
        S = args.S
    elif args.s is not None or args.sigma is not None:
        s, sigma = args.s or 0.0, args.sigma or 0.0
        S = (s + sigma) / (s + 1.0)
    else:
        raise UsageError("paeos needs --beta, --S, or --s/--sigma")
    # s = 0, sigma = S reproduces the requested effective ratio exactly
    return gf.paeos_limit(DimensionlessParams(0.0, s=0.0, sigma=S, r=args.r))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        eps = args.eps if args.eps is not None else default_eps()
        if not 0 < eps < 1:
            raise UsageError("--eps must lie in (0, 1)")
        if args.nmax is not None and args.nmax < 4:
            raise UsageError("--nmax must be >= 4")

        def cfg(params):
            return RunConfig(args.mode, params, args.nmax, eps, args.output, args.out_path)

        if args.mode == "solve":
            return cmd_solve(cfg(DimensionlessParams(args.nu, args.s, args.sigma, args.r)))
        if args.mode == "oracle":
            return cmd_oracle(cfg(_oracle_params(args)), args.method, args.beta0, args.tol)
        if args.mode == "limits":
            prm = {"s": args.s, "sigma": args.sigma}
            if args.case == "no2a":
                prm["rho"] = args.rho
            return cmd_limits(cfg(prm), args.case)
        if args.mode == "paeos":
            return cmd_paeos(cfg(_paeos_params(args)))
        if args.mode == "wigner":
            if args.r <= 0:
                raise UsageError("--r must be positive")
            return cmd_wigner(cfg(gf.PaeosParams(args.beta, args.r)), args.xmax, args.points)
        if args.mode == "figure":
            return cmd_figure(cfg(None), args.id)
        if args.mode == "verify":
            return cmd_verify(cfg(None), args.quick, args.perturb)
    except UsageError as err:
        print(f"tps: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateFamilyError as err:
        print(f"tps: error: {err}", file=sys.stderr)
        return EXIT_ROUTE
    except NonUniqueSteadyStateError as err:
        print(f"tps: error: {err}", file=sys.stderr)
        return EXIT_NONUNIQUE
    except (ConvergenceError, UnsupportedStructureError) as err:
        print(f"tps: error: {err}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except DomainError as err:
        print(f"tps: error: {err}", file=sys.stderr)
        return EXIT_ROUTE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
