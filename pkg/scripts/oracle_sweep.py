"""Closed form against the truncated master equation over a parameter grid.

Prints one row per grid point: truncation, sup-norm deviation, oracle
residual and the two solve times.
"""

import argparse
import itertools
import time

from twophoton import gf
from twophoton.oracle import choose_truncation, steady_state
from twophoton.rates import DimensionlessParams, assemble_generator


def floats(text):
    return [float(v) for v in text.split(",")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nu", type=floats, default=[0.1, 1, 10])
    ap.add_argument("--s", type=floats, default=[0, 0.5, 2])
    ap.add_argument("--sigma", type=floats, default=[0, 1])
    ap.add_argument("--r", type=floats, default=[0.5, 2, 5])
    ap.add_argument("--eps", type=float, default=1e-12)
    args = ap.parse_args()

    print(f"{'nu':>6} {'s':>5} {'sigma':>5} {'r':>5} {'nmax':>5} {'sup':>10} "
          f"{'residual':>10} {'t_gf':>7} {'t_or':>7}")
    worst = 0.0
    for nu, s, sigma, r in itertools.product(args.nu, args.s, args.sigma, args.r):
        prm = DimensionlessParams(nu, s, sigma, r)
        nmax = choose_truncation(prm, args.eps)
        t0 = time.perf_counter()
        closed = gf.photon_probabilities(gf.closed_form(prm), nmax)
        t1 = time.perf_counter()
        rep = steady_state(assemble_generator(prm.to_raw(), nmax))
        t2 = time.perf_counter()
        sup = closed.sup_distance(rep.distribution)
        worst = max(worst, sup)
        print(f"{nu:6g} {s:5g} {sigma:5g} {r:5g} {nmax:5d} {sup:10.2e} {rep.residual:10.2e} "
              f"{t1 - t0:7.3f} {t2 - t1:7.3f}")
    print(f"worst sup-norm deviation: {worst:.3e}")


if __name__ == "__main__":
    main()
