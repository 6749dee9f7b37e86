"""How fast the closed form approaches its two limit laws.

Small nu: total variation to the weak-limit even/odd mixture.
Large nu: total variation to the negative binomial law (s < 1 only).
"""

import argparse

from twophoton import gf
from twophoton.rates import DimensionlessParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", type=float, default=0.5)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--r", type=float, default=1.0)
    args = ap.parse_args()

    print("small nu -> phase-averaged even/odd mixture")
    mix = gf.paeos_probabilities(gf.paeos_limit(DimensionlessParams(0.0, args.s, args.sigma,
                                                                    args.r)))
    for k in range(1, 9):
        nu = 10.0 ** -k
        d = gf.photon_probabilities(gf.closed_form(DimensionlessParams(nu, args.s, args.sigma,
                                                                       args.r)))
        print(f"  nu=1e-{k}:  TV={d.total_variation(mix):.3e}")

    if 0 < args.s < 1:
        print("large nu -> negative binomial")
        nb = gf.negbin_limit(args.s, args.sigma).distribution
        for k in range(1, 7):
            d = gf.photon_probabilities(gf.closed_form(DimensionlessParams(10.0**k, args.s,
                                                                           args.sigma, args.r)))
            print(f"  nu=1e{k}:   TV={d.total_variation(nb):.3e}")


if __name__ == "__main__":
    main()
