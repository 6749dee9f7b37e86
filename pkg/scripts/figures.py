"""Write the three r = 10 radial Wigner curves (even, odd, equal mix) as CSV."""

import argparse
from pathlib import Path

from twophoton.cli import FIGURE_R, FIGURES
from twophoton.gf import PaeosParams
from twophoton.serialize import to_csv
from twophoton.wigner import radial_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=Path("figures"))
    ap.add_argument("--xmax", type=float, default=8.0)
    ap.add_argument("--points", type=int, default=801)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for fig, beta in FIGURES.items():
        curve = radial_curve(PaeosParams(beta, FIGURE_R), args.xmax, args.points)
        path = args.outdir / f"wigner_fig{fig}.csv"
        path.write_text(to_csv(("x", "W"), zip(curve.xs, curve.ws)))
        print(f"{path}: beta={beta}, W(0)={curve.ws[0]:+.3f}, min W={curve.ws.min():+.3f}")


if __name__ == "__main__":
    main()
