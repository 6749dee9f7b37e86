"""Extended-precision reference values for the test suite.

Run once with ``python3 tests/fixtures/make_oracle_values.py``; the output
file oracle_values.json is committed and read by the tests. Nothing here is
imported at runtime.
"""

import json
from fractions import Fraction
from pathlib import Path

import mpmath as mp

mp.mp.dps = 60
OUT = Path(__file__).with_name("oracle_values.json")


def kummer_series(a, c, x):
    a, c, x = mp.mpf(a), mp.mpf(c), mp.mpf(x)
    term, total, k = mp.mpf(1), mp.mpf(1), 0
    while abs(term) > mp.mpf(10) ** (-70) * total:
        term *= (a + k) * x / ((c + k) * (k + 1))
        total += term
        k += 1
    return total


def laguerre_exact(n, x):
    x = Fraction(x)
    prev, cur = Fraction(1), 1 - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def finite_or_none(v):
    v = float(v)
    return v if v != float("inf") else None


def gf_taylor(fn, n):
    return [float(c) for c in mp.taylor(fn, 0, n)]


def closed_form_probs(nu, s, sigma, r, n):
    nu, s, sigma, r = map(mp.mpf, (nu, s, sigma, r))
    R = mp.sqrt((nu * s) ** 2 + 4 * r * r)
    h = (R - nu * s) / 2
    g = (s + sigma + h * (1 + s)) / R
    a, c = nu * g, nu * (1 + s)
    norm = mp.hyp1f1(a, c, 2 * R)
    return gf_taylor(lambda z: mp.exp(h * (1 - z)) * mp.hyp1f1(a, c, R * (1 + z)) / norm, n)


def no2a(rho, s, sigma, n):
    rho, s, sigma = map(mp.mpf, (rho, s, sigma))
    gamma = (sigma + rho + rho / s) / s
    F = lambda z: ((1 - s) / (1 - s * z)) ** (1 + gamma) * mp.exp(rho / s * (1 - z))
    return {"gamma": float(gamma), "mean": float(mp.diff(F, 1)),
            "p_n": gf_taylor(F, n)}


def main():
    vals = {}
    vals["kummer"] = [
        {"a": a, "c": c, "x": x, "value": finite_or_none(kummer_series(a, c, x)),
         "log": float(mp.log(kummer_series(a, c, x)))}
        for a, c, x in [(0.5, 1.0, 2.0), (0.5, 2.0, 50.0), (0.3, 7.5, 12.0),
                        (2.5, 0.4, 30.0), (0.01, 0.02, 400.0), (20.0, 3.0, 900.0)]
    ]
    vals["j0"] = {str(x): float(mp.besselj(0, x))
                  for x in (0.5, 1.0, 3.0, 7.9, 8.1, 12.0, 20.0, 25.5, 40.0, 50.0)}
    vals["j0_first_root"] = float(mp.findroot(lambda t: mp.besselj(0, t), 2.4))
    vals["i0_scaled"] = {str(x): float(mp.exp(-x) * mp.besseli(0, x))
                         for x in (0.5, 1.0, 5.0, 29.0, 31.0, 60.0, 400.0)}
    vals["laguerre"] = [{"n": n, "x": x, "value": float(laguerre_exact(n, x))}
                        for n, x in [(5, 3.7), (12, 0.25), (30, 41.0)]]
    vals["closed_form"] = [
        {"nu": nu, "s": s, "sigma": sig, "r": r, "p_n": closed_form_probs(nu, s, sig, r, 14)}
        for nu, s, sig, r in [(1, 0.5, 0, 1), (10, 2, 1, 5), (0.1, 0, 1, 2)]
    ]
    vals["no2a"] = {"rho": 1, "s": 0.5, "sigma": 0, **no2a(1, 0.5, 0, 14)}

    r = mp.mpf(1)
    vals["paeos_r1"] = {
        "even": [float(r ** n / (mp.factorial(n) * mp.cosh(r))) for n in range(0, 12, 2)],
        "odd": [float(r ** n / (mp.factorial(n) * mp.sinh(r))) for n in range(1, 12, 2)],
        "beta_S0": float(mp.tanh(r) ** 2 / (1 + mp.tanh(r) ** 2)),
        "q_even": float(r * (1 - mp.tanh(r) ** 2) / mp.tanh(r)),
        "q_weak_S0": float(r * mp.coth(2 * r) * (1 - mp.tanh(2 * r) ** 2)),
    }
    # purity of the pure-parity phase-averaged states via direct series
    vals["purity"] = {}
    for rr in (0.2, 1.0, 3.0, 10.0):
        rr = mp.mpf(rr)
        ev = mp.nsum(lambda k: (rr ** (2 * k) / (mp.factorial(2 * k) * mp.cosh(rr))) ** 2,
                     [0, mp.inf])
        od = mp.nsum(lambda k: (rr ** (2 * k + 1) / (mp.factorial(2 * k + 1) * mp.sinh(rr))) ** 2,
                     [0, mp.inf])
        vals["purity"][str(float(rr))] = {"even": float(ev), "odd": float(od)}
    OUT.write_text(json.dumps(vals, indent=1) + "\n")


if __name__ == "__main__":
    main()
