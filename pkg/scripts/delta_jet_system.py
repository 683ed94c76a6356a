"""Forced derivative orders of V at a point interaction, per coupling and regularity level."""

import argparse
import time
from fractions import Fraction

from rglab.symcalc.jetsystem import compatibility_by_lambda


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=8)
    ap.add_argument("--lambdas", default="-2,-1,1,3,1/2")
    args = ap.parse_args()
    lambdas = [Fraction(s) for s in args.lambdas.split(",")]
    for k in range(1, args.kmax + 1):
        start = time.perf_counter()
        results = compatibility_by_lambda(k, lambdas)
        forced = {r.forced for r in results}
        r0 = results[0]
        print(f"k={k:2d}  forced={list(r0.forced)}  continuous={list(r0.continuous)}  nullity={r0.nullity}  "
              f"lam-independent={len(forced) == 1}  {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
