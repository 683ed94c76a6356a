"""Small-sphere limit of the cusp bracket for several potentials, with Richardson extrapolation."""

import argparse

import numpy as np

from rglab.twobody import cusp, sphere
from rglab.twobody import potentials as pots


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r0", type=float, default=0.2)
    ap.add_argument("--n-theta", type=int, default=8)
    args = ap.parse_args()
    quad = sphere.SphereQuadrature.product(args.n_theta)
    radii = (args.r0, args.r0 / 2, args.r0 / 4)
    for pot in [*pots.harmonic_battery(), pots.norm_squared(), pots.quartic()]:
        est = cusp.singular_limit_estimate(pot, radii=radii, quad=quad)
        kappa = "n/a" if est.kappa is None else f"{est.kappa:.6f} +- {est.kappa_uncertainty:.1e}"
        order = "n/a" if est.observed_order is None else f"{est.observed_order:.2f}"
        print(f"{pot.name:>16s}  L(r)={np.round(est.values, 8).tolist()}  limit={est.limit:+.3e} "
              f"+- {est.uncertainty:.1e}  order={order}  kappa={kappa}")


if __name__ == "__main__":
    main()
