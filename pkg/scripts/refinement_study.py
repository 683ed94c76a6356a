"""Grid/time-step refinement for the free Gaussian, the second-derivative identity and the kink probe."""

import argparse
import json

from rglab import cli, rungegross


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()

    errs, orders, _ = cli.gaussian_order_study(levels=args.levels)
    print("free Gaussian  L2 errors:", ["%.3e" % e for e in errs])
    print("               orders:   ", ["%.3f" % o for o in orders])

    rep = rungegross.rg_second_derivative_check(levels=args.levels)
    for lv in rep.levels:
        print(f"identity  h={lv.h:.4f} dt={lv.dt:.5f}  lhs={lv.lhs:.8f} rhs={lv.rhs:.8f} rel={lv.relative_error:.2e}")
    print("          orders:", ["%.3f" % o for o in rep.orders])

    for dt, res in zip((1e-2, 1e-3, 1e-4), cli.kink_probe()):
        print(f"kink rho(t,0)  dt={dt:.0e}  estimates={['%.3e' % e for e in res.estimates]} "
              f"order={res.order} converged={res.converged}")
    print(json.dumps({"gaussian_orders": orders, "identity_orders": list(rep.orders)}))


if __name__ == "__main__":
    main()
