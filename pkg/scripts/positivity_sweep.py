"""Compare positivity of NSFD and Euler over random parameter draws.

    python scripts/positivity_sweep.py --cases 2000 --steps 1000 --hmax 2
"""
import argparse

import numpy as np

from lvnsfd import simulate_batch


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cases", type=int, default=1000)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--hmax", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    a, b, c, d, x0, y0 = 10.0 * (1.0 - rng.random((6, args.cases)))
    h = args.hmax * (1.0 - rng.random(args.cases))
    for scheme in ("nsfd", "euler"):
        res = simulate_batch(scheme, a, b, c, d, x0, y0, h, args.steps)
        neg = res.min_component < 0
        bad = res.first_bad_step >= 0
        print(f"{scheme:6s} negative: {neg.sum():5d}/{args.cases}  "
              f"non-positive or non-finite: {bad.sum():5d}/{args.cases}")
        if neg.any():
            i = np.flatnonzero(neg)[0]
            print(f"       first negative case: a,b,c,d=({a[i]:.3g},{b[i]:.3g},{c[i]:.3g},{d[i]:.3g}) "
                  f"x0,y0=({x0[i]:.3g},{y0[i]:.3g}) h={h[i]:.3g}")


if __name__ == "__main__":
    main()
