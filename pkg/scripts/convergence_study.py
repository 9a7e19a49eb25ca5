"""Observed global order of NSFD and Euler against the RK4 reference."""
import argparse

from lvnsfd import Params, State, convergence_order


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", type=float, nargs=4, default=[1.0, 1.0, 1.0, 1.0], metavar=("A", "B", "C", "D"))
    ap.add_argument("--s0", type=float, nargs=2, default=[1.5, 1.0])
    ap.add_argument("--T", type=float, default=5.0)
    ap.add_argument("--h0", type=float, default=0.1)
    ap.add_argument("--levels", type=int, default=5)
    args = ap.parse_args()

    for scheme in ("nsfd", "euler"):
        rep = convergence_order(scheme, Params(*args.params), State(*args.s0), args.T, args.h0, args.levels)
        print(f"{scheme}  (reference h = {rep.h_ref:g})")
        for i, (h, e) in enumerate(zip(rep.h_values, rep.errors)):
            order = f"{rep.orders[i - 1]:.4f}" if i > 0 and rep.orders else ""
            print(f"  h={h:<10.6g} error={e:.6e}  {order}")


if __name__ == "__main__":
    main()
