"""Eigenvalue moduli of the Euler and NSFD maps at the interior fixed point.

Prints a table over step sizes, plus the recurrence coefficient K and the
coefficient of the exact NSFD linearization.
"""
import argparse
import math

from lvnsfd import Params, discrete_jacobian, recurrence_coefficient, spectral_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", type=float, nargs=4, default=[1.0, 1.0, 1.0, 1.0], metavar=("A", "B", "C", "D"))
    ap.add_argument("--h", type=float, nargs="+", default=[0.01, 0.1, 0.5, 1.0, 2.0, 5.0])
    args = ap.parse_args()
    p = Params(*args.params)

    print(f"{'h':>8} {'|euler|':>14} {'sqrt(1+ach^2)':>14} {'|nsfd|':>14} {'K':>12} {'K e^-ah':>12}  regime(K)")
    for h in args.h:
        eu = spectral_report(discrete_jacobian("euler", p, h))
        ns = spectral_report(discrete_jacobian("nsfd", p, h))
        rc = recurrence_coefficient(p, h)
        print(f"{h:8.4g} {eu.moduli[0]:14.10f} {math.sqrt(1 + p.a * p.c * h * h):14.10f} "
              f"{ns.moduli[0]:14.10f} {rc.K:12.6g} {rc.linearized:12.6g}  {rc.regime}")


if __name__ == "__main__":
    main()
