"""High-precision first-integral drift of the NSFD scheme.

Iterates the NSFD recurrence in 40-digit arithmetic for params (1,1,1,1),
start (1.1, 1.0), h = 0.01 and 10^5 steps, and prints
max_k |V(x_k, y_k) - V(x_0, y_0)|.  The acceptance suite freezes this value.
"""
import argparse

import mpmath as mp


def drift(x0, y0, h, n, dps=40):
    with mp.workdps(dps):
        x, y, h = mp.mpf(x0), mp.mpf(y0), mp.mpf(h)
        p1 = mp.expm1(h)
        p2 = -mp.expm1(-h)
        g, dec = mp.exp(h), mp.exp(-h)

        def V(x, y):
            return x - mp.log(x) + y - mp.log(y)

        v0 = V(x, y)
        worst = mp.mpf(0)
        for _ in range(n):
            x = g * x / (1 + p1 * y)
            y = (dec + p2 * x) * y
            worst = max(worst, abs(V(x, y) - v0))
        return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=100_000)
    args = ap.parse_args()
    print(mp.nstr(drift(1.1, 1.0, 0.01, args.steps), 17))
