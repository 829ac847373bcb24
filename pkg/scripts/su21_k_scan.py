#!/usr/bin/env python3
"""Scan the free coefficient k of the su(2,1) bracket ansatz and count Jacobi failures.

For each k the 14-dimensional real algebra is built exactly and every basis
triple is tested.  The count never reaches zero for any k.
"""

import argparse
from fractions import Fraction

from acs.g2lab import build_algebra, complex_jacobi_failures, jacobi_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--num", type=int, nargs=2, default=[-4, 8], help="integer numerator range")
    ap.add_argument("--den", type=int, default=2)
    args = ap.parse_args()
    best = None
    for p in range(args.num[0] * args.den, args.num[1] * args.den + 1):
        k = Fraction(p, args.den)
        rep = jacobi_check(build_algebra("su21", k))
        cf = complex_jacobi_failures("su21", k)
        print(f"k={str(k):>6}  real failures {len(rep.failures):3d}/{rep.checked}  complex failing triples {len(cf):2d}")
        if best is None or len(rep.failures) < best[1]:
            best = (k, len(rep.failures))
    print(f"fewest failures at k={best[0]} ({best[1]})")


if __name__ == "__main__":
    main()
