#!/usr/bin/env python3
"""Enumerate small topological types that pass the integer obstructions:
connected sums rCP2 # s(-CP2), spin types mH + nE8, and the CP3 family."""

import argparse

from acs.obstruct import cp2sum_check, cp3_check, typeii_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rmax", type=int, default=9)
    ap.add_argument("--mmax", type=int, default=40)
    args = ap.parse_args()

    print("rCP2 # s(-CP2) passing:")
    for r in range(args.rmax + 1):
        hits = [s for s in range(11 * args.rmax + 11) if cp2sum_check(r, s).admits]
        if hits:
            print(f"  r={r}: s={hits}")
    print("mH + nE8 passing:")
    print("  " + ", ".join(f"({m},{n})" for m in range(args.mmax + 1) for n in range(args.mmax + 1) if typeii_check(m, n).admits))
    print("CP3 family:")
    for r in range(-5, 6):
        rep = cp3_check(r)
        print(f"  r={r:+d}: {rep.verdict}{'  ' + rep.note if rep.note else ''}")


if __name__ == "__main__":
    main()
