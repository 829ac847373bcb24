#!/usr/bin/env python3
"""Accuracy of the numerical e-structure: bracket residual versus finite-difference
step, and frame agreement across section seeds, at random generic points."""

import argparse

import numpy as np

import acs.dim4 as d4
from acs import catalog
from acs.acstruct import Lemma1Structure
from acs.nijenhuis import realize_dim4


def residual(S, q, h):
    return d4.e_structure(S, q, h=h).residuals["[xi1,xi2]-xi3"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", default="realized", help="'realized', 'raw' (alpha=2wbar+wbar^2, beta=w) or a catalog chart")
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    if args.model == "realized":
        S = realize_dim4("2*w_+w_^2", "w").structure
    elif args.model == "raw":
        S = Lemma1Structure.from_exprs("2*w_+w_^2", "w")
    else:
        S = catalog.chart(args.model)
    rng = np.random.default_rng(args.seed)
    steps = [2e-3, 1e-3, 5e-4, 2e-4, 1e-4]
    print("point".ljust(34) + "".join(f"h={h:<8.0e}" for h in steps) + "seed spread")
    for _ in range(args.points):
        q = rng.normal(size=4) * 0.3
        res = [residual(S, q, h) for h in steps]
        base = d4.e_structure(S, q)
        spread = 0.0
        for s in (3, 11, 29):
            f = d4.e_structure(S, q, seed=s).frame
            spread = max(spread, np.abs(np.abs(f) - np.abs(base.frame)).max())
        print(f"{np.round(q, 3)!s:34s}" + "".join(f"{r:<10.1e}" for r in res) + f"{spread:.1e}")


if __name__ == "__main__":
    main()
