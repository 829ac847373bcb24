#!/usr/bin/env python3
"""Sweep the NDG(1) family over (lambda, phi) and count fixed points of Phi2∘Phi1.

Eigen-analysis of the linear representative is compared with a Newton search
over the three affine charts.  Parameter values where the eigenvalues of the
linear map collide show up as changes in the counts.
"""

import argparse
import cmath
import json
import math

import numpy as np

from acs.nijenhuis import PointTensor, classify, newton_fixed_points, phi_linear_map, phi_maps


def ndg1(lam: float, phi: float) -> PointTensor:
    return PointTensor.from_relations(3, [(1, 2, 2, 1), (1, 3, 3, lam), (2, 3, 1, cmath.exp(1j * phi))], "ndg1")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lam", type=float, nargs="+", default=[0.5, 1.0, 2.0, 3.0])
    ap.add_argument("--phi-steps", type=int, default=12)
    ap.add_argument("--newton", action="store_true", help="also run the Newton cross-check (slower)")
    ap.add_argument("--out", help="write rows as JSON")
    args = ap.parse_args()

    rows = []
    print(f"{'lambda':>7} {'phi/pi':>7} {'T':>2} {'I':>2} {'gap':>9} {'newton':>6}  label")
    for lam in args.lam:
        for s in range(args.phi_steps + 1):
            phi = math.pi * s / args.phi_steps
            pt = ndg1(lam, phi)
            fps, flags = phi_maps(pt)
            t = sum(1 for f in fps if f.kind == "point" and f.transversal)
            i = sum(1 for f in fps if f.kind == "point" and f.incident)
            ev = np.linalg.eigvals(phi_linear_map(pt))
            ev = ev / np.abs(ev).max()
            gap = min(abs(a - b) for k, a in enumerate(ev) for b in ev[k + 1:])
            nn = len(newton_fixed_points(pt, seeds_per_chart=20)[0]) if args.newton else None
            label = classify(pt).type_label
            rows.append({"lambda": lam, "phi": phi, "transversal": t, "incident": i, "gap": gap, "newton": nn, "label": label, "flags": flags})
            print(f"{lam:7.3f} {phi / math.pi:7.3f} {t:2d} {i:2d} {gap:9.2e} {str(nn):>6}  {label}{' ' + ','.join(flags) if flags else ''}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
