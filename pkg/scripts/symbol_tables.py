#!/usr/bin/env python3
"""Tabulate symbol dimensions, Hilbert partial sums and characteristic data
for every catalog point tensor (and optionally the chart models at a point)."""

import argparse
import json
import time

import numpy as np

from acs import catalog
from acs.nijenhuis import PointTensor, nijenhuis_at
from acs.symbol import char_variety, symbol_tower


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=4)
    ap.add_argument("--charts", action="store_true", help="include chart models evaluated at a fixed point")
    ap.add_argument("--out")
    args = ap.parse_args()

    models = [(n, catalog.point_tensor(n)) for n in catalog.model_names()["tensors"]]
    if args.charts:
        for n in catalog.model_names()["charts"]:
            S = catalog.chart(n)
            q = np.full(2 * S.n, 0.2)
            models.append((f"chart:{n}", PointTensor.from_map(nijenhuis_at(S.jet(q)), n)))

    rows = []
    for name, pt in models:
        if pt.n > 4:
            continue
        t0 = time.perf_counter()
        tower = symbol_tower(pt, args.k_max if pt.n < 4 else min(args.k_max, 3))
        cv = char_variety(pt, samples=10)
        dt = time.perf_counter() - t0
        rows.append({"model": name, "n": pt.n, "dims": tower.dims, "hilbert": tower.hilbert, "finite_type": tower.finite_type,
                     "p": cv.p_complex, "kernel": cv.kernel_rank_complex, "phrase": cv.phrase, "seconds": round(dt, 2)})
        print(f"{name:22s} n={pt.n} dims={tower.dims!s:28s} p={cv.p_complex!s:4s} K={cv.kernel_rank_complex}  {cv.phrase}  [{dt:.1f}s]")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
