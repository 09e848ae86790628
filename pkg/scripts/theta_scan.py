#!/usr/bin/env python3
"""Scan the weight families over the angle window.

Writes one CSV row per grid angle with the five weights, the growth
target 1/u1, the local-relation residual and the positivity margins.

    python scripts/theta_scan.py --points 25 --out theta_scan.csv
"""

import argparse
import csv
import math
import sys

from skewsaw.weights import critical_weights, local_residuals, theta_grid


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=25)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["theta", "u1", "u2", "v", "w1", "w2", "inv_u1",
                     "local_residual", "margin_u1sq_w1", "margin_u2sq_w2"])
    for th in theta_grid(args.points):
        w = critical_weights(th)
        r = local_residuals(w, 5 / 8, th).max_abs()
        writer.writerow([th, w.u1, w.u2, w.v, w.w1, w.w2, 1 / w.u1, r,
                         w.u1 ** 2 - w.w1, w.u2 ** 2 - w.w2])
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
