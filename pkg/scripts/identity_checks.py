#!/usr/bin/env python3
"""Run every boundary-identity check on enumerable domains.

Covers the per-rhombus contour relation, the four-side parallelogram
identity over all domains within the rhombus budget, the strip tail
bounds and the hexagon flip residuals.  Exits non-zero on the first
tolerance violation.

    python scripts/identity_checks.py --budget 12
"""

import argparse
import math

from skewsaw.loops import on_observable_cr_check, yang_baxter_residual
from skewsaw.observable import (
    bridge_chain_check,
    max_cr_residual,
    observable,
    parallelogram_identity_residual,
    strip_limits,
)
from skewsaw.geometry import ParallelogramDomain
from skewsaw.weights import critical_weights

THETAS = (math.pi / 3, 5 * math.pi / 12, math.pi / 2, 7 * math.pi / 12,
          2 * math.pi / 3)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=12,
                    help="max rhombi per enumerated domain")
    ap.add_argument("--tol", type=float, default=1e-10)
    args = ap.parse_args()
    failures = 0

    worst = 0.0
    for th in THETAS:
        for T, L in ((2, 1), (3, 1)):
            worst = max(worst, max_cr_residual(
                observable(ParallelogramDomain(T, L, th), 5 / 8)))
    print(f"contour relation: max residual {worst:.3e}")
    failures += worst >= args.tol

    worst = 0.0
    for th in THETAS:
        for T in range(1, args.budget + 1):
            for L in range(0, args.budget):
                if (2 * L + 1) * T > args.budget:
                    continue
                worst = max(worst, parallelogram_identity_residual(T, L, th))
    print(f"parallelogram identity (budget {args.budget}): "
          f"max residual {worst:.3e}")
    failures += worst >= args.tol

    th = math.pi / 2
    xc = critical_weights(th).x_c
    for T, Lmax in ((1, 7), (2, 5), (3, 3)):
        rep = strip_limits(T, xc, th, Lmax)
        decaying = all(b < a for a, b in zip(rep.ED, rep.ED[1:]))
        bounded = all(m >= -1e-12 for m in rep.growth_margins)
        print(f"strip T={T}: E+D {rep.ED[0]:.3g} -> {rep.ED[-1]:.3g}, "
              f"decaying={decaying}, growth bound ok={bounded}")
        failures += not (decaying and bounded)
    chain = bridge_chain_check(th, 3, 3)
    ok = all(m > 0 for m in chain.floor_margins + chain.subcritical_margins)
    print(f"bridge chain: floor margins {[f'{m:.3f}' for m in chain.floor_margins]}")
    failures += not ok

    worst = 0.0
    for alpha in (0.5, 0.65, 0.8, 0.95, 1.1):
        for s in (-3 / 8, 0.5, 0.75):
            worst = max(worst, yang_baxter_residual(alpha, s).max_residual)
    cr = max(on_observable_cr_check(math.pi / 2, s, 2, 2)
             for s in (-3 / 8, 0.5))
    print(f"hexagon flip: max residual {worst:.3e}; loop observable {cr:.3e}")
    failures += worst >= args.tol or cr >= args.tol

    print("all checks passed" if not failures else f"{failures} check(s) failed")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
