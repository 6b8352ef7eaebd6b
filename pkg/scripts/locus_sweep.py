#!/usr/bin/env python3
"""Sweep the gain magnitude at a fixed gain ratio and trace the locus of
two-agent convergence points.

For each eta the gains are (eta, eta/rho). The settled centroid is computed
by quadrature and checked against the predicted line through the initial
centroid; the distance-gain product d * eta should be constant along the
sweep.

Usage:
    python scripts/locus_sweep.py [--rho R] [--etas 0.5,1,2,4]
"""

import argparse

import numpy as np

from phasebal import convergence_point, locus_line

THETA0 = np.deg2rad([0.0, 120.0])
R0 = np.array([[-1.0, -2.0], [5.0, -2.0]])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rho", type=float, default=1.0, help="gain ratio K1/K2")
    parser.add_argument(
        "--etas", default="0.5,1,2,4,8", help="comma separated gain magnitudes"
    )
    args = parser.parse_args()

    etas = [float(v) for v in args.etas.split(",")]
    locus = locus_line(THETA0, R0, args.rho)
    if locus.vertical:
        print(f"rho={args.rho}: vertical locus through ({locus.anchor[0]}, {locus.anchor[1]})")
    else:
        print(
            f"rho={args.rho}: locus slope {locus.slope:.7f} through "
            f"({locus.anchor[0]}, {locus.anchor[1]})"
        )
    print(f"{'eta':>8} {'x_inf':>12} {'y_inf':>12} {'dist':>10} {'d*eta':>10} {'off-line':>10}")
    for eta in etas:
        point = convergence_point(THETA0, R0, [eta, eta / args.rho])
        dx = point.x - locus.anchor[0]
        dy = point.y - locus.anchor[1]
        dist = float(np.hypot(dx, dy))
        if locus.vertical:
            off = abs(dx)
        else:
            off = abs(locus.slope * dx - dy) / float(np.hypot(locus.slope, 1.0))
        print(
            f"{eta:8.3f} {point.x:12.8f} {point.y:12.8f} "
            f"{dist:10.6f} {dist * eta:10.6f} {off:10.2e}"
        )


if __name__ == "__main__":
    main()
