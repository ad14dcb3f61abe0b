"""Locate the largest beta for which a + beta a† couplings still entangle at short times.

Scans the t^4 coefficient of n23 (exact correlators in a truncated space)
and refines the sign change with brentq.
"""

import argparse

from scipy.optimize import brentq

from entransfer.cli import beta_scan, sign_change
from entransfer.perturbation import beta_indicator, beta_threshold


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--beta-min", type=float, default=0.30)
    ap.add_argument("--beta-max", type=float, default=0.70)
    ap.add_argument("--steps", type=int, default=41)
    args = ap.parse_args()
    points = beta_scan(args.beta_min, args.beta_max, args.steps)
    for beta, numeric, analytic in points:
        print(f"{beta:.3f}  {numeric:+.6e}  {analytic:+.6e}")
    bracket = sign_change(points)
    if bracket is None:
        print("no sign change in range")
        return
    lo, hi, _ = bracket
    root = brentq(beta_indicator, lo, hi, xtol=1e-14)
    print(f"bracket [{lo:.3f}, {hi:.3f}]  refined {root:.12f}  closed form {beta_threshold():.12f}")


if __name__ == "__main__":
    main()
