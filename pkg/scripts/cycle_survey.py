#!/usr/bin/env python3
"""Survey cycle structure across rational offset ratios.

For every reduced fraction p/q with q up to --max-den, build the doubleton
{-p, q} (offset ratio p/q), detect its eventual cycle, and record preperiod
and period. Prints a per-denominator summary and optionally writes the raw
rows as CSV for plotting.

Usage:
    python3 scripts/cycle_survey.py --max-den 12 --max-num 12 --out survey.csv
"""

import argparse
import csv
import math
import sys
from fractions import Fraction

from drplane.cycling import DoubletonProblem, detect_cycle
from drplane.geometry import Hyperplane


def doubleton(ratio: Fraction) -> DoubletonProblem:
    A = Hyperplane((Fraction(1),))
    return DoubletonProblem(
        A, (Fraction(-ratio.numerator),), (Fraction(ratio.denominator),), (Fraction(0),)
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-den", type=int, default=10)
    ap.add_argument("--max-num", type=int, default=10)
    ap.add_argument("--horizon", type=int, default=10**5)
    ap.add_argument("--out", help="write raw rows as CSV here")
    args = ap.parse_args()

    rows = []
    seen = set()
    for den in range(1, args.max_den + 1):
        for num in range(1, args.max_num + 1):
            if math.gcd(num, den) != 1:
                continue
            ratio = Fraction(num, den)
            if ratio in seen:
                continue
            seen.add(ratio)
            report = detect_cycle(doubleton(ratio), args.horizon)
            if report.status != "cycle":
                print(f"no cycle within {args.horizon} for ratio {ratio}", file=sys.stderr)
                return 1
            rows.append((num, den, report.preperiod, report.period))

    by_den = {}
    for num, den, pre, per in rows:
        by_den.setdefault(den, []).append(per)
    print("den  ratios  max_period  mean_period")
    for den in sorted(by_den):
        periods = by_den[den]
        print(
            f"{den:3d}  {len(periods):6d}  {max(periods):10d}  "
            f"{sum(periods) / len(periods):11.2f}"
        )

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            writer = csv.writer(fp)
            writer.writerow(["num", "den", "preperiod", "period"])
            writer.writerows(rows)
        print(f"{len(rows)} rows written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
