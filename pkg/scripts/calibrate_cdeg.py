"""Recompute the degree constant C_DEG of the bisection budget schedule.

Every stage j uses the smallest d with binom(d+3,3)-1 >= 2^j; the builder
may escalate a stage by one degree when the numeric search stalls.  The
constant is the worst ratio of that total to r^(1/3) over the supported r.
"""

import argparse

from circlab.partition import C_DEG, schedule_total


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rmax", type=int, default=4096)
    ap.add_argument("--escalation", type=int, default=1)
    args = ap.parse_args()
    worst, at = 0.0, None
    for r in range(2, args.rmax + 1):
        ratio = schedule_total(r, args.escalation) / r ** (1 / 3)
        if ratio > worst:
            worst, at = ratio, r
    print(f"worst ratio {worst:.4f} at r={at}; recorded C_DEG={C_DEG}")
    for r in (2, 4, 8, 16, 32, 64, 256, 1024, 4096):
        if r <= args.rmax:
            print(r, schedule_total(r, 0), schedule_total(r, args.escalation))


if __name__ == "__main__":
    main()
