#!/usr/bin/env python3
"""Print the divergence table showing h and k are not equivalent in general.

For each n the domain is the plane punctured along a geometric ladder whose
rungs spread apart; the quasihyperbolic distance across the ladder grows like
the number of rungs times their log-spacing, while the hyperbolic distance
admits an upper bound that grows much slower.  The certified gap column turns
positive once the rungs are far enough apart and then increases without
bound, which is the whole point.

Usage:
    python3 scripts/counterexample_table.py --max-n 9 --csv /tmp/table.csv
"""

import argparse
from dataclasses import dataclass

from qhyp.equivalence import counterexample_divergence


@dataclass
class Config:
    max_n: int = 8
    csv: str = ""


def parse_args() -> Config:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--csv", default="")
    ns = ap.parse_args()
    return Config(max_n=ns.max_n, csv=ns.csv)


def main() -> None:
    cfg = parse_args()
    table = counterexample_divergence(cfg.max_n)

    print(f"{'n':>3} {'L':>14} {'k lower':>16} {'h upper':>16} {'gap':>16}")
    first_positive = None
    for row in table.rows:
        h = "-" if row.h_upper is None else f"{row.h_upper:16.4f}"
        g = "-" if row.bound is None else f"{row.bound:16.4f}"
        print(f"{row.n:>3} {row.L:>14.1f} {row.k_lower:>16.1f} {h:>16} {g:>16}")
        if first_positive is None and row.bound is not None and row.bound > 0:
            first_positive = row.n

    if first_positive is not None:
        print(f"\ncertified gap turns positive at n = {first_positive}")
    else:
        print("\nno positive gap yet; raise --max-n")

    if cfg.csv:
        table.write_csv(cfg.csv)
        print(f"wrote {cfg.csv}")


if __name__ == "__main__":
    main()
