"""Recompute both published tables and print a cell-by-cell comparison.

Usage: python3 scripts/reproduce_tables.py [--paths N] [--seed S]
"""

import argparse

from fourier_greeks.distributions import RngStream
from fourier_greeks.risk import VaRConfig
from fourier_greeks.tables import compare, compute_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    cfg = VaRConfig(paths=args.paths, rng=RngStream(args.seed))
    for name in ("table1", "table2"):
        results = compare(name, compute_table(name, cfg))
        print(f"\n{name}")
        print(f"{'row':<12}{'column':<11}{'computed':>14}{'published':>12}  result")
        for r in results:
            print(f"{r.row:<12}{r.column:<11}{r.computed:>14.6g}{r.reference:>12.6g}  {'pass' if r.passed else 'FAIL'}")
        print(f"{sum(r.passed for r in results)}/{len(results)} cells within tolerance")


if __name__ == "__main__":
    main()
