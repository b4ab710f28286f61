#!/usr/bin/env python3
"""Static scaling report: decomposition sizes and condition numbers, no runs.

Tabulates, for the 1D Poisson system at each size:

  decomposition_scaling.csv   term counts (constant 4 vs doubling Pauli
                              projection) and per-term gate counts
  condition_numbers.csv       kappa and log2(kappa) for n = 1..9
  *.svg                       the matching plots

Everything here is closed-form or an eigenvalue computation; it runs in
seconds and needs no optimization.
"""
import argparse

from vqls_poisson.bench import scaling_report


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results/scaling", help="output directory")
    args = parser.parse_args()
    for name, path in sorted(scaling_report(args.out).items()):
        print(f"{name:20s} {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
