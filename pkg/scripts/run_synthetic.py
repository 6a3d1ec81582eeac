#!/usr/bin/env python3
"""Emit per-class score CSVs for all three synthetic scenarios."""

import argparse
from pathlib import Path

from stratkit.io import write_class_scores
from stratkit.synthetic import SCENARIOS, SyntheticSpec, synthetic_report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100_000)
    parser.add_argument("--q", type=int, default=100)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--outdir", default=".")
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for scenario in SCENARIOS:
        spec = SyntheticSpec(n=args.n, q=args.q, k=args.k, scenario=scenario)
        out = outdir / f"synthetic_{scenario}.csv"
        write_class_scores(out, synthetic_report(spec))
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
