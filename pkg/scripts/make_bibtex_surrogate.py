#!/usr/bin/env python3
"""Write the seeded bibtex-shaped dataset to a label-list file."""

import argparse

from stratkit.io import dataset_stats, write_labels
from stratkit.synthetic import bibtex_surrogate


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True)
    args = parser.parse_args()
    labels = bibtex_surrogate(args.seed)
    write_labels(labels, args.out)
    print(f"wrote {args.out}")
    print(dataset_stats(labels).line())


if __name__ == "__main__":
    main()
