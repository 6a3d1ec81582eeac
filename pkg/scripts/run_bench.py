#!/usr/bin/env python3
"""Run the standard 10-seed method comparison on one or more datasets.

Equivalent to `stratkit bench` with the default method list; exists so the
usual benchmark is one command with a stable protocol.
"""

import argparse
import sys

from stratkit.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("datasets", nargs="+", metavar="NAME=PATH")
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--seeds", type=int, default=10)
    parser.add_argument("--out", required=True)
    args = parser.parse_args()
    argv = ["bench", *args.datasets, "--k", str(args.k),
            "--seeds", str(args.seeds), "--out", args.out]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
