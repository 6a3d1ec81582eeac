"""Command-line front end.

Subcommands: split, evaluate, bench, synthetic, stats. All output meant
for machine consumption (the split summary line, the evaluate CSV row)
prints floats via repr so a reader gets the exact binary value back.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import io as skio
from .core import LabelMatrix, build_counts
from .measures import OPTIMISABLE, evaluate_all
from .splitters import METHODS, UNAVAILABLE_METHODS, SplitConfig, make_split, train_test_split
from .synthetic import SCENARIOS, SyntheticSpec, synthetic_report

BENCH_METHODS = (
    "random", "is", "pmbsrs", "optisplit", "optisplit_rld", "optisplit_dcp", "ss", "sois",
)
DEFAULT_BENCH_METHODS = ("random", "is", "pmbsrs", "optisplit_rld", "optisplit_dcp")


def _parse_method_token(token: str) -> SplitConfig:
    """Map a bench/split method token onto a SplitConfig skeleton."""
    if token.startswith("optisplit_"):
        measure = token.removeprefix("optisplit_")
        if measure not in OPTIMISABLE:
            raise ValueError(f"unknown method token {token!r}")
        return SplitConfig(method="optisplit", optimise_measure=measure)
    if token in METHODS or token in UNAVAILABLE_METHODS:
        return SplitConfig(method=token)
    raise ValueError(f"unknown method token {token!r}")


def _summary_line(scores: dict, runtime_s: float) -> str:
    parts = [f"{name}={scores[name]!r}" for name in ("ed", "ld", "dcp", "rld")]
    parts.append(f"runtime_s={runtime_s!r}")
    return " ".join(parts)


def _cmd_split(args) -> int:
    labels = skio.read_labels(args.labels, args.format)
    if args.test_fraction is not None:
        train, test = train_test_split(
            labels, args.test_fraction, method=args.method, seed=args.seed
        )
        out = Path(args.out)
        for suffix, idx in ((".train", train), (".test", test)):
            with open(out.with_name(out.name + suffix), "w", encoding="utf-8") as fh:
                fh.writelines(f"{int(i)}\n" for i in idx)
        print(f"train={len(train)} test={len(test)}")
        return 0
    config = SplitConfig(
        method=args.method,
        k=args.k,
        seed=args.seed,
        optimise_measure=args.measure,
        max_epochs=args.max_epochs,
    )
    t0 = time.perf_counter()
    folds, _ = make_split(labels, config)
    runtime = time.perf_counter() - t0
    skio.write_folds(folds, args.out)
    print(_summary_line(evaluate_all(build_counts(labels, folds)), runtime))
    return 0


def _cmd_evaluate(args) -> int:
    labels = skio.read_labels(args.labels, args.format)
    t0 = time.perf_counter()
    folds = skio.read_folds(args.folds, labels.n, args.k)
    scores = evaluate_all(build_counts(labels, folds))
    runtime = time.perf_counter() - t0
    row = {
        "dataset": Path(args.labels).stem,
        "method": "evaluate",
        "seed": "-",
        "runtime_s": runtime,
        **scores,
    }
    print(",".join(skio.REPORT_COLUMNS))
    print(",".join(skio._format_cell(row[c]) for c in skio.REPORT_COLUMNS))
    return 0


@dataclass(frozen=True)
class BenchPlan:
    """One benchmark run: every (dataset, method, seed) cell plus means."""

    datasets: tuple[tuple[str, str], ...]  # (name, path)
    methods: tuple[str, ...]
    k: int
    seeds: tuple[int, ...]
    out: str


def _bench_cell(name: str, labels: LabelMatrix, token: str, k: int, seed: int) -> dict:
    row = {"dataset": name, "method": token, "seed": seed}
    try:
        skeleton = _parse_method_token(token)
        config = SplitConfig(
            method=skeleton.method,
            k=k,
            seed=seed,
            optimise_measure=skeleton.optimise_measure,
        )
        t0 = time.perf_counter()
        folds, _ = make_split(labels, config)
        runtime = time.perf_counter() - t0
        row.update(evaluate_all(build_counts(labels, folds)))
        row["runtime_s"] = runtime
    except ValueError:
        row.update({c: "error" for c in ("ed", "ld", "dcp", "rld", "runtime_s")})
    return row


def run_bench(plan: BenchPlan, format: str = "label-list") -> int:
    """Execute a benchmark plan and write the report CSV.

    Returns 0 when every cell produced scores, 2 when some errored.
    """
    matrices = {name: skio.read_labels(path, format) for name, path in plan.datasets}
    cells = [
        (name, matrices[name], token, plan.k, seed)
        for name, _ in plan.datasets
        for token in plan.methods
        for seed in plan.seeds
    ]
    threads = int(os.environ.get("STRATKIT_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda c: _bench_cell(*c), cells))
    else:
        rows = [_bench_cell(*c) for c in cells]

    partial = False
    mean_rows = []
    for name, _ in plan.datasets:
        for token in plan.methods:
            group = [r for r in rows if r["dataset"] == name and r["method"] == token]
            mean = {"dataset": name, "method": token, "seed": "mean"}
            if any(r["ed"] == "error" for r in group):
                partial = True
                mean.update({c: "error" for c in ("ed", "ld", "dcp", "rld", "runtime_s")})
            else:
                for c in ("ed", "ld", "dcp", "rld", "runtime_s"):
                    mean[c] = sum(r[c] for r in group) / len(group)
            mean_rows.append(mean)

    rows.sort(key=lambda r: (r["dataset"], r["method"], r["seed"]))
    mean_rows.sort(key=lambda r: (r["dataset"], r["method"]))
    ordered = []
    for name, _ in plan.datasets:
        for token in plan.methods:
            ordered.extend(
                r for r in rows if r["dataset"] == name and r["method"] == token
            )
            ordered.extend(
                r for r in mean_rows if r["dataset"] == name and r["method"] == token
            )
    skio.write_report(plan.out, ordered)
    return 2 if partial else 0


def _cmd_bench(args) -> int:
    datasets = []
    for token in args.datasets:
        name, sep, path = token.partition("=")
        if not sep:
            name, path = Path(token).stem, token
        datasets.append((name, path))
    plan = BenchPlan(
        datasets=tuple(datasets),
        methods=tuple(args.methods),
        k=args.k,
        seeds=tuple(range(args.seed, args.seed + args.seeds)),
        out=args.out,
    )
    code = run_bench(plan, args.format)
    print(f"wrote {args.out}")
    return code


def _cmd_synthetic(args) -> int:
    spec = SyntheticSpec(n=args.n, q=args.q, k=args.k, scenario=args.scenario)
    rows = synthetic_report(spec)
    skio.write_class_scores(args.out, rows)
    print(f"wrote {args.out} ({len(rows)} classes)")
    return 0


def _cmd_stats(args) -> int:
    labels = skio.read_labels(args.labels, args.format)
    print(skio.dataset_stats(labels).line())
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stratkit",
        description="Stratified cross-validation splits for sparse multilabel data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=skio.LABEL_FORMATS, default="label-list")

    p = sub.add_parser("split", help="compute a fold assignment and write it to a file")
    p.add_argument("--labels", required=True)
    add_format(p)
    p.add_argument("--method", default="optisplit", choices=METHODS + UNAVAILABLE_METHODS)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--measure", choices=sorted(OPTIMISABLE), default="rld")
    p.add_argument("--max-epochs", type=int, default=20)
    p.add_argument("--test-fraction", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("evaluate", help="score an existing fold assignment")
    p.add_argument("--labels", required=True)
    add_format(p)
    p.add_argument("--folds", required=True)
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("bench", help="run a method/seed grid and write a report CSV")
    p.add_argument("datasets", nargs="+", metavar="NAME=PATH")
    add_format(p)
    p.add_argument(
        "--methods", nargs="+", choices=BENCH_METHODS, default=list(DEFAULT_BENCH_METHODS)
    )
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds, base --seed")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("synthetic", help="closed-form scores for a synthetic scenario")
    p.add_argument("--scenario", choices=SCENARIOS, required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--q", type=int, default=100)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synthetic)

    p = sub.add_parser("stats", help="print dataset statistics")
    p.add_argument("--labels", required=True)
    add_format(p)
    p.set_defaults(func=_cmd_stats)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"stratkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
