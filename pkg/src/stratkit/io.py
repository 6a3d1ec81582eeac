"""File formats and dataset statistics.

Canonical label-list format (UTF-8, LF):
    line 1:      "n q"
    lines 2..n+1: the sorted positive class indices of one data point,
                  space-separated; an empty line means no labels.

Fold files hold one fold index per line. Report CSVs carry a header row and
one row per (dataset, method, seed); aggregate rows use seed = "mean".
Parsing is strict: duplicate or unsorted labels in a row are errors, not
silently repaired, since they usually mean upstream corruption.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import FoldAssignment, LabelMatrix

LABEL_FORMATS = ("label-list", "dense-csv")

REPORT_COLUMNS = ("dataset", "method", "seed", "ed", "ld", "dcp", "rld", "runtime_s")
CLASS_SCORE_COLUMNS = ("class_index", "class_size", "ld", "rld", "dcp")


def _read_lines(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    if text.endswith("\n"):
        text = text[:-1]
    return text.split("\n")


def read_labels(path, format: str = "label-list") -> LabelMatrix:
    """Parse a label file into a LabelMatrix.

    ``label-list`` is the canonical format above; ``dense-csv`` is a
    headerless 0/1 indicator matrix, one comma-separated row per point.
    """
    if format == "label-list":
        return _read_label_list(path)
    if format == "dense-csv":
        return _read_dense_csv(path)
    raise ValueError(f"unknown label format {format!r}; choose from {LABEL_FORMATS}")


def _read_label_list(path) -> LabelMatrix:
    lines = _read_lines(path)
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"{path}: header must be 'n q', got {lines[0]!r}")
    try:
        n, q = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError(f"{path}: header must be 'n q', got {lines[0]!r}") from None
    if n < 1 or q < 1:
        raise ValueError(f"{path}: empty dataset (n={n}, q={q})")
    if len(lines) - 1 != n:
        raise ValueError(f"{path}: expected {n} rows, found {len(lines) - 1}")
    indptr = np.zeros(n + 1, dtype=np.int64)
    flat: list[int] = []
    for row_no, line in enumerate(lines[1:]):
        prev = -1
        for tok in line.split():
            try:
                idx = int(tok)
            except ValueError:
                raise ValueError(f"{path}:{row_no + 2}: bad label index {tok!r}") from None
            if not 0 <= idx < q:
                raise ValueError(f"{path}:{row_no + 2}: label index {idx} out of range [0, {q})")
            if idx <= prev:
                kind = "duplicate" if idx == prev else "unsorted"
                raise ValueError(f"{path}:{row_no + 2}: {kind} label index {idx}")
            flat.append(idx)
            prev = idx
        indptr[row_no + 1] = len(flat)
    return LabelMatrix.from_arrays(q, indptr, np.asarray(flat, dtype=np.int64))


def _read_dense_csv(path) -> LabelMatrix:
    lines = _read_lines(path)
    if lines == [""]:
        raise ValueError(f"{path}: empty dataset")
    rows = []
    q = None
    for row_no, line in enumerate(lines):
        cells = [c.strip() for c in line.split(",")]
        if q is None:
            q = len(cells)
        elif len(cells) != q:
            raise ValueError(f"{path}:{row_no + 1}: expected {q} cells, found {len(cells)}")
        row = []
        for col, cell in enumerate(cells):
            if cell == "1":
                row.append(col)
            elif cell != "0":
                raise ValueError(f"{path}:{row_no + 1}: cell must be 0 or 1, got {cell!r}")
        rows.append(row)
    return LabelMatrix(q, rows)


def write_labels(labels: LabelMatrix, path) -> None:
    """Serialize to the canonical label-list format."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{labels.n} {labels.q}\n")
        for p in range(labels.n):
            fh.write(" ".join(str(int(i)) for i in labels.row(p)))
            fh.write("\n")


def write_folds(folds: FoldAssignment, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(f"{int(j)}\n" for j in folds.assignment)


def read_folds(path, n: int, k: int) -> FoldAssignment:
    """Read a fold file; must hold exactly n indices in [0, k)."""
    lines = _read_lines(path)
    if len(lines) != n:
        raise ValueError(f"{path}: expected {n} lines, found {len(lines)}")
    try:
        assignment = np.array([int(line) for line in lines], dtype=np.int64)
    except ValueError:
        raise ValueError(f"{path}: fold file must hold one integer per line") from None
    if len(assignment) and (assignment.min() < 0 or assignment.max() >= k):
        raise ValueError(f"{path}: fold index out of range [0, {k})")
    return FoldAssignment(k, assignment)


@dataclass(frozen=True)
class DatasetStats:
    """Size and class-imbalance statistics over retained classes."""

    n: int
    q: int
    density: float
    min: int
    p25: int
    p50: int
    p75: int
    max: int

    def line(self) -> str:
        return (
            f"n={self.n} labels={self.q} density={self.density:.6f} "
            f"min={self.min} p25={self.p25} p50={self.p50} p75={self.p75} max={self.max}"
        )


def _nearest_rank(sorted_values: np.ndarray, pct: float) -> int:
    rank = max(1, math.ceil(pct * len(sorted_values)))
    return int(sorted_values[rank - 1])


def dataset_stats(labels: LabelMatrix) -> DatasetStats:
    """Class-size quantiles (nearest-rank) and label density.

    Classes with no positive or no negative points are dropped first;
    density counts the retained classes' entries over n * q_retained.
    """
    sizes = labels.class_sizes
    retained = sizes[(sizes > 0) & (sizes < labels.n)]
    if retained.size == 0:
        raise ValueError("no retained classes; dataset is empty or degenerate")
    retained = np.sort(retained)
    q = int(retained.size)
    return DatasetStats(
        n=labels.n,
        q=q,
        density=float(retained.sum() / (labels.n * q)),
        min=int(retained[0]),
        p25=_nearest_rank(retained, 0.25),
        p50=_nearest_rank(retained, 0.50),
        p75=_nearest_rank(retained, 0.75),
        max=int(retained[-1]),
    )


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)  # full round-trip precision
    return str(value)


def _write_csv(path, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])


def _read_csv(path, columns) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(columns):
            raise ValueError(f"{path}: expected header {list(columns)}, got {header}")
        out = []
        for row in reader:
            if len(row) != len(columns):
                raise ValueError(f"{path}: row width {len(row)} != {len(columns)}")
            out.append(dict(zip(columns, row)))
        return out


def write_report(path, rows) -> None:
    """Benchmark report CSV: one row per (dataset, method, seed)."""
    _write_csv(path, REPORT_COLUMNS, rows)


def read_report(path) -> list[dict]:
    """Re-parse a report CSV; cell values come back as strings."""
    return _read_csv(path, REPORT_COLUMNS)


def write_class_scores(path, rows) -> None:
    """Per-class score CSV as emitted for the synthetic scenarios."""
    _write_csv(path, CLASS_SCORE_COLUMNS, rows)


def read_class_scores(path) -> list[dict]:
    return _read_csv(path, CLASS_SCORE_COLUMNS)
