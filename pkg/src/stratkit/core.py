"""Label matrices, fold assignments, and the per-fold count view.

Everything downstream (measures, splitters) consumes ``FoldClassCounts``:
a k x q table of per-fold positive counts plus fold sizes. Keeping that
view separate from the raw labels lets split quality be scored without
touching the data again, and lets count patterns be constructed directly
(see :mod:`stratkit.synthetic`).

All types here are immutable from the caller's perspective; operations
return new values, so instances are safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def _as_count_array(a) -> np.ndarray:
    """Counts as contiguous int64, or float64 for real-valued patterns."""
    a = np.ascontiguousarray(a)
    if a.dtype.kind == "f":
        return np.ascontiguousarray(a, dtype=np.float64)
    return np.ascontiguousarray(a, dtype=np.int64)


class LabelMatrix:
    """Sparse binary n x q target matrix (data points x classes).

    Each row holds the strictly increasing positive class indices of one
    data point. Rows are packed into flat index/offset arrays so that row
    slices are views and per-class counts are computed once.
    """

    def __init__(self, q: int, rows: Iterable[Sequence[int]]):
        rows = list(rows)
        n = len(rows)
        lengths = np.fromiter((len(r) for r in rows), dtype=np.int64, count=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        if int(indptr[-1]) > 0:
            indices = np.concatenate(
                [np.asarray(r, dtype=np.int64) for r in rows if len(r)]
            )
        else:
            indices = np.zeros(0, dtype=np.int64)
        self._init_from(q, indptr, indices)

    @classmethod
    def from_arrays(cls, q: int, indptr: np.ndarray, indices: np.ndarray) -> "LabelMatrix":
        """Build from packed row offsets and flat class indices (validated)."""
        self = cls.__new__(cls)
        self._init_from(
            q,
            np.ascontiguousarray(indptr, dtype=np.int64),
            np.ascontiguousarray(indices, dtype=np.int64),
        )
        return self

    def _init_from(self, q: int, indptr: np.ndarray, indices: np.ndarray) -> None:
        n = len(indptr) - 1
        if n < 1:
            raise ValueError("label matrix needs at least one data point")
        if q < 1:
            raise ValueError("label matrix needs at least one class")
        if indptr[0] != 0 or np.any(np.diff(indptr) < 0) or indptr[-1] != len(indices):
            raise ValueError("malformed row offsets")
        if len(indices) and (indices.min() < 0 or indices.max() >= q):
            raise ValueError(f"class index out of range [0, {q})")
        # rows must be strictly increasing: every within-row adjacent pair ascends
        if len(indices) > 1:
            ascending = indices[1:] > indices[:-1]
            breaks = indptr[1:-1] - 1  # flat positions where a new row starts next
            breaks = breaks[(breaks >= 0) & (breaks < len(ascending))]
            within = np.ones(len(ascending), dtype=bool)
            within[breaks] = False
            if not np.all(ascending[within]):
                raise ValueError("row indices must be strictly increasing (duplicate or unsorted label)")
        self._q = q
        self._indptr = indptr
        self._indices = indices
        self._class_sizes = np.bincount(indices, minlength=q)
        self._by_class: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def n(self) -> int:
        return len(self._indptr) - 1

    @property
    def q(self) -> int:
        return self._q

    @property
    def nnz(self) -> int:
        return len(self._indices)

    @property
    def class_sizes(self) -> np.ndarray:
        """Per-class positive count, shape (q,)."""
        return self._class_sizes

    @property
    def rows(self) -> list[np.ndarray]:
        """Per-point sorted positive class indices (read-only views)."""
        return [self.row(p) for p in range(self.n)]

    def row(self, point: int) -> np.ndarray:
        return self._indices[self._indptr[point]:self._indptr[point + 1]]

    def concat_rows(self, points: np.ndarray) -> np.ndarray:
        """Concatenated class indices of the given points, in point order."""
        points = np.asarray(points, dtype=np.int64)
        starts = self._indptr[points]
        lengths = self._indptr[points + 1] - starts
        total = int(lengths.sum())
        if total == 0:
            return np.zeros(0, dtype=np.int64)
        offsets = np.cumsum(lengths) - lengths
        flat = np.arange(total, dtype=np.int64) - np.repeat(offsets, lengths)
        return self._indices[np.repeat(starts, lengths) + flat]

    def points_of_class(self, c: int) -> np.ndarray:
        """Indices of the points positive for class ``c``, ascending."""
        if self._by_class is None:
            point_of_entry = np.repeat(
                np.arange(self.n, dtype=np.int64), np.diff(self._indptr)
            )
            order = np.argsort(self._indices, kind="stable")
            class_ptr = np.zeros(self._q + 1, dtype=np.int64)
            np.cumsum(self._class_sizes, out=class_ptr[1:])
            self._by_class = (class_ptr, point_of_entry[order])
        class_ptr, pts = self._by_class
        return pts[class_ptr[c]:class_ptr[c + 1]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelMatrix):
            return NotImplemented
        return (
            self._q == other._q
            and np.array_equal(self._indptr, other._indptr)
            and np.array_equal(self._indices, other._indices)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LabelMatrix(n={self.n}, q={self.q}, nnz={self.nnz})"


@dataclass(frozen=True)
class FoldAssignment:
    """Total mapping of each data point to one of k folds."""

    k: int
    assignment: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.assignment, dtype=np.int64)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if arr.ndim != 1 or len(arr) < 1:
            raise ValueError("assignment must be a non-empty 1-d sequence")
        if arr.min() < 0 or arr.max() >= self.k:
            raise ValueError(f"fold index out of range [0, {self.k})")
        if np.any(np.bincount(arr, minlength=self.k) == 0):
            raise ValueError("every fold must contain at least one point")
        object.__setattr__(self, "assignment", arr)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)


@dataclass(frozen=True)
class FoldClassCounts:
    """Per-fold per-class positive counts: the sufficient statistic for all measures.

    ``excluded_classes`` lists classes with no positive or no negative data
    points; they are recorded here once and skipped by every measure.
    Frequencies are always derived on demand, never stored.
    """

    k: int
    q: int
    pos: np.ndarray         # (k, q) per-fold positive counts
    fold_sizes: np.ndarray  # (k,) per-fold point counts
    total_pos: np.ndarray   # (q,) per-class totals
    n_total: int
    excluded_classes: tuple[int, ...]

    def __post_init__(self):
        # counts from real splits are integers; idealized real-valued count
        # patterns (fractional per-fold shares) are accepted as float64
        pos = _as_count_array(self.pos)
        fold_sizes = _as_count_array(self.fold_sizes)
        total_pos = _as_count_array(self.total_pos)
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "fold_sizes", fold_sizes)
        object.__setattr__(self, "total_pos", total_pos)
        object.__setattr__(self, "excluded_classes", tuple(self.excluded_classes))
        if pos.shape != (self.k, self.q):
            raise ValueError(f"pos must have shape ({self.k}, {self.q})")
        if fold_sizes.shape != (self.k,) or total_pos.shape != (self.q,):
            raise ValueError("fold_sizes/total_pos shape mismatch")
        if pos.min(initial=0) < 0 or fold_sizes.min(initial=0) < 0:
            raise ValueError("counts must be non-negative")
        if np.any(pos > fold_sizes[:, None]):
            raise ValueError("a fold cannot hold more positives of a class than points")
        if not np.allclose(pos.sum(axis=0), total_pos, rtol=0.0, atol=1e-9):
            raise ValueError("column sums of pos must equal total_pos")
        if not math.isclose(float(fold_sizes.sum()), float(self.n_total), rel_tol=0.0, abs_tol=1e-9):
            raise ValueError("fold sizes must sum to n_total")
        expected = np.where((total_pos == 0) | (total_pos == self.n_total))[0]
        if self.excluded_classes != tuple(int(c) for c in expected):
            raise ValueError("excluded_classes must list exactly the all-negative/all-positive classes")

    @classmethod
    def from_pos(cls, pos: np.ndarray, fold_sizes: np.ndarray) -> "FoldClassCounts":
        """Derive totals and exclusions from a count matrix and fold sizes."""
        pos = _as_count_array(pos)
        fold_sizes = _as_count_array(fold_sizes)
        k, q = pos.shape
        total_pos = pos.sum(axis=0)
        n_total = int(fold_sizes.sum())
        excluded = tuple(int(c) for c in np.where((total_pos == 0) | (total_pos == n_total))[0])
        return cls(k, q, pos, fold_sizes, total_pos, n_total, excluded)

    def retained_classes(self) -> np.ndarray:
        mask = np.ones(self.q, dtype=bool)
        if self.excluded_classes:
            mask[list(self.excluded_classes)] = False
        return np.where(mask)[0]


def build_counts(labels: LabelMatrix, folds: FoldAssignment) -> FoldClassCounts:
    """Tabulate per-fold per-class positive counts for a fold assignment."""
    if folds.n != labels.n:
        raise ValueError(f"labels have {labels.n} points but assignment has {folds.n}")
    k, q = folds.k, labels.q
    fold_per_entry = np.repeat(folds.assignment, np.diff(labels._indptr))
    pos = np.bincount(fold_per_entry * q + labels._indices, minlength=k * q).reshape(k, q)
    return FoldClassCounts.from_pos(pos, folds.fold_sizes())


def counts_after_move(
    counts: FoldClassCounts,
    labels: LabelMatrix,
    point: int,
    from_fold: int,
    to_fold: int,
) -> FoldClassCounts:
    """Counts after moving one point between folds; inverse move restores exactly."""
    if labels.q != counts.q:
        raise ValueError("labels and counts disagree on the number of classes")
    if labels.n != counts.n_total:
        raise ValueError("labels and counts disagree on the number of points")
    if not (0 <= point < labels.n):
        raise ValueError(f"point {point} out of range")
    for f in (from_fold, to_fold):
        if not (0 <= f < counts.k):
            raise ValueError(f"fold index {f} out of range [0, {counts.k})")
    if from_fold == to_fold:
        raise ValueError("from_fold and to_fold must differ")
    labs = labels.row(point)
    if counts.fold_sizes[from_fold] < 1 or np.any(counts.pos[from_fold, labs] < 1):
        raise ValueError(f"point {point} is not assigned to fold {from_fold}")
    pos = counts.pos.copy()
    fold_sizes = counts.fold_sizes.copy()
    pos[from_fold, labs] -= 1
    pos[to_fold, labs] += 1
    fold_sizes[from_fold] -= 1
    fold_sizes[to_fold] += 1
    return FoldClassCounts.from_pos(pos, fold_sizes)
