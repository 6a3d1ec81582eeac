"""Split-quality measures over fold/class count tables.

Four measures, all pure functions of :class:`~stratkit.core.FoldClassCounts`:

* ``ld``  -- labels distribution: mean absolute gap between per-fold odds
  (positives/negatives) and the global odds. Known to scale with class
  size, so identical fold patterns score higher on bigger classes.
* ``ed``  -- examples distribution: mean absolute deviation of fold sizes
  from n/k. Class-independent; useful only as a sanity check.
* ``rld`` -- relative labels distribution: mean absolute relative gap
  between per-fold and global positive frequency. Class-size invariant.
* ``dcp`` -- delta-class proportion: how far the largest fold's share of a
  class's positives sits from 1/k. Class-size invariant, coarser than rld.

Excluded classes (no positives or no negatives) are skipped everywhere and
carried through on the report. Scores accumulate in double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FoldClassCounts

#: measures that produce per-class scores (and can drive the optimiser)
PER_CLASS_MEASURES = ("ld", "rld", "dcp")


@dataclass(frozen=True)
class MeasureReport:
    """Per-class scores plus their mean for one measure on one split.

    ``per_class`` holds retained classes only, in class-index order. For
    ``ed`` it is empty and ``aggregate`` carries the direct value. ``flags``
    lists (class, fold) pairs where the ld odds were clamped because a fold
    was entirely positive for the class.
    """

    measure_name: str
    per_class: np.ndarray
    aggregate: float
    excluded_classes: tuple[int, ...]
    flags: tuple[tuple[int, int], ...] = ()


def rld_column_scores(
    pos: np.ndarray,
    fold_sizes: np.ndarray,
    total_pos: np.ndarray,
    n_total: int,
    cols: np.ndarray,
) -> np.ndarray:
    """Per-class rld for the given class columns (raw-array kernel)."""
    k = len(fold_sizes)
    d = total_pos[cols] / n_total
    p = pos[:, cols] / fold_sizes[:, None]
    return np.abs(d[None, :] - p).sum(axis=0) / (k * d)


def dcp_column_scores(
    pos: np.ndarray,
    fold_sizes: np.ndarray,
    total_pos: np.ndarray,
    n_total: int,
    cols: np.ndarray,
) -> np.ndarray:
    """Per-class dcp for the given class columns (raw-array kernel)."""
    k = len(fold_sizes)
    return np.abs(pos[:, cols].max(axis=0) / total_pos[cols] - 1.0 / k)


OPTIMISABLE = {"rld": rld_column_scores, "dcp": dcp_column_scores}


def _ld_column_scores(pos, fold_sizes, total_pos, n_total, cols):
    """Per-class ld plus (class, fold) smoothing flags."""
    c = pos[:, cols]
    neg = fold_sizes[:, None] - c
    clamped = (neg == 0) & (c > 0)  # fold entirely positive: odds would be infinite
    fold_odds = c / np.maximum(neg, 1)
    d = total_pos[cols] / n_total
    global_odds = d / (1.0 - d)
    scores = np.abs(fold_odds - global_odds[None, :]).mean(axis=0)
    flags = tuple(
        (int(cols[col]), int(fold)) for fold, col in np.argwhere(clamped)
    )
    return scores, flags


def _check_counts(counts: FoldClassCounts, need_classes: bool, need_fold_sizes: bool):
    retained = counts.retained_classes()
    if need_classes and retained.size == 0:
        raise ValueError("no retained classes to score")
    if need_fold_sizes and np.any(counts.fold_sizes == 0):
        raise ValueError("cannot score a split with an empty fold")
    return retained


def ld(counts: FoldClassCounts) -> MeasureReport:
    """Labels distribution: per-fold odds vs global odds, averaged over folds."""
    retained = _check_counts(counts, need_classes=True, need_fold_sizes=True)
    scores, flags = _ld_column_scores(
        counts.pos, counts.fold_sizes, counts.total_pos, counts.n_total, retained
    )
    return MeasureReport("ld", scores, float(scores.mean()), counts.excluded_classes, flags)


def ed(counts: FoldClassCounts) -> MeasureReport:
    """Examples distribution: mean absolute fold-size deviation from n/k."""
    value = float(np.abs(counts.fold_sizes - counts.n_total / counts.k).mean())
    return MeasureReport("ed", np.zeros(0), value, counts.excluded_classes)


def rld(counts: FoldClassCounts) -> MeasureReport:
    """Relative labels distribution: |d - p|/d averaged over folds."""
    retained = _check_counts(counts, need_classes=True, need_fold_sizes=True)
    scores = rld_column_scores(
        counts.pos, counts.fold_sizes, counts.total_pos, counts.n_total, retained
    )
    return MeasureReport("rld", scores, float(scores.mean()), counts.excluded_classes)


def dcp(counts: FoldClassCounts) -> MeasureReport:
    """Delta-class proportion: biggest fold's positive share vs the flat 1/k."""
    retained = _check_counts(counts, need_classes=True, need_fold_sizes=False)
    scores = dcp_column_scores(
        counts.pos, counts.fold_sizes, counts.total_pos, counts.n_total, retained
    )
    return MeasureReport("dcp", scores, float(scores.mean()), counts.excluded_classes)


REPORTS = {"ld": ld, "ed": ed, "rld": rld, "dcp": dcp}


def per_class_score(measure: str, counts: FoldClassCounts, class_index: int) -> float:
    """Score a single class in O(k); equals the full report's component."""
    if measure not in PER_CLASS_MEASURES:
        raise ValueError(f"measure {measure!r} has no per-class score")
    if not (0 <= class_index < counts.q):
        raise ValueError(f"class index {class_index} out of range")
    if class_index in counts.excluded_classes:
        raise ValueError(f"class {class_index} is excluded")
    col = np.array([class_index])
    if measure == "ld":
        if np.any(counts.fold_sizes == 0):
            raise ValueError("cannot score a split with an empty fold")
        scores, _ = _ld_column_scores(
            counts.pos, counts.fold_sizes, counts.total_pos, counts.n_total, col
        )
    else:
        if measure == "rld" and np.any(counts.fold_sizes == 0):
            raise ValueError("cannot score a split with an empty fold")
        kernel = OPTIMISABLE[measure]
        scores = kernel(counts.pos, counts.fold_sizes, counts.total_pos, counts.n_total, col)
    return float(scores[0])


def evaluate_all(counts: FoldClassCounts) -> dict[str, float]:
    """Aggregate scores for all four measures, keyed by name."""
    return {name: fn(counts).aggregate for name, fn in REPORTS.items()}
