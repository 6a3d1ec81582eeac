"""Synthetic count patterns for probing measure behaviour, plus a seeded
stand-in for the MULAN bibtex dataset.

The scenario generators build fold/class count tables directly: every
measure consumes counts only, so materialising a hundred thousand points
is unnecessary. The count tables are real-valued ideals, so each class
realises its scenario exactly regardless of divisibility; ``materialise``
rounds them to a real (labels, folds) pair for end-to-end runs at a
smaller n.

Scenarios, per class of size c over k equally sized folds:

* ``equal``       -- every fold holds c/k positives.
* ``difference``  -- one fold 20% above c/k, one 20% below, rest exact.
* ``one_missing`` -- one fold holds none, the rest split c evenly.

Class sizes sweep from 2k up to about n/2 so the scenarios exercise both
rare and common classes with identical fold patterns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FoldAssignment, FoldClassCounts, LabelMatrix
from .measures import dcp, ld, rld

SCENARIOS = ("equal", "difference", "one_missing")


@dataclass(frozen=True)
class SyntheticSpec:
    n: int = 100_000
    q: int = 100
    k: int = 10
    scenario: str = "equal"

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.k < 2 or self.q < 1 or self.n < 1:
            raise ValueError("need n >= 1, q >= 1, k >= 2")
        if self.n % self.k:
            raise ValueError("n must be divisible by k")


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def class_sizes(spec: SyntheticSpec) -> np.ndarray:
    """Class sizes 2k .. ~n/2, rounded to multiples of k (half-up)."""
    j = np.arange(spec.q)
    raw = 2 * spec.k + j * (spec.n / 2 - 2 * spec.k) / spec.q
    sizes = spec.k * np.floor(raw / spec.k + 0.5).astype(np.int64)
    if sizes.min() <= 0:
        raise ValueError("class size rounded to zero; increase n or decrease q/k")
    return sizes


def _ideal_pattern(size: float, k: int, scenario: str) -> np.ndarray:
    """Exact per-fold positive counts of one class under a scenario."""
    base = size / k
    counts = np.full(k, base, dtype=np.float64)
    if scenario == "difference":
        counts[0] = 1.2 * base
        counts[1] = 0.8 * base
    elif scenario == "one_missing":
        counts[0] = 0.0
        counts[1:] = size / (k - 1)
    return counts


def _fold_counts(size: int, k: int, scenario: str) -> np.ndarray:
    """Integer per-fold counts approximating the ideal pattern."""
    base = size // k
    counts = np.full(k, base, dtype=np.int64)
    if scenario == "difference":
        # +/-20% of the flat share, at least one point so small classes
        # still show the pattern; any rounding drift lands on the last fold
        delta = max(_round_half_up(0.2 * base), 1)
        counts[0] = base + delta
        counts[1] = base - delta
        counts[k - 1] = size - int(counts[: k - 1].sum())
    elif scenario == "one_missing":
        counts[0] = 0
        share, extra = divmod(size, k - 1)
        counts[1:] = share
        counts[1:1 + extra] += 1
    if counts.min() < 0:
        raise ValueError(f"class size {size} cannot realise scenario {scenario!r} with k={k}")
    assert counts.sum() == size
    return counts


def synthetic_counts(spec: SyntheticSpec) -> FoldClassCounts:
    """Exact count table for the spec's scenario; fold sizes are all n/k."""
    sizes = class_sizes(spec)
    pos = np.stack(
        [_ideal_pattern(float(c), spec.k, spec.scenario) for c in sizes], axis=1
    )
    fold_sizes = np.full(spec.k, spec.n // spec.k, dtype=np.int64)
    return FoldClassCounts.from_pos(pos, fold_sizes)


def synthetic_report(spec: SyntheticSpec) -> list[dict]:
    """One row per class: size plus its ld/rld/dcp scores for the scenario."""
    counts = synthetic_counts(spec)
    sizes = class_sizes(spec)
    ld_scores = ld(counts).per_class
    rld_scores = rld(counts).per_class
    dcp_scores = dcp(counts).per_class
    return [
        {
            "class_index": i,
            "class_size": int(sizes[i]),
            "ld": float(ld_scores[i]),
            "rld": float(rld_scores[i]),
            "dcp": float(dcp_scores[i]),
        }
        for i in range(spec.q)
    ]


def materialise(spec: SyntheticSpec) -> tuple[LabelMatrix, FoldAssignment]:
    """Real labels and folds whose counts equal the scenario pattern.

    Folds are contiguous point blocks; within fold j the first t[j, c]
    points are positive for class c. Intended for end-to-end tests at a
    desk-sized spec such as SyntheticSpec(n=10000, q=50, k=10, ...).
    """
    sizes = class_sizes(spec)
    per_fold = spec.n // spec.k
    pattern = np.stack([_fold_counts(int(c), spec.k, spec.scenario) for c in sizes], axis=1)
    if pattern.max() > per_fold:
        raise ValueError("fold size too small to hold the scenario counts")
    rows = []
    for j in range(spec.k):
        t = pattern[j]
        for offset in range(per_fold):
            rows.append(np.where(t > offset)[0])
    labels = LabelMatrix(spec.q, rows)
    assignment = np.repeat(np.arange(spec.k, dtype=np.int64), per_fold)
    return labels, FoldAssignment(spec.k, assignment)


# --- bibtex-profile surrogate ----------------------------------------------

#: size statistics of the MULAN bibtex tagging dataset
BIBTEX_N = 7395
BIBTEX_Q = 159
BIBTEX_DENSITY = 0.0151
#: nearest-rank anchors of the class-size distribution: (1-indexed rank, size)
BIBTEX_SIZE_ANCHORS = ((1, 51), (40, 61), (80, 82), (120, 130), (159, 1042))


def _surrogate_sizes() -> np.ndarray:
    """Sorted class sizes matching the bibtex anchors and total entry count."""
    target_nnz = round(BIBTEX_DENSITY * BIBTEX_N * BIBTEX_Q)
    sizes = np.zeros(BIBTEX_Q, dtype=np.int64)
    # log-linear through the body of the distribution
    for (r0, s0), (r1, s1) in zip(BIBTEX_SIZE_ANCHORS[:3], BIBTEX_SIZE_ANCHORS[1:4]):
        t = np.linspace(0.0, 1.0, r1 - r0 + 1)
        seg = np.exp(np.log(s0) + t * (np.log(s1) - np.log(s0)))
        sizes[r0 - 1:r1] = np.floor(seg + 0.5).astype(np.int64)
    # heavy but thin tail: most classes sit near the 75% anchor and a few
    # run up to the max; curvature tuned so the total lands on the density
    (r0, s0), (r1, s1) = BIBTEX_SIZE_ANCHORS[3], BIBTEX_SIZE_ANCHORS[4]
    t = np.linspace(0.0, 1.0, r1 - r0 + 1)
    body = int(sizes[: r0 - 1].sum())
    lo, hi = 1.0, 64.0
    for _ in range(60):
        gamma = 0.5 * (lo + hi)
        tail = np.floor(s0 + (s1 - s0) * t ** gamma + 0.5).astype(np.int64)
        if body + int(tail.sum()) > target_nnz:
            lo = gamma
        else:
            hi = gamma
    sizes[r0 - 1:] = tail
    for rank, size in BIBTEX_SIZE_ANCHORS:
        sizes[rank - 1] = size
    # close the residual exactly, nudging tail interiors within sorted order
    delta = target_nnz - int(sizes.sum())
    interior = list(range(r0, r1 - 1))  # 0-indexed, anchors excluded
    while delta:
        step = 1 if delta > 0 else -1
        moved = False
        for i in reversed(interior) if delta > 0 else interior:
            new = sizes[i] + step
            if sizes[i - 1] <= new <= sizes[i + 1]:
                sizes[i] = new
                delta -= step
                moved = True
                if not delta:
                    break
        assert moved, "size profile adjustment ran out of slack"
    return sizes


#: co-occurrence shape: the largest _COVER_CLASSES classes cover the tagged
#: points, and every other class draws its members from that cover, layered
#: _COVER_LAYERS deep so several narrow classes can share one point
_COVER_CLASSES = 6
_COVER_LAYERS = 8


def bibtex_surrogate(seed: int = 0) -> LabelMatrix:
    """Seeded sparse dataset with bibtex's shape: n=7395, q=159, density
    ~0.0151, class-size quantiles 51/61/82/130/1042 (nearest rank).

    Class sizes follow the anchored quantile curve exactly. Memberships are
    correlated the way tag data is: a handful of broad classes covers most
    tagged points, and every narrower class samples its members from the
    covered points, so labels co-occur heavily and single points carry up to
    a few dozen labels. Sampling classes independently instead would yield a
    dataset that is far easier to stratify than real tag collections.
    """
    rng = np.random.default_rng(seed)
    sizes = _surrogate_sizes()
    cover = range(BIBTEX_Q - _COVER_CLASSES, BIBTEX_Q)
    members: list[np.ndarray] = [np.empty(0, dtype=np.int64)] * BIBTEX_Q
    for c in cover:
        members[c] = rng.choice(BIBTEX_N, size=int(sizes[c]), replace=False)
    pool = np.concatenate([members[c] for c in cover] * _COVER_LAYERS)
    rng.shuffle(pool)
    cursor = 0
    for c in range(BIBTEX_Q - _COVER_CLASSES):
        want = int(sizes[c])
        chunk: list[int] = []
        seen: set[int] = set()
        while len(chunk) < want and cursor < len(pool):
            p = int(pool[cursor])
            cursor += 1
            if p not in seen:
                seen.add(p)
                chunk.append(p)
        while len(chunk) < want:
            # layered pool exhausted (cannot happen at the default shape,
            # kept for safety): top up with fresh points
            p = int(rng.integers(BIBTEX_N))
            if p not in seen:
                seen.add(p)
                chunk.append(p)
        members[c] = np.asarray(chunk, dtype=np.int64)
    points = np.concatenate(members)
    classes = np.repeat(np.arange(BIBTEX_Q, dtype=np.int64), sizes)
    order = np.lexsort((classes, points))
    indptr = np.zeros(BIBTEX_N + 1, dtype=np.int64)
    np.cumsum(np.bincount(points, minlength=BIBTEX_N), out=indptr[1:])
    return LabelMatrix.from_arrays(BIBTEX_Q, indptr, classes[order])
