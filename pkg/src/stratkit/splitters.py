"""Fold-assignment generators and the hill-climbing split optimiser.

Methods:

* ``random``    -- seeded permutation chopped into k near-equal blocks.
* ``is``        -- iterative stratification: classes processed from rarest
  to most common, each point steered to the fold that most wants it.
* ``pmbsrs``    -- points scored by the product of their labels' relative
  frequencies, sorted, cut into k strata, and dealt from each stratum.
* ``optisplit`` -- greedy optimisation of a per-class measure (rld or dcp):
  per epoch, classes are visited from worst to best score; each visit
  rebalances one class's per-fold counts to apportioned targets and the
  change is kept only if the global loss strictly improves.

Every generator is deterministic given (labels, k, seed). ``seed``
arguments accept an int or a ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import FoldAssignment, FoldClassCounts, LabelMatrix, build_counts
from .measures import OPTIMISABLE

METHODS = ("random", "is", "pmbsrs", "optisplit")

#: documented but deliberately unavailable methods (second-order iterative
#: stratification needs pairwise label machinery out of scope here; the
#: stratified-sampling optimiser needs data-specific parameters)
UNAVAILABLE_METHODS = ("sois", "ss")


@dataclass(frozen=True)
class SplitConfig:
    """Method choice plus everything needed to reproduce a split."""

    method: str
    k: int = 5
    seed: int = 0
    optimise_measure: str = "rld"  # optisplit only
    max_epochs: int = 20           # optisplit only
    init: FoldAssignment | None = None  # optisplit only; None means random

    def __post_init__(self):
        if self.method not in METHODS:
            if self.method in UNAVAILABLE_METHODS:
                raise ValueError(f"method {self.method!r} not implemented; see docs")
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.optimise_measure not in OPTIMISABLE:
            raise ValueError(
                f"optimise_measure must be one of {tuple(OPTIMISABLE)}, got {self.optimise_measure!r}"
            )


@dataclass(frozen=True)
class OptimisationTrace:
    """What the optimiser did: losses, accepted moves, skips, termination."""

    initial_loss: float
    epoch_losses: tuple[float, ...]     # global loss at the end of each epoch
    accepted_losses: tuple[float, ...]  # global loss after each kept rebalance
    accepted_per_epoch: tuple[int, ...]
    skips: int                          # undone or no-op rebalance attempts
    balance_calls: int
    termination: str                    # "converged" or "max_epochs"


def _chop_sizes(n: int, k: int) -> np.ndarray:
    """Near-equal block sizes; the first n % k blocks carry the extra point."""
    base, extra = divmod(n, k)
    sizes = np.full(k, base, dtype=np.int64)
    sizes[:extra] += 1
    return sizes


def random_split(labels: LabelMatrix, k: int, seed) -> FoldAssignment:
    """Uniformly random permutation chopped into k near-equal folds."""
    n = labels.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    assignment[perm] = np.repeat(np.arange(k, dtype=np.int64), _chop_sizes(n, k))
    return FoldAssignment(k, assignment)


def iterative_stratification(labels: LabelMatrix, k: int, seed) -> FoldAssignment:
    """Iterative stratification over classes, rarest first.

    Real-valued desired counters start at size/k per (class, fold) and n/k
    per fold, and are decremented as points land. Each round picks the class
    with the fewest unassigned positives (ties seeded-random), then sends
    each of its unassigned points to the fold wanting that class most,
    breaking ties by overall fold capacity and then randomly. Points with no
    labels are placed last, into the folds with the largest remaining
    capacity.
    """
    n, q = labels.n, labels.q
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    assignment = np.full(n, -1, dtype=np.int64)
    fold_desire = np.full(k, n / k)
    label_desire = np.repeat(labels.class_sizes[:, None] / k, k, axis=1)
    remaining = labels.class_sizes.copy()

    def pick(values: np.ndarray, candidates: np.ndarray) -> int:
        best = values[candidates].max()
        tied = candidates[values[candidates] == best]
        return int(tied[0]) if tied.size == 1 else int(rng.choice(tied))

    while True:
        active = np.where(remaining > 0)[0]
        if active.size == 0:
            break
        fewest = remaining[active].min()
        tied = active[remaining[active] == fewest]
        cls = int(tied[0]) if tied.size == 1 else int(rng.choice(tied))
        for p in labels.points_of_class(cls):
            if assignment[p] >= 0:
                continue
            want = label_desire[cls]
            best = want.max()
            folds = np.where(want == best)[0]
            j = folds[0] if folds.size == 1 else pick(fold_desire, folds)
            j = int(j)
            assignment[p] = j
            labs = labels.row(p)
            label_desire[labs, j] -= 1.0
            fold_desire[j] -= 1.0
            remaining[labs] -= 1

    for p in np.where(assignment < 0)[0]:
        j = pick(fold_desire, np.arange(k))
        assignment[p] = j
        fold_desire[j] -= 1.0
    return FoldAssignment(k, assignment)


def pmbsrs_split(labels: LabelMatrix, k: int, seed) -> FoldAssignment:
    """Stratified random sampling over label-rarity scores.

    Each point is scored by the product of its positive labels' relative
    frequencies, computed as a sum of logs to stay finite on sparse data
    (label-free points keep the empty-product score 0). Points are sorted by
    (score, index), cut into k contiguous strata, and each stratum's points
    are shuffled and dealt round-robin so every fold draws a near-equal
    share of every stratum.
    """
    n = labels.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    scores = np.zeros(n)
    if labels.nnz:
        point_of_entry = np.repeat(np.arange(n, dtype=np.int64), np.diff(labels._indptr))
        np.add.at(scores, point_of_entry, np.log(labels.class_sizes[labels._indices] / n))
    order = np.lexsort((np.arange(n), scores))
    assignment = np.empty(n, dtype=np.int64)
    cursor = 0
    start = 0
    for size in _chop_sizes(n, k):
        stratum = order[start:start + size].copy()
        start += size
        rng.shuffle(stratum)
        # the deal cursor rolls across strata so tiny strata cannot pile
        # onto the low-index folds
        assignment[stratum] = (cursor + np.arange(size, dtype=np.int64)) % k
        cursor = (cursor + size) % k
    return FoldAssignment(k, assignment)


def largest_remainder_targets(total: int, weights: np.ndarray) -> np.ndarray:
    """Apportion ``total`` units across bins proportional to ``weights``.

    Floors the real quotas, then hands the leftover units to the largest
    fractional remainders; remainder ties go to the lower bin index.
    """
    weights = np.asarray(weights, dtype=np.float64)
    wsum = weights.sum()
    if total < 0 or wsum <= 0:
        raise ValueError("need a non-negative total and positive weights")
    quotas = total * weights / wsum
    base = np.floor(quotas).astype(np.int64)
    leftover = int(total - base.sum())
    if leftover:
        order = np.argsort(-(quotas - base), kind="stable")
        base[order[:leftover]] += 1
    return base


def _apply_moves(labels, assignment, pos, fold_sizes, batches, invert=False):
    for src, dst, pts in reversed(batches) if invert else batches:
        if invert:
            src, dst = dst, src
        labs = labels.concat_rows(pts)
        np.subtract.at(pos[src], labs, 1)
        np.add.at(pos[dst], labs, 1)
        fold_sizes[src] -= len(pts)
        fold_sizes[dst] += len(pts)
        assignment[pts] = dst


def _balance_inplace(labels, assignment, pos, fold_sizes, cls, rng):
    """Exchange points of one class between folds until counts hit targets.

    Targets are the largest-remainder apportionment of the class's positive
    count proportional to the current fold sizes. When the class has more
    positives than negatives, its negative points are balanced instead.
    Surplus folds give up uniformly random members, and every received point
    is paid for with a uniformly random non-member sent back, so fold sizes
    are preserved exactly. Returns the applied move batches (src, dst,
    points) so the caller can undo them.
    """
    k = len(fold_sizes)
    pts = labels.points_of_class(cls)
    in_set = np.zeros(labels.n, dtype=bool)
    in_set[pts] = True
    if pts.size > labels.n - pts.size:
        in_set = ~in_set
        pts = np.where(in_set)[0]
    targets = largest_remainder_targets(pts.size, fold_sizes)
    member_folds = assignment[pts]
    have = np.bincount(member_folds, minlength=k)
    delta = have - targets
    if not delta.any():
        return []
    outgoing = []
    for j in range(k):
        if delta[j] > 0:
            candidates = pts[member_folds == j]
            chosen = rng.choice(candidates, size=int(delta[j]), replace=False)
            outgoing.append((j, np.sort(chosen)))
    batches = []
    src_iter = iter(outgoing)
    src, available = next(src_iter)
    taken = 0
    for dst in range(k):
        need = int(-delta[dst]) if delta[dst] < 0 else 0
        if not need:
            continue
        # a deficit fold always holds enough non-members to pay with: its
        # target never exceeds its size because the set is the minority
        payback = rng.choice(
            np.where((assignment == dst) & ~in_set)[0], size=need, replace=False
        )
        paid = 0
        while need:
            if taken == len(available):
                src, available = next(src_iter)
                taken = 0
            grab = min(need, len(available) - taken)
            batches.append((src, dst, available[taken:taken + grab]))
            batches.append((dst, src, payback[paid:paid + grab]))
            taken += grab
            paid += grab
            need -= grab
    _apply_moves(labels, assignment, pos, fold_sizes, batches)
    return batches


def balance(
    labels: LabelMatrix,
    counts: FoldClassCounts,
    folds: FoldAssignment,
    cls: int,
    seed,
) -> tuple[FoldAssignment, FoldClassCounts]:
    """Rebalance one class's per-fold counts to apportioned targets.

    Returns the updated assignment and counts; the inputs are not mutated.
    No-op when the class is already on target.
    """
    if labels.n != folds.n or labels.n != counts.n_total or labels.q != counts.q:
        raise ValueError("labels, counts and folds must describe the same data")
    if folds.k != counts.k:
        raise ValueError("counts and folds disagree on k")
    if not (0 <= cls < counts.q):
        raise ValueError(f"class index {cls} out of range")
    if cls in counts.excluded_classes:
        raise ValueError(f"class {cls} is excluded (no positives or no negatives)")
    rng = np.random.default_rng(seed)
    assignment = folds.assignment.copy()
    pos = counts.pos.copy()
    fold_sizes = counts.fold_sizes.copy()
    _balance_inplace(labels, assignment, pos, fold_sizes, cls, rng)
    return FoldAssignment(folds.k, assignment), FoldClassCounts.from_pos(pos, fold_sizes)


def optisplit(labels: LabelMatrix, config: SplitConfig) -> tuple[FoldAssignment, OptimisationTrace]:
    """Greedy hill-climbing optimisation of a per-class split measure.

    Starts from ``config.init`` (or a seeded random split), then repeats for
    up to ``max_epochs`` epochs: score every retained class, order classes
    worst-first, and try to rebalance each one; a rebalance is kept only if
    the global loss (sum of per-class scores) strictly improves, otherwise
    it is undone. Stops early once an epoch accepts nothing. The points a
    rebalance exchanges carry other classes too, so other scores shift and
    a skipped class may succeed in a later epoch.
    """
    n = labels.n
    k = config.k
    if k > n:
        raise ValueError(f"k must be <= {n}, got {k}")
    rng = np.random.default_rng(config.seed)
    if config.init is not None:
        if config.init.n != n:
            raise ValueError("init assignment length does not match labels")
        if config.init.k != k:
            raise ValueError("init assignment k does not match config")
        assignment = config.init.assignment.copy()
    else:
        assignment = random_split(labels, k, rng).assignment.copy()

    counts = build_counts(labels, FoldAssignment(k, assignment))
    retained = counts.retained_classes()
    if retained.size == 0:
        raise ValueError("no retained classes to optimise")
    score_cols = OPTIMISABLE[config.optimise_measure]
    pos = counts.pos.copy()
    fold_sizes = counts.fold_sizes.copy()
    total_pos = counts.total_pos

    loss_vec = score_cols(pos, fold_sizes, total_pos, n, retained)
    current = float(loss_vec.sum())
    initial_loss = current
    epoch_losses: list[float] = []
    accepted_losses: list[float] = []
    accepted_per_epoch: list[int] = []
    skips = 0
    balance_calls = 0
    termination = "max_epochs"

    for _epoch in range(config.max_epochs):
        # incremental bookkeeping is cheap but drift would be silent: rebuild
        # from scratch once per epoch and insist on exact agreement
        fresh = build_counts(labels, FoldAssignment(k, assignment))
        assert np.array_equal(fresh.pos, pos) and np.array_equal(fresh.fold_sizes, fold_sizes)
        resynced = float(score_cols(pos, fold_sizes, total_pos, n, retained).sum())
        assert math.isclose(resynced, current, rel_tol=0.0, abs_tol=1e-9)

        order = retained[np.argsort(-loss_vec, kind="stable")]
        accepted = 0
        for cls in order:
            batches = _balance_inplace(labels, assignment, pos, fold_sizes, int(cls), rng)
            balance_calls += 1
            if not batches:
                skips += 1
                continue
            if fold_sizes.min() == 0:
                # a drained fold makes scores meaningless; treat as a failed move
                _apply_moves(labels, assignment, pos, fold_sizes, batches, invert=True)
                skips += 1
                continue
            candidate_vec = score_cols(pos, fold_sizes, total_pos, n, retained)
            candidate = float(candidate_vec.sum())
            if not candidate < current:
                _apply_moves(labels, assignment, pos, fold_sizes, batches, invert=True)
                skips += 1
                continue
            current = candidate
            loss_vec = candidate_vec
            accepted += 1
            accepted_losses.append(current)
        epoch_losses.append(current)
        accepted_per_epoch.append(accepted)
        if accepted == 0:
            termination = "converged"
            break

    trace = OptimisationTrace(
        initial_loss=initial_loss,
        epoch_losses=tuple(epoch_losses),
        accepted_losses=tuple(accepted_losses),
        accepted_per_epoch=tuple(accepted_per_epoch),
        skips=skips,
        balance_calls=balance_calls,
        termination=termination,
    )
    return FoldAssignment(k, assignment), trace


def make_split(labels: LabelMatrix, config: SplitConfig) -> tuple[FoldAssignment, OptimisationTrace | None]:
    """Dispatch on ``config.method``; the trace is None except for optisplit."""
    if config.method == "random":
        return random_split(labels, config.k, config.seed), None
    if config.method == "is":
        return iterative_stratification(labels, config.k, config.seed), None
    if config.method == "pmbsrs":
        return pmbsrs_split(labels, config.k, config.seed), None
    return optisplit(labels, config)


def train_test_split(
    labels: LabelMatrix,
    test_fraction: float,
    method: str = "optisplit",
    seed=0,
) -> tuple[np.ndarray, np.ndarray]:
    """Single train/test partition derived from a cross-validation split.

    Generates round(1/test_fraction) folds with ``method`` and returns the
    last fold as the test set, the union of the rest as the training set.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    k = round(1.0 / test_fraction)
    if k < 2:
        raise ValueError(f"test_fraction {test_fraction} is degenerate (needs >= 2 folds)")
    folds, _ = make_split(labels, SplitConfig(method=method, k=k, seed=seed))
    test = np.where(folds.assignment == k - 1)[0]
    train = np.where(folds.assignment != k - 1)[0]
    return train, test
