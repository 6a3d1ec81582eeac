"""Splitters: validity, determinism, apportionment, balance, optimisation."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import fraction_apportionment, random_assignment, random_labels
from stratkit.core import FoldAssignment, LabelMatrix, build_counts
from stratkit.measures import dcp, rld
from stratkit.splitters import (
    METHODS,
    SplitConfig,
    balance,
    iterative_stratification,
    largest_remainder_targets,
    make_split,
    optisplit,
    pmbsrs_split,
    random_split,
    train_test_split,
)


class TestSplitConfig:
    def test_rejects_unavailable_methods_with_a_pointer(self):
        for method in ("ss", "sois"):
            with pytest.raises(ValueError, match="not implemented"):
                SplitConfig(method=method)

    def test_rejects_nonsense(self):
        with pytest.raises(ValueError, match="unknown method"):
            SplitConfig(method="magic")
        with pytest.raises(ValueError, match="k must be"):
            SplitConfig(method="random", k=1)
        with pytest.raises(ValueError, match="max_epochs"):
            SplitConfig(method="optisplit", max_epochs=0)
        with pytest.raises(ValueError, match="optimise_measure"):
            SplitConfig(method="optisplit", optimise_measure="ld")


class TestEverySplitter:
    @pytest.mark.parametrize("method", METHODS)
    def test_output_partitions_all_points(self, method):
        rng = np.random.default_rng(7)
        for _ in range(5):
            n = int(rng.integers(12, 60))
            q = int(rng.integers(1, 6))
            k = int(rng.choice([2, 3, 5]))
            labels = random_labels(rng, n, q)
            config = SplitConfig(method=method, k=k, seed=int(rng.integers(1000)))
            folds, _ = make_split(labels, config)
            sizes = np.bincount(folds.assignment, minlength=k)
            assert folds.n == n
            assert sizes.sum() == n and sizes.min() >= 1

    @pytest.mark.parametrize("method", METHODS)
    def test_same_seed_gives_bit_identical_folds(self, method):
        rng = np.random.default_rng(8)
        labels = random_labels(rng, 60, 6)
        config = SplitConfig(method=method, k=3, seed=123)
        a, _ = make_split(labels, config)
        b, _ = make_split(labels, config)
        assert np.array_equal(a.assignment, b.assignment)

    def test_trace_is_only_produced_by_the_optimiser(self):
        rng = np.random.default_rng(9)
        labels = random_labels(rng, 30, 4)
        for method in ("random", "is", "pmbsrs"):
            _, trace = make_split(labels, SplitConfig(method=method, k=2))
            assert trace is None
        _, trace = make_split(labels, SplitConfig(method="optisplit", k=2))
        assert trace is not None


class TestRandomSplit:
    def test_chops_into_near_equal_blocks(self):
        labels = LabelMatrix(1, [[0]] + [[]] * 7)
        assert sorted(random_split(labels, 2, 0).fold_sizes()) == [4, 4]
        labels7 = LabelMatrix(1, [[0]] + [[]] * 6)
        assert sorted(random_split(labels7, 2, 0).fold_sizes()) == [3, 4]

    def test_rejects_k_larger_than_n(self):
        labels = LabelMatrix(1, [[0], []])
        with pytest.raises(ValueError, match="k must be"):
            random_split(labels, 3, 0)


class TestIterativeStratification:
    def test_two_point_class_always_lands_in_both_folds(self):
        labels = LabelMatrix(1, [[0], [0], [], []])
        for seed in range(20):
            folds = iterative_stratification(labels, 2, seed)
            counts = build_counts(labels, folds)
            assert list(counts.pos[:, 0]) == [1, 1]

    def test_label_free_points_fill_capacity_evenly(self):
        labels = LabelMatrix(1, [[]] * 8)
        folds = iterative_stratification(labels, 2, 3)
        assert sorted(folds.fold_sizes()) == [4, 4]

    def test_every_class_total_is_conserved(self):
        rng = np.random.default_rng(10)
        labels = random_labels(rng, 70, 8)
        folds = iterative_stratification(labels, 5, 2)
        counts = build_counts(labels, folds)
        assert np.array_equal(counts.pos.sum(axis=0), labels.class_sizes)


class TestPmbsrs:
    def test_each_stratum_deals_evenly_to_all_folds(self):
        rng = np.random.default_rng(9)
        labels = random_labels(rng, 53, 6)
        k = 4
        folds = pmbsrs_split(labels, k, 11)
        # reconstruct the documented strata: (score, index) order cut into
        # k contiguous chunks, the first n % k chunks one point bigger
        scores = np.zeros(labels.n)
        logf = np.zeros(labels.q)
        nonzero = labels.class_sizes > 0
        logf[nonzero] = np.log(labels.class_sizes[nonzero] / labels.n)
        for p in range(labels.n):
            scores[p] = logf[labels.row(p)].sum()
        order = np.lexsort((np.arange(labels.n), scores))
        base, extra = divmod(labels.n, k)
        start = 0
        for size in [base + 1] * extra + [base] * (k - extra):
            members = order[start:start + size]
            start += size
            per_fold = np.bincount(folds.assignment[members], minlength=k)
            assert per_fold.max() - per_fold.min() <= 1

    def test_label_free_dataset_deals_round_robin(self):
        labels = LabelMatrix(1, [[]] * 8)
        folds = pmbsrs_split(labels, 2, 0)
        # degenerate scores keep input order: strata are the two halves
        for half in (folds.assignment[:4], folds.assignment[4:]):
            assert sorted(np.bincount(half, minlength=2)) == [2, 2]

    def test_fold_sizes_stay_within_one_point(self):
        rng = np.random.default_rng(21)
        labels = random_labels(rng, 47, 5)
        sizes = pmbsrs_split(labels, 4, 5).fold_sizes()
        assert sizes.max() - sizes.min() <= 1


class TestApportionment:
    @given(
        total=st.integers(0, 500),
        weights=st.lists(st.integers(0, 50), min_size=1, max_size=12).filter(
            lambda w: sum(w) > 0
        ),
    )
    def test_matches_exact_fraction_apportionment(self, total, weights):
        got = largest_remainder_targets(total, np.array(weights, dtype=np.int64))
        assert got.sum() == total
        assert np.array_equal(got, fraction_apportionment(total, weights))

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            largest_remainder_targets(-1, np.array([1, 1]))
        with pytest.raises(ValueError):
            largest_remainder_targets(5, np.array([0, 0]))

    def test_remainder_ties_go_to_the_lower_index(self):
        assert list(largest_remainder_targets(3, np.array([1, 1]))) == [2, 1]


class TestBalance:
    def test_counts_hit_targets_and_fold_sizes_are_preserved(self):
        rng = np.random.default_rng(13)
        done = 0
        while done < 40:
            n = int(rng.integers(12, 90))
            q = int(rng.integers(1, 8))
            k = int(rng.choice([2, 3, 5]))
            labels = random_labels(rng, n, q)
            folds = random_assignment(rng, n, k)
            counts = build_counts(labels, folds)
            retained = counts.retained_classes()
            if retained.size == 0:
                continue
            cls = int(rng.choice(retained))
            sizes_before = counts.fold_sizes.copy()
            assignment_before = folds.assignment.copy()
            new_folds, new_counts = balance(labels, counts, folds, cls, int(rng.integers(1 << 30)))
            assert np.array_equal(new_counts.fold_sizes, sizes_before)
            total = int(counts.total_pos[cls])
            if total <= n - total:
                want = fraction_apportionment(total, sizes_before.tolist())
                assert list(new_counts.pos[:, cls]) == want
            else:
                want = fraction_apportionment(n - total, sizes_before.tolist())
                assert list(sizes_before - new_counts.pos[:, cls]) == want
            rebuilt = build_counts(labels, new_folds)
            assert np.array_equal(rebuilt.pos, new_counts.pos)
            # inputs are never mutated
            assert np.array_equal(folds.assignment, assignment_before)
            assert np.array_equal(counts.fold_sizes, sizes_before)
            done += 1

    def test_already_on_target_is_a_no_op(self):
        labels = LabelMatrix(1, [[0], [], [0], []])
        folds = FoldAssignment(2, np.array([0, 0, 1, 1]))
        counts = build_counts(labels, folds)
        new_folds, new_counts = balance(labels, counts, folds, 0, 0)
        assert np.array_equal(new_folds.assignment, folds.assignment)
        assert np.array_equal(new_counts.pos, counts.pos)

    def test_positive_majority_balances_the_negatives(self):
        labels = LabelMatrix(1, [[]] * 2 + [[0]] * 6)
        folds = FoldAssignment(2, np.array([0, 0, 0, 0, 1, 1, 1, 1]))
        counts = build_counts(labels, folds)
        new_folds, new_counts = balance(labels, counts, folds, 0, 1)
        negatives = new_counts.fold_sizes - new_counts.pos[:, 0]
        assert list(negatives) == [1, 1]
        assert list(new_counts.fold_sizes) == [4, 4]

    def test_rejects_excluded_or_unknown_classes(self):
        labels = LabelMatrix(2, [[0], [0], [0], [0]])
        folds = FoldAssignment(2, np.array([0, 0, 1, 1]))
        counts = build_counts(labels, folds)
        with pytest.raises(ValueError, match="excluded"):
            balance(labels, counts, folds, 0, 0)  # class present in every point
        with pytest.raises(ValueError, match="out of range"):
            balance(labels, counts, folds, 7, 0)


class TestOptisplit:
    def optimisation_run(self, rng):
        n = int(rng.integers(20, 160))
        q = int(rng.integers(1, 15))
        k = int(rng.choice([2, 3, 5]))
        labels = random_labels(rng, n, q)
        config = SplitConfig(
            method="optisplit",
            k=k,
            seed=int(rng.integers(1 << 30)),
            optimise_measure=str(rng.choice(["rld", "dcp"])),
        )
        return labels, optisplit(labels, config)

    def test_loss_sequences_are_monotone(self):
        rng = np.random.default_rng(17)
        for _ in range(12):
            labels, (folds, trace) = self.optimisation_run(rng)
            accepted = np.asarray(trace.accepted_losses)
            if accepted.size > 1:
                assert np.all(np.diff(accepted) < 0)
            epoch_seq = np.asarray((trace.initial_loss,) + trace.epoch_losses)
            assert np.all(np.diff(epoch_seq) <= 1e-12)
            assert epoch_seq[-1] <= trace.initial_loss + 1e-12
            assert trace.termination in ("converged", "max_epochs")
            sizes = folds.fold_sizes()
            assert sizes.sum() == labels.n and sizes.min() >= 1

    def test_exchange_moves_keep_the_initial_fold_sizes(self):
        rng = np.random.default_rng(18)
        labels = random_labels(rng, 90, 8)
        init = random_assignment(rng, 90, 3)
        config = SplitConfig(method="optisplit", k=3, seed=4, init=init)
        folds, _ = optisplit(labels, config)
        assert np.array_equal(folds.fold_sizes(), init.fold_sizes())

    def test_already_optimal_input_is_returned_unchanged(self):
        # both classes exactly proportional: loss 0, nothing to improve
        labels = LabelMatrix(2, [[0], [0], [1], [], [], []] * 2)
        init = FoldAssignment(2, np.array([0] * 6 + [1] * 6))
        folds, trace = optisplit(labels, SplitConfig(method="optisplit", k=2, init=init))
        assert np.array_equal(folds.assignment, init.assignment)
        assert trace.termination == "converged"
        assert trace.accepted_per_epoch == (0,)
        assert trace.accepted_losses == ()
        assert trace.initial_loss == 0.0

    def test_concentrated_single_class_reaches_exactly_zero(self):
        labels = LabelMatrix(1, [[0]] * 4 + [[]] * 4)
        init = FoldAssignment(2, np.array([0, 0, 0, 0, 1, 1, 1, 1]))
        for seed in range(5):
            config = SplitConfig(method="optisplit", k=2, seed=seed, init=init)
            folds, trace = optisplit(labels, config)
            assert rld(build_counts(labels, folds)).aggregate == 0.0
            assert trace.accepted_losses[-1] == 0.0

    def test_initial_loss_is_the_sum_of_per_class_scores(self):
        rng = np.random.default_rng(19)
        labels = random_labels(rng, 60, 6)
        init = random_assignment(rng, 60, 3)
        _, trace = optisplit(labels, SplitConfig(method="optisplit", k=3, init=init))
        want = float(rld(build_counts(labels, init)).per_class.sum())
        assert math.isclose(trace.initial_loss, want, rel_tol=1e-9)

    def test_dcp_objective_does_not_worsen_dcp(self):
        rng = np.random.default_rng(20)
        labels = random_labels(rng, 100, 7)
        init = random_split(labels, 4, 5)
        config = SplitConfig(
            method="optisplit", k=4, seed=5, optimise_measure="dcp", init=init
        )
        folds, _ = optisplit(labels, config)
        before = dcp(build_counts(labels, init)).aggregate
        after = dcp(build_counts(labels, folds)).aggregate
        assert after <= before + 1e-12

    def test_rejects_an_instance_with_nothing_to_optimise(self):
        labels = LabelMatrix(1, [[0], [0]])  # the only class is all-positive
        with pytest.raises(ValueError):
            optisplit(labels, SplitConfig(method="optisplit", k=2))


class TestTrainTestSplit:
    def test_partitions_with_the_last_fold_as_test(self):
        rng = np.random.default_rng(22)
        labels = random_labels(rng, 50, 5)
        train, test = train_test_split(labels, 0.2, method="random", seed=1)
        assert len(test) == 10 and len(train) == 40
        combined = np.sort(np.concatenate([train, test]))
        assert np.array_equal(combined, np.arange(50))

    def test_half_split(self):
        rng = np.random.default_rng(23)
        labels = random_labels(rng, 40, 4)
        train, test = train_test_split(labels, 0.5, method="random", seed=2)
        assert len(train) == len(test) == 20

    def test_rejects_degenerate_fractions(self):
        labels = LabelMatrix(1, [[0], []])
        with pytest.raises(ValueError):
            train_test_split(labels, 0.0)
        with pytest.raises(ValueError):
            train_test_split(labels, 0.9)  # rounds to a single fold
