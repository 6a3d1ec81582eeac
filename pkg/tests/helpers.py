"""Random instance builders and reference computations shared by the tests."""

from fractions import Fraction

import numpy as np

from stratkit.core import FoldAssignment, LabelMatrix


def random_labels(rng, n, q, density=0.15):
    """Sparse random label matrix with at least one positive entry."""
    rows = []
    for _ in range(n):
        m = int(rng.binomial(q, density))
        rows.append(np.sort(rng.choice(q, size=m, replace=False)))
    if not any(len(r) for r in rows):
        rows[0] = np.asarray([int(rng.integers(q))])
    return LabelMatrix(q, rows)


def random_assignment(rng, n, k):
    """Valid random fold assignment: every fold holds at least one point."""
    assignment = rng.integers(k, size=n)
    assignment[rng.permutation(n)[:k]] = np.arange(k)
    return FoldAssignment(k, assignment)


def fraction_apportionment(total, weights):
    """Largest-remainder apportionment in exact rational arithmetic.

    Floors the quotas, then hands leftover units to the largest fractional
    remainders, lower index first on ties. Written independently of the
    production code so the two can check each other.
    """
    wsum = sum(weights)
    quotas = [Fraction(total * w, wsum) for w in weights]
    base = [q.numerator // q.denominator for q in quotas]
    remainders = [q - b for q, b in zip(quotas, base)]
    order = sorted(range(len(weights)), key=lambda i: (-remainders[i], i))
    for i in order[: total - sum(base)]:
        base[i] += 1
    return base
