"""Stratified cross-validation splits for sparse multilabel data."""

from .core import (
    FoldAssignment,
    FoldClassCounts,
    LabelMatrix,
    build_counts,
    counts_after_move,
)
from .io import (
    DatasetStats,
    dataset_stats,
    read_folds,
    read_labels,
    write_folds,
    write_labels,
)
from .measures import (
    MeasureReport,
    OPTIMISABLE,
    PER_CLASS_MEASURES,
    REPORTS,
    dcp,
    ed,
    evaluate_all,
    ld,
    per_class_score,
    rld,
)
from .splitters import (
    METHODS,
    UNAVAILABLE_METHODS,
    OptimisationTrace,
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
from .synthetic import (
    SCENARIOS,
    SyntheticSpec,
    bibtex_surrogate,
    class_sizes,
    materialise,
    synthetic_counts,
    synthetic_report,
)

__version__ = "0.1.0"

__all__ = [
    "DatasetStats",
    "FoldAssignment",
    "FoldClassCounts",
    "LabelMatrix",
    "MeasureReport",
    "METHODS",
    "OPTIMISABLE",
    "OptimisationTrace",
    "PER_CLASS_MEASURES",
    "REPORTS",
    "SCENARIOS",
    "SplitConfig",
    "SyntheticSpec",
    "UNAVAILABLE_METHODS",
    "balance",
    "bibtex_surrogate",
    "build_counts",
    "class_sizes",
    "counts_after_move",
    "dataset_stats",
    "dcp",
    "ed",
    "evaluate_all",
    "iterative_stratification",
    "largest_remainder_targets",
    "ld",
    "make_split",
    "materialise",
    "optisplit",
    "per_class_score",
    "pmbsrs_split",
    "random_split",
    "read_folds",
    "read_labels",
    "rld",
    "synthetic_counts",
    "synthetic_report",
    "train_test_split",
    "write_folds",
    "write_labels",
    "__version__",
]
