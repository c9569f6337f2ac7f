"""Anytime comparison sorting.

Sorting algorithms that can be interrupted after any comparison and
asked for their current best estimate of the sorted order, plus the
metrics (Kendall tau distance, comparison lower bound) and a seeded
benchmark harness to compare them.
"""

from .estimators import (
    delta_scores,
    estimate_from_scores,
    exact_average_heights,
    info_scores,
    linear_extensions,
    rho_scores,
)
from .metrics import (
    DEFAULT_LEVELS,
    PerformanceProfile,
    QuantileBands,
    itlb,
    kendall_tau,
    normalized_tau,
    profile,
    quantile_bands,
    relative_overhead,
)
from .poset import ContradictionError, PartialOrder, new_poset
from .sorters import (
    ALGORITHMS,
    ESTIMATORS,
    ComparisonTrace,
    HiddenList,
    SorterSpec,
    asort,
    comparison_log,
    corsort,
    corsort_next_pair,
    count_comparisons,
    ford_johnson,
    heapsort_anytime,
    mergesort_bfs,
    mergesort_dfs,
    quicksort_anytime,
    run,
    tau_profile,
)
from .bench import (
    ExperimentConfig,
    ResultRow,
    emit_csv,
    emit_plot,
    generate_permutation,
    load_csv,
    run_profile_experiment,
    run_termination_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "ESTIMATORS",
    "DEFAULT_LEVELS",
    "ComparisonTrace",
    "ContradictionError",
    "ExperimentConfig",
    "HiddenList",
    "PartialOrder",
    "PerformanceProfile",
    "QuantileBands",
    "ResultRow",
    "SorterSpec",
    "asort",
    "comparison_log",
    "corsort",
    "corsort_next_pair",
    "count_comparisons",
    "delta_scores",
    "emit_csv",
    "emit_plot",
    "estimate_from_scores",
    "exact_average_heights",
    "ford_johnson",
    "generate_permutation",
    "heapsort_anytime",
    "info_scores",
    "itlb",
    "kendall_tau",
    "linear_extensions",
    "load_csv",
    "mergesort_bfs",
    "mergesort_dfs",
    "new_poset",
    "normalized_tau",
    "profile",
    "quantile_bands",
    "quicksort_anytime",
    "relative_overhead",
    "rho_scores",
    "run",
    "run_profile_experiment",
    "run_termination_experiment",
    "tau_profile",
]
