"""Two-sample testing and generative-set evaluation on pooled point sets.

The central quantity is the edge-count statistic of a k-fold spanning
graph: how far the within-set edge counts deviate from their exact
permutation-null moments. Coverage, nearest-neighbor matching distance,
and the Fréchet distance between fitted Gaussians ride along as
baselines, plus seeded experiment runners and a small CLI.
"""

from .ecd import (
    DEFAULT_ROUNDS,
    EcdReport,
    EdgeCounts,
    NullMoments,
    ecd,
    ecd_from_distances,
    ecd_statistic,
    ecd_subsampled,
    ecd_subsampled_from_distances,
    edge_counts,
    exhaustive_moments,
    null_moments,
    permutation_moments,
    permutation_samples,
)
from .errors import (
    AsymmetryError,
    DimensionMismatch,
    DisconnectedError,
    EcdkitError,
    EmptySet,
    GeneratedSetTooSmall,
    InputError,
    InvalidK,
    InvalidSpec,
    InvalidTrials,
    NegativeDistanceError,
    NoConvergence,
    NonFiniteInput,
    NonSquareError,
    NonzeroDiagonalError,
    NotPSD,
    NumericError,
    SchemaError,
    SingularCovariance,
    SizeMismatch,
    TooFewPoints,
    TooFewSamples,
)
from .experiments import (
    DistributionSpec,
    ExperimentRow,
    ExperimentTable,
    derive_seed,
    distribution_grid,
    sample,
    variance_sweep,
)
from .metricspace import (
    DistanceMatrix,
    FeatureSet,
    PooledLabels,
    cross_distances,
    load_distance_csv,
    load_feature_csv,
    pairwise_distances,
    validate_distance_matrix,
)
from .setmeasures import (
    GaussianSummary,
    MeasureResult,
    coverage,
    fit_gaussian,
    frechet_gaussian,
    measures_from_cross,
    measures_from_features,
    mmd,
)
from .spanning import DEFAULT_K, SpanningGraph, degree_statistic, kmst, mst

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_K",
    "DEFAULT_ROUNDS",
    "AsymmetryError",
    "DimensionMismatch",
    "DisconnectedError",
    "DistanceMatrix",
    "DistributionSpec",
    "EcdkitError",
    "EcdReport",
    "EdgeCounts",
    "EmptySet",
    "ExperimentRow",
    "ExperimentTable",
    "FeatureSet",
    "GaussianSummary",
    "GeneratedSetTooSmall",
    "InputError",
    "InvalidK",
    "InvalidSpec",
    "InvalidTrials",
    "MeasureResult",
    "NegativeDistanceError",
    "NoConvergence",
    "NonFiniteInput",
    "NonSquareError",
    "NonzeroDiagonalError",
    "NotPSD",
    "NullMoments",
    "NumericError",
    "PooledLabels",
    "SchemaError",
    "SingularCovariance",
    "SizeMismatch",
    "SpanningGraph",
    "TooFewPoints",
    "TooFewSamples",
    "coverage",
    "cross_distances",
    "degree_statistic",
    "derive_seed",
    "distribution_grid",
    "ecd",
    "ecd_from_distances",
    "ecd_statistic",
    "ecd_subsampled",
    "ecd_subsampled_from_distances",
    "edge_counts",
    "exhaustive_moments",
    "fit_gaussian",
    "frechet_gaussian",
    "kmst",
    "load_distance_csv",
    "load_feature_csv",
    "measures_from_cross",
    "measures_from_features",
    "mmd",
    "mst",
    "null_moments",
    "pairwise_distances",
    "permutation_moments",
    "permutation_samples",
    "sample",
    "validate_distance_matrix",
    "variance_sweep",
]
