"""Fuzzy c-means clustering with a linguistic, self-tuning exponent matrix."""

from .cluster import (
    ClusterConfig,
    ClusterResult,
    ExponentState,
    InitializationError,
    exponent_fuzzy_set,
    objective,
    pairwise_distances,
    relative_distances,
    normalize_relative,
    result_document,
    run_fcm,
    run_hamfcm,
    update_centroids_hamfcm,
    update_exponent_state,
    update_membership_hamfcm,
)
from .estimators import FuzzyCMeans, HedgeAlgebraFCM
from .evaluation import (
    BenchmarkReport,
    LabeledDataset,
    clustering_accuracy,
    load_dataset,
    minmax_normalize,
    run_benchmark,
    write_report,
)
from .hedges import (
    HedgeParams,
    LinguisticTerm,
    TermSemantics,
    apply_error_update,
    confidence,
    enumerate_terms,
    fuzziness_measure,
    inverse_quantify,
    mapping_error,
    normalize_params,
    quantify,
)
from .imaging import downscale, load_image, save_image, segment, upscale_nearest

__version__ = "0.1.0"

__all__ = [
    "BenchmarkReport",
    "ClusterConfig",
    "ClusterResult",
    "ExponentState",
    "FuzzyCMeans",
    "HedgeAlgebraFCM",
    "HedgeParams",
    "InitializationError",
    "LabeledDataset",
    "LinguisticTerm",
    "TermSemantics",
    "apply_error_update",
    "clustering_accuracy",
    "confidence",
    "downscale",
    "enumerate_terms",
    "exponent_fuzzy_set",
    "fuzziness_measure",
    "inverse_quantify",
    "load_dataset",
    "load_image",
    "mapping_error",
    "minmax_normalize",
    "normalize_params",
    "normalize_relative",
    "objective",
    "pairwise_distances",
    "quantify",
    "relative_distances",
    "result_document",
    "run_benchmark",
    "run_fcm",
    "run_hamfcm",
    "save_image",
    "segment",
    "update_centroids_hamfcm",
    "update_exponent_state",
    "update_membership_hamfcm",
    "upscale_nearest",
    "write_report",
]
