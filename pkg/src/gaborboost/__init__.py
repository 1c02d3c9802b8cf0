"""Gabor wavelet selection for face recognition via boosting.

The pipeline: extract Gabor-magnitude feature vectors from images, build a
two-class training set of intra/extra-identity feature differences, select
discriminative wavelets with boosted threshold stumps (sequentially, or with
the parallel Gamma-sampled variant, optionally under a mutual-information
redundancy filter), then identify probes by nearest neighbor on the selected
features under normalized-correlation distance.
"""

from .boosting import (
    BoostConfig,
    EnsembleModel,
    GammaParams,
    PabStats,
    ResponseTable,
    adaboost_round,
    cost_estimate,
    fit_gamma,
    load_model,
    load_trajectory,
    mi_filter_pick,
    mutual_information_binary,
    predict,
    sample_weights,
    save_model,
    save_trajectory,
    train_ab,
    train_pab,
)
from .dataio import (
    ManifestEntry,
    SyntheticSpec,
    generate_synthetic,
    load_pgm,
    read_manifest,
    save_pgm,
    split_dataset,
    write_manifest,
)
from .errors import (
    CapacityError,
    DegenerateWeightsError,
    GaborBoostError,
    ParameterError,
    PgmFormatError,
    SelectionExhaustedError,
)
from .gabor import (
    FeatureLayout,
    GaborBankConfig,
    GaborKernel,
    convolve_magnitude,
    extract_features,
    extract_selected,
    load_bank_config,
    make_bank,
    make_kernel,
)
from .pairs import (
    DiffSample,
    GallerySample,
    TrainingSet,
    build_pairs,
    component,
    load_training_set,
    save_training_set,
)
from .recognize import (
    GalleryIndex,
    RecognitionReport,
    evaluate,
    ncc_distance,
    nearest_neighbor,
)
from .stumps import (
    WeakClassifier,
    best_weak,
    classify,
    threshold_from_means,
    weighted_error,
)

__version__ = "0.1.0"

__all__ = [
    "BoostConfig",
    "CapacityError",
    "DegenerateWeightsError",
    "DiffSample",
    "EnsembleModel",
    "FeatureLayout",
    "GaborBankConfig",
    "GaborBoostError",
    "GaborKernel",
    "GalleryIndex",
    "GallerySample",
    "GammaParams",
    "ManifestEntry",
    "PabStats",
    "ParameterError",
    "PgmFormatError",
    "RecognitionReport",
    "ResponseTable",
    "SelectionExhaustedError",
    "SyntheticSpec",
    "TrainingSet",
    "WeakClassifier",
    "adaboost_round",
    "best_weak",
    "build_pairs",
    "classify",
    "component",
    "convolve_magnitude",
    "cost_estimate",
    "evaluate",
    "extract_features",
    "extract_selected",
    "fit_gamma",
    "generate_synthetic",
    "load_bank_config",
    "load_model",
    "load_pgm",
    "load_trajectory",
    "load_training_set",
    "make_bank",
    "make_kernel",
    "mi_filter_pick",
    "mutual_information_binary",
    "ncc_distance",
    "nearest_neighbor",
    "predict",
    "read_manifest",
    "sample_weights",
    "save_model",
    "save_pgm",
    "save_trajectory",
    "save_training_set",
    "split_dataset",
    "threshold_from_means",
    "train_ab",
    "train_pab",
    "weighted_error",
    "write_manifest",
]
