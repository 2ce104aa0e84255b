"""Split conformal prediction for graph networks with tempered posteriors."""

from .conformal import (
    ConformalConfig,
    ConformalResult,
    PredictionSet,
    build_prediction_set,
    conformal_quantile,
    nll_score,
    quantile_index,
    run_scp,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    ResultsTable,
    TrialRow,
    emit_outputs,
    load_config,
    read_results_csv,
    resolve_dataset,
    run_experiment,
    sweep_report,
)
from .gcn import (
    GcnConfig,
    TrainingDivergedError,
    gcn_backward,
    gcn_forward,
    init_params,
    load_checkpoint,
    save_checkpoint,
    train_frequentist,
)
from .gdc import (
    DropRateModeError,
    DropRateParams,
    GdcModel,
    MaskSet,
    PredictiveTable,
    TemperatureConfig,
    arm_drop_rate_gradient,
    arm_gradient_estimate,
    bernoulli_kl,
    free_energy_loss,
    gdc_forward,
    kl_term,
    kumaraswamy_beta_kl,
    kumaraswamy_sample,
    load_model,
    mc_predict,
    predictive_from_logits,
    sample_masks,
    save_model,
    train_bayesian,
)
from .graph import (
    BundleError,
    BundleIndexError,
    BundleLabelError,
    BundleMalformed,
    BundleMissingFile,
    GraphBundle,
    NeighborIndex,
    SplitSpec,
    build_neighbor_index,
    generate_graph_dataset,
    generate_sbm,
    load_bundle,
    normalize_edges,
    resample_split,
    save_bundle,
)
from .metrics import (
    ReliabilityDiagram,
    accuracy,
    combined_measure,
    ece,
    empirical_coverage,
    empirical_inefficiency,
    empty_set_rate,
    mce,
    point_predictions,
    reliability,
)
from .numerics import derive_rng, derive_seed, make_rng

__version__ = "0.1.0"

__all__ = [
    "BundleError",
    "BundleIndexError",
    "BundleLabelError",
    "BundleMalformed",
    "BundleMissingFile",
    "ConfigError",
    "ConformalConfig",
    "ConformalResult",
    "DropRateModeError",
    "DropRateParams",
    "ExperimentConfig",
    "GcnConfig",
    "GdcModel",
    "GraphBundle",
    "MaskSet",
    "NeighborIndex",
    "PredictionSet",
    "PredictiveTable",
    "ReliabilityDiagram",
    "ResultsTable",
    "SplitSpec",
    "TemperatureConfig",
    "TrainingDivergedError",
    "TrialRow",
    "accuracy",
    "arm_drop_rate_gradient",
    "arm_gradient_estimate",
    "bernoulli_kl",
    "build_neighbor_index",
    "build_prediction_set",
    "combined_measure",
    "conformal_quantile",
    "derive_rng",
    "derive_seed",
    "ece",
    "emit_outputs",
    "empirical_coverage",
    "empirical_inefficiency",
    "empty_set_rate",
    "free_energy_loss",
    "gcn_backward",
    "gcn_forward",
    "gdc_forward",
    "generate_graph_dataset",
    "generate_sbm",
    "init_params",
    "kl_term",
    "kumaraswamy_beta_kl",
    "kumaraswamy_sample",
    "load_bundle",
    "load_checkpoint",
    "load_config",
    "load_model",
    "make_rng",
    "mc_predict",
    "mce",
    "nll_score",
    "normalize_edges",
    "point_predictions",
    "predictive_from_logits",
    "quantile_index",
    "read_results_csv",
    "reliability",
    "resample_split",
    "resolve_dataset",
    "run_experiment",
    "run_scp",
    "sample_masks",
    "save_bundle",
    "save_checkpoint",
    "save_model",
    "sweep_report",
    "train_bayesian",
    "train_frequentist",
]
