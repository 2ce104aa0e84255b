"""Experiment runner: temperature sweeps with per-trial conformal evaluation.

One experiment = one dataset, one model family, and (for the Bayesian
family) a grid of temperatures.  Per temperature the model is trained
once on a fixed train split; every trial then redraws the calibration /
test partition, draws a fresh shared MaskSet, predicts all items in one
pass, runs split conformal prediction, and records coverage,
inefficiency, accuracy, and calibration metrics.  Everything is
deterministic from the base seed: per-cell and per-trial streams are
derived by labeled seed splitting, trial split seeds are shared across
cells so temperatures are compared on identical partitions, and output
files are byte-stable across re-runs and across --parallel settings.

Emitted artifacts: results.csv (one row per trial), summary.json
(per-cell aggregates plus temperature selection), boxplot.json (quartile
and whisker data), and reliability_<cell>.csv (fixed-width bin table,
accumulated over trials).
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .conformal import ConformalConfig, run_scp
from .gcn import GcnConfig, TrainingDivergedError, gcn_forward, train_frequentist
from .gdc import (
    DropRateParams,
    TemperatureConfig,
    mc_predict,
    predictive_from_logits,
    sample_masks,
    train_bayesian,
)
from .graph import (
    BundleError,
    GraphBundle,
    build_neighbor_index,
    generate_graph_dataset,
    generate_sbm,
    load_bundle,
    resample_split,
)
from .metrics import (
    accuracy,
    combined_measure,
    ece,
    empty_set_rate,
    mce,
    reliability,
)
from .numerics import derive_seed

MODEL_FREQUENTIST = "frequentist"
MODEL_BAYESIAN = "bayesian"


class ConfigError(ValueError):
    """Bad experiment configuration (CLI exit code 1)."""


@dataclass
class ExperimentConfig:
    """Single JSON-document experiment description.

    `dataset` is either a bundle directory path or
    {"synthetic": {"kind": "sbm", ...}} / {"kind": "graphs", ...} with the
    generator's keyword arguments.
    """

    dataset: object
    model: str = MODEL_BAYESIAN
    betas: tuple = ()
    alpha: float = 0.1
    n_train: int = 100
    n_cal: int = 100
    n_test: int = 100
    n_trials: int = 10
    seed: int = 0
    hidden_dims: tuple = (32,)
    readout: str = "none"
    epochs: int = 200
    lr: float = 0.005
    weight_decay: float = 0.0
    dropout_rate: float = 0.0
    drop_rate: float = 0.2
    learn_drop_rates: bool = False
    weight_prior_scale: float = 1.0
    mask_prior_a: float = 1.0
    mask_prior_b: float = 1.0
    mc_samples: int = 10
    train_mc_samples: int = 1
    reliability_bins: int = 20
    force_argmax: bool = False
    resample_train: bool = False

    def __post_init__(self):
        self.betas = tuple(float(b) for b in self.betas)
        self.hidden_dims = tuple(int(d) for d in self.hidden_dims)
        if self.model not in (MODEL_FREQUENTIST, MODEL_BAYESIAN):
            raise ConfigError(f"model must be frequentist or bayesian, got {self.model!r}")
        if self.model == MODEL_BAYESIAN:
            if not self.betas:
                raise ConfigError("bayesian experiments need a non-empty beta grid")
            if any(b < 0 for b in self.betas):
                raise ConfigError("temperatures must be >= 0")
            if len(set(self.betas)) != len(self.betas):
                raise ConfigError("duplicate temperatures in the beta grid")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie strictly inside (0, 1), got {self.alpha}")
        for name in ("n_train", "n_test", "n_trials", "epochs", "mc_samples",
                     "train_mc_samples", "reliability_bins"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.n_cal < 0:
            raise ConfigError("n_cal must be >= 0")
        if self.lr <= 0:
            raise ConfigError("lr must be > 0")

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        known = {f for f in ExperimentConfig.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "dataset" not in d:
            raise ConfigError("config is missing the dataset field")
        try:
            return ExperimentConfig(**d)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from None
    return ExperimentConfig.from_dict(doc)


_SBM_KEYS = {"kind", "seed", "communities", "nodes_per_community", "p_in", "p_out",
             "feature_noise", "label_noise", "name"}
_GRAPHS_KEYS = {"kind", "seed", "num_graphs", "nodes_per_graph", "num_classes",
                "edge_p", "feature_noise", "name"}


def resolve_dataset(config: ExperimentConfig) -> GraphBundle:
    ds = config.dataset
    if isinstance(ds, str):
        return load_bundle(ds)
    if isinstance(ds, dict) and "synthetic" in ds and len(ds) == 1:
        spec = dict(ds["synthetic"])
        kind = spec.get("kind", "sbm")
        spec.setdefault("seed", derive_seed(config.seed, "data"))
        try:
            if kind == "sbm":
                extra = set(spec) - _SBM_KEYS
                if extra:
                    raise ConfigError(f"unknown sbm fields: {sorted(extra)}")
                spec.pop("kind", None)
                return generate_sbm(**spec)
            if kind == "graphs":
                extra = set(spec) - _GRAPHS_KEYS
                if extra:
                    raise ConfigError(f"unknown graphs fields: {sorted(extra)}")
                spec.pop("kind", None)
                return generate_graph_dataset(**spec)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (ConfigError, BundleError)):
                raise
            raise ConfigError(f"bad synthetic dataset spec: {exc}") from None
        raise ConfigError(f"unknown synthetic dataset kind {kind!r}")
    raise ConfigError("dataset must be a bundle path or {'synthetic': {...}}")


# ---------------------------------------------------------------------------
# rows and cells


@dataclass
class TrialRow:
    dataset: str
    model: str
    beta: float | None
    trial: int
    coverage: float
    inefficiency: float
    empty_rate: float
    accuracy: float
    ece: float
    mce: float
    combined: float | None
    threshold: float


def cell_label(model: str, beta) -> str:
    return MODEL_FREQUENTIST if beta is None else repr(float(beta))


@dataclass
class ReliabilityAccum:
    """Bin-wise tallies pooled over trials (pooling is order-free)."""

    counts: np.ndarray
    acc_sum: np.ndarray
    conf_sum: np.ndarray

    @staticmethod
    def empty(num_bins: int) -> "ReliabilityAccum":
        return ReliabilityAccum(
            counts=np.zeros(num_bins, dtype=np.int64),
            acc_sum=np.zeros(num_bins),
            conf_sum=np.zeros(num_bins),
        )

    def add(self, diagram) -> None:
        live = diagram.counts > 0
        self.counts += diagram.counts
        self.acc_sum[live] += diagram.counts[live] * diagram.acc[live]
        self.conf_sum[live] += diagram.counts[live] * diagram.conf[live]


@dataclass
class CellFailure:
    label: str
    beta: float | None
    error: str


@dataclass
class ResultsTable:
    config: ExperimentConfig | None
    rows: list
    failures: list = field(default_factory=list)
    reliability: dict = field(default_factory=dict)


def _gcn_config(config: ExperimentConfig, bundle: GraphBundle,
                bayesian: bool) -> GcnConfig:
    dims = (bundle.feature_dim, *config.hidden_dims, bundle.num_classes)
    return GcnConfig(
        layer_dims=dims,
        readout=config.readout,
        weight_decay=0.0 if bayesian else config.weight_decay,
        dropout_rate=0.0 if bayesian else config.dropout_rate,
    )


def _drop_rate_params(config: ExperimentConfig, num_layers: int) -> DropRateParams:
    if config.learn_drop_rates:
        return DropRateParams.learnable(num_layers)
    return DropRateParams.fixed([config.drop_rate] * num_layers)


def _train_cell(config, bundle, split, beta, train_seed):
    """Train one cell's model; returns a closure producing predictive tables."""
    index = build_neighbor_index(bundle.num_nodes, bundle.edges)
    if beta is None:
        gcfg = _gcn_config(config, bundle, bayesian=False)
        params, _ = train_frequentist(bundle, split, gcfg, train_seed,
                                      config.epochs, config.lr)
        logits, _ = gcn_forward(bundle, index, params, gcfg, want_cache=False)
        table = predictive_from_logits(logits)

        def predict(mask_seed):
            return table
        return predict

    gcfg = _gcn_config(config, bundle, bayesian=True)
    temp = TemperatureConfig(
        beta=beta,
        weight_prior_scale=config.weight_prior_scale,
        mask_prior_a=config.mask_prior_a,
        mask_prior_b=config.mask_prior_b,
    )
    rates = _drop_rate_params(config, gcfg.num_layers)
    model, _ = train_bayesian(bundle, split, gcfg, temp, train_seed,
                              config.epochs, config.lr, rates,
                              train_mc_samples=config.train_mc_samples)
    feature_dims = gcfg.layer_dims[:-1]

    def predict(mask_seed):
        masks = sample_masks(mask_seed, index, feature_dims, model.drop_rates,
                             config.mc_samples)
        return mc_predict(model, bundle, index, masks)
    return predict


def _run_cell(args):
    """Worker for one (cell_index, beta) cell; maps over trials."""
    config, bundle, cell_index, beta, base_split = args
    label = cell_label(config.model, beta)
    labels = bundle.item_labels()
    rel = ReliabilityAccum.empty(config.reliability_bins)
    rows = []
    try:
        if not config.resample_train:
            predict = _train_cell(config, bundle, base_split, beta,
                                  derive_seed(config.seed, "train", cell_index))
        for trial in range(config.n_trials):
            split_seed = derive_seed(config.seed, "split", trial)
            if config.resample_train:
                split = resample_split(bundle, config.n_train, config.n_cal,
                                       config.n_test, seed=split_seed)
                predict = _train_cell(config, bundle, split, beta,
                                      derive_seed(config.seed, "train", cell_index, trial))
            else:
                split = resample_split(bundle, config.n_train, config.n_cal,
                                       config.n_test, seed=split_seed,
                                       train_indices=base_split.train)
            table = predict(derive_seed(config.seed, "mask", cell_index, trial))
            result = run_scp(table, labels, split,
                             ConformalConfig(alpha=config.alpha,
                                             force_argmax=config.force_argmax))
            test = split.test
            test_probs = table.probs[test]
            test_labels = labels[test]
            acc = accuracy(test_probs, test_labels)
            diag = reliability(test_probs, test_labels, config.reliability_bins)
            e_val = ece(diag)
            m_val = mce(diag)
            rel.add(diag)
            rows.append(TrialRow(
                dataset=bundle.name,
                model=config.model,
                beta=beta,
                trial=trial,
                coverage=result.coverage,
                inefficiency=result.inefficiency,
                empty_rate=empty_set_rate(result),
                accuracy=acc,
                ece=e_val,
                mce=m_val,
                combined=combined_measure(m_val, acc),
                threshold=result.threshold,
            ))
    except TrainingDivergedError as exc:
        return label, beta, [], None, str(exc)
    return label, beta, rows, rel, None


def _base_split(config: ExperimentConfig, bundle: GraphBundle):
    """Training split shared by all cells; None when retraining per trial."""
    if config.resample_train:
        return None
    return resample_split(bundle, config.n_train, config.n_cal, config.n_test,
                          seed=derive_seed(config.seed, "train-split"))


def run_experiment(config: ExperimentConfig, parallel: int = 1) -> ResultsTable:
    """Run every cell of the experiment; deterministic for a fixed seed.

    A training divergence fails only its own cell; the failure is
    recorded and the remaining cells still run.
    """
    bundle = resolve_dataset(config)
    bundle.validate()
    try:
        base = _base_split(config, bundle)
        if config.resample_train:
            # fail fast on impossible sizes before any training happens
            resample_split(bundle, config.n_train, config.n_cal, config.n_test,
                           seed=derive_seed(config.seed, "split", 0))
    except ValueError as exc:
        raise ConfigError(f"split does not fit the dataset: {exc}") from None
    if config.model == MODEL_FREQUENTIST:
        cells = [(0, None)]
    else:
        cells = list(enumerate(config.betas))
    jobs = [(config, bundle, ci, beta, base) for ci, beta in cells]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(parallel, len(jobs))) as pool:
            outcomes = list(pool.map(_run_cell, jobs))
    else:
        outcomes = [_run_cell(j) for j in jobs]
    table = ResultsTable(config=config, rows=[], failures=[], reliability={})
    for label, beta, rows, rel, err in outcomes:
        if err is not None:
            table.failures.append(CellFailure(label=label, beta=beta, error=err))
            continue
        table.rows.extend(rows)
        table.reliability[label] = rel
    return table


# ---------------------------------------------------------------------------
# aggregation


def _stats(values: np.ndarray) -> dict:
    q1, med, q3 = np.percentile(values, [25.0, 50.0, 75.0])
    return {
        "mean": float(np.mean(values)),
        "std": float(np.std(values)),
        "min": float(np.min(values)),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(np.max(values)),
    }


_METRIC_FIELDS = ("coverage", "inefficiency", "empty_rate", "accuracy",
                  "ece", "mce", "threshold")


def sweep_report(rows, failures=()) -> dict:
    """Per-cell aggregates plus temperature selection, from trial rows alone.

    Cells appear in first-occurrence order.  Selection requires at least
    two successful temperature cells: best temperature is the argmin of
    mean inefficiency (ties to the smaller beta); cells are also ranked
    by mean combined measure where defined.
    """
    order = []
    by_label = {}
    for row in rows:
        label = cell_label(row.model, row.beta)
        if label not in by_label:
            by_label[label] = []
            order.append(label)
        by_label[label].append(row)
    cells = []
    for label in order:
        cell_rows = by_label[label]
        entry = {
            "label": label,
            "beta": cell_rows[0].beta,
            "model": cell_rows[0].model,
            "n_trials": len(cell_rows),
        }
        for name in _METRIC_FIELDS:
            vals = np.array([getattr(r, name) for r in cell_rows], dtype=np.float64)
            entry[name] = _stats(vals)
        combined = [r.combined for r in cell_rows if r.combined is not None]
        entry["combined_mean"] = float(np.mean(combined)) if combined else None
        cells.append(entry)

    report = {
        "cells": cells,
        "failures": [
            {"label": f.label, "beta": f.beta, "error": f.error} for f in failures
        ],
    }
    beta_cells = [c for c in cells if c["beta"] is not None]
    if len(beta_cells) >= 2:
        best = min(beta_cells, key=lambda c: (c["inefficiency"]["mean"], c["beta"]))
        ranked = sorted(
            (c for c in beta_cells if c["combined_mean"] is not None),
            key=lambda c: (c["combined_mean"], c["beta"]),
        )
        report["selection"] = {
            "best_beta_by_inefficiency": best["beta"],
            "combined_ranking": [c["beta"] for c in ranked],
        }
    else:
        report["selection"] = None
    return report


def _boxplot_stats(values: np.ndarray) -> dict:
    q1, med, q3 = np.percentile(values, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = values[(values >= lo_fence) & (values <= hi_fence)]
    lo = float(np.min(inside)) if inside.size else float(np.min(values))
    hi = float(np.max(inside)) if inside.size else float(np.max(values))
    outliers = sorted(float(v) for v in values[(values < lo_fence) | (values > hi_fence)])
    return {
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "whisker_low": lo,
        "whisker_high": hi,
        "outliers": outliers,
    }


def boxplot_data(rows) -> dict:
    order = []
    by_label = {}
    for row in rows:
        label = cell_label(row.model, row.beta)
        if label not in by_label:
            by_label[label] = []
            order.append(label)
        by_label[label].append(row)
    out = {"coverage": {}, "inefficiency": {}}
    for label in order:
        cell_rows = by_label[label]
        for metric in ("coverage", "inefficiency"):
            vals = np.array([getattr(r, metric) for r in cell_rows], dtype=np.float64)
            out[metric][label] = _boxplot_stats(vals)
    return out


# ---------------------------------------------------------------------------
# deterministic serialization

_CSV_COLUMNS = ("dataset", "model", "beta", "trial", "coverage", "inefficiency",
                "empty_rate", "accuracy", "ece", "mce", "combined", "threshold")


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _row_to_csv(row: TrialRow) -> str:
    vals = [
        row.dataset,
        row.model,
        "" if row.beta is None else _fmt_float(row.beta),
        str(row.trial),
        _fmt_float(row.coverage),
        _fmt_float(row.inefficiency),
        _fmt_float(row.empty_rate),
        _fmt_float(row.accuracy),
        _fmt_float(row.ece),
        _fmt_float(row.mce),
        "" if row.combined is None else _fmt_float(row.combined),
        _fmt_float(row.threshold),
    ]
    return ",".join(vals)


def write_results_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(_CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(_row_to_csv(row) + "\n")


def read_results_csv(path) -> list:
    p = Path(path)
    if not p.is_file():
        raise BundleError(f"results file not found: {p}")
    lines = p.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != ",".join(_CSV_COLUMNS):
        raise BundleError(f"{p}: unexpected results.csv header")
    rows = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(_CSV_COLUMNS):
            raise BundleError(f"{p}:{ln}: expected {len(_CSV_COLUMNS)} columns")
        rows.append(TrialRow(
            dataset=parts[0],
            model=parts[1],
            beta=None if parts[2] == "" else float(parts[2]),
            trial=int(parts[3]),
            coverage=float(parts[4]),
            inefficiency=float(parts[5]),
            empty_rate=float(parts[6]),
            accuracy=float(parts[7]),
            ece=float(parts[8]),
            mce=float(parts[9]),
            combined=None if parts[10] == "" else float(parts[10]),
            threshold=float(parts[11]),
        ))
    return rows


def sanitize_json(obj):
    """Replace non-finite floats with strings so strict JSON round-trips."""
    if isinstance(obj, dict):
        return {k: sanitize_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize_json(v) for v in obj]
    if isinstance(obj, float):
        if np.isnan(obj):
            return "nan"
        if np.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    return obj


def dump_json(obj, path) -> None:
    text = json.dumps(sanitize_json(obj), sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_reliability_csv(accum: ReliabilityAccum, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("bin,count,acc,conf\n")
        for i in range(accum.counts.size):
            c = int(accum.counts[i])
            if c > 0:
                acc = _fmt_float(accum.acc_sum[i] / c)
                conf = _fmt_float(accum.conf_sum[i] / c)
            else:
                acc = conf = "nan"
            fh.write(f"{i + 1},{c},{acc},{conf}\n")


def emit_outputs(table: ResultsTable, outdir) -> dict:
    """Write results.csv, summary.json, boxplot.json, reliability_<cell>.csv."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(table.rows, out / "results.csv")
    summary = sweep_report(table.rows, table.failures)
    if table.config is not None:
        summary["config"] = asdict(table.config)
    dump_json(summary, out / "summary.json")
    dump_json(boxplot_data(table.rows), out / "boxplot.json")
    paths = {
        "results": out / "results.csv",
        "summary": out / "summary.json",
        "boxplot": out / "boxplot.json",
    }
    for label, accum in table.reliability.items():
        p = out / f"reliability_{label}.csv"
        write_reliability_csv(accum, p)
        paths[f"reliability_{label}"] = p
    return paths
