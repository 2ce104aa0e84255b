"""Coverage, inefficiency, and confidence-calibration metrics.

The reliability diagram uses M equal-width confidence bins over (0, 1];
bin m collects predictions whose top-class probability lies in
((m-1)/M, m/M], boundaries assigned to the bin they close.  ECE is the
count-weighted mean absolute gap between per-bin accuracy and confidence,
MCE the maximum gap over nonempty bins, so ECE <= MCE always.  The
combined measure MCE/accuracy summarizes miscalibration per unit of
point-prediction quality; it is undefined (None) at zero accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import ConformalResult

DEFAULT_BINS = 20


def empirical_coverage(result: ConformalResult) -> float:
    """Fraction of test items whose true label made it into the set."""
    if result.hits.size == 0:
        raise ValueError("no test items")
    return float(np.mean(result.hits))


def empirical_inefficiency(result: ConformalResult) -> float:
    """Mean prediction-set size over the test items."""
    if result.set_sizes.size == 0:
        raise ValueError("no test items")
    return float(np.mean(result.set_sizes))


def empty_set_rate(result: ConformalResult) -> float:
    return result.n_empty / result.set_sizes.size


def point_predictions(probs: np.ndarray) -> np.ndarray:
    """Argmax labels; ties resolve to the lowest class index."""
    return np.argmax(probs, axis=1)


def accuracy(probs: np.ndarray, labels: np.ndarray) -> float:
    labels = np.asarray(labels, dtype=np.int64)
    if probs.shape[0] == 0:
        raise ValueError("no items")
    return float(np.mean(point_predictions(probs) == labels))


@dataclass(frozen=True)
class ReliabilityDiagram:
    """Per-bin counts plus mean accuracy and confidence.

    Empty bins keep count 0 and NaN statistics; they never contribute to
    ECE or MCE.
    """

    num_bins: int
    counts: np.ndarray
    acc: np.ndarray
    conf: np.ndarray


def _bin_indices(conf: np.ndarray, num_bins: int) -> np.ndarray:
    edges = np.arange(1, num_bins + 1, dtype=np.float64) / num_bins
    idx = np.searchsorted(edges, conf, side="left")
    return np.minimum(idx, num_bins - 1)


def reliability(probs: np.ndarray, labels: np.ndarray,
                num_bins: int = DEFAULT_BINS) -> ReliabilityDiagram:
    """Reliability diagram of the argmax prediction at its confidence."""
    if num_bins < 1:
        raise ValueError("need at least one bin")
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if probs.shape[0] != labels.shape[0]:
        raise ValueError("probs and labels disagree on item count")
    conf = probs.max(axis=1)
    correct = (point_predictions(probs) == labels).astype(np.float64)
    idx = _bin_indices(conf, num_bins)
    counts = np.bincount(idx, minlength=num_bins).astype(np.int64)
    acc_sum = np.bincount(idx, weights=correct, minlength=num_bins)
    conf_sum = np.bincount(idx, weights=conf, minlength=num_bins)
    with np.errstate(invalid="ignore"):
        acc = np.where(counts > 0, acc_sum / np.maximum(counts, 1), np.nan)
        conf_mean = np.where(counts > 0, conf_sum / np.maximum(counts, 1), np.nan)
    return ReliabilityDiagram(num_bins=num_bins, counts=counts, acc=acc, conf=conf_mean)


def ece(diagram: ReliabilityDiagram) -> float:
    """Count-weighted mean |accuracy - confidence| over nonempty bins."""
    n = int(diagram.counts.sum())
    if n == 0:
        raise ValueError("empty reliability diagram")
    live = diagram.counts > 0
    gaps = np.abs(diagram.acc[live] - diagram.conf[live])
    return float(np.sum(diagram.counts[live] / n * gaps))


def mce(diagram: ReliabilityDiagram) -> float:
    """Largest |accuracy - confidence| over nonempty bins."""
    if int(diagram.counts.sum()) == 0:
        raise ValueError("empty reliability diagram")
    live = diagram.counts > 0
    return float(np.max(np.abs(diagram.acc[live] - diagram.conf[live])))


def combined_measure(mce_value: float, accuracy_value: float) -> float | None:
    """MCE divided by accuracy; None when accuracy is zero."""
    if accuracy_value < 0.0:
        raise ValueError("accuracy cannot be negative")
    if accuracy_value == 0.0:
        return None
    return mce_value / accuracy_value
