"""Split conformal prediction on top of a predictive table.

Nonconformity score of an item with label y is the negative log of the
predicted probability of y.  Calibration scores are ranked with an
infinity augmentation: the threshold is the k-th smallest calibration
score with k = ceil((1 - alpha) * (n + 1)), or +inf when k exceeds n.
A label enters an item's prediction set when its score is <= threshold
(boundary included).  With scores computed from exchangeable data the
probability that a fresh item's true label is covered is at least
1 - alpha, and at most 1 - alpha + 1/(n + 1) when scores are almost
surely distinct.

Sets may be empty when every label scores above the threshold; this is
counted, never hidden.  An opt-in flag force-includes the argmax label
and reports how often that fired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_PROB_FLOOR = 1e-12


def nll_score(prob_vector: np.ndarray, label: int) -> float:
    """Negative log predicted probability of `label`, floored at 1e-12."""
    p = np.asarray(prob_vector, dtype=np.float64).reshape(-1)
    if not 0 <= label < p.size:
        raise ValueError(f"label {label} outside [0, {p.size})")
    return float(-np.log(max(float(p[label]), _PROB_FLOOR)))


def _score_matrix(probs: np.ndarray) -> np.ndarray:
    return -np.log(np.maximum(probs, _PROB_FLOOR))


def quantile_index(n: int, alpha: float) -> int:
    """k = ceil((1 - alpha) * (n + 1)), evaluated in exact rational arithmetic.

    The float value of alpha is converted to its exact rational value, so
    boundary cases like n = 9, alpha = 0.1 land on the mathematically
    correct integer instead of drifting across a rounding edge.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie strictly inside (0, 1), got {alpha}")
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.ceil((1 - Fraction(alpha)) * (n + 1))


def conformal_quantile(scores, alpha: float) -> float:
    """Threshold for level alpha from calibration scores.

    The k-th smallest of the scores augmented with +inf; returns +inf
    whenever k > n (including n = 0).  Duplicates count with multiplicity.
    """
    s = np.asarray(scores, dtype=np.float64).reshape(-1)
    k = quantile_index(s.size, alpha)
    if k > s.size:
        return math.inf
    return float(np.partition(s, k - 1)[k - 1])


@dataclass(frozen=True)
class PredictionSet:
    """Labels whose score fell at or below the threshold, for one item."""

    item: int
    labels: np.ndarray
    threshold: float

    @property
    def size(self) -> int:
        return int(self.labels.size)

    def contains(self, label: int) -> bool:
        return bool(np.isin(label, self.labels))


def build_prediction_set(prob_vector: np.ndarray, threshold: float,
                         item: int = -1) -> PredictionSet:
    """All labels with -log p <= threshold; +inf keeps every label."""
    p = np.asarray(prob_vector, dtype=np.float64).reshape(-1)
    scores = -np.log(np.maximum(p, _PROB_FLOOR))
    labels = np.flatnonzero(scores <= threshold).astype(np.int64)
    return PredictionSet(item=item, labels=labels, threshold=float(threshold))


@dataclass
class ConformalConfig:
    alpha: float = 0.1
    force_argmax: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie strictly inside (0, 1), got {self.alpha}")


@dataclass
class ConformalResult:
    """Per-trial conformal output over the test items.

    membership[i, y] says whether label y is in item i's set; empties are
    counted before any argmax forcing, and forced_count reports how many
    items had their argmax label added by the opt-in flag.
    """

    threshold: float
    test_indices: np.ndarray
    membership: np.ndarray
    set_sizes: np.ndarray
    hits: np.ndarray
    n_empty: int
    forced_count: int
    cal_scores: np.ndarray

    @property
    def coverage(self) -> float:
        return float(np.mean(self.hits))

    @property
    def inefficiency(self) -> float:
        return float(np.mean(self.set_sizes))


def run_scp(table, labels: np.ndarray, split, config: ConformalConfig) -> ConformalResult:
    """Full split-conformal pass: calibrate on `split.calibration`, build
    sets for `split.test`.

    `table` is a PredictiveTable covering every item the split mentions;
    indices outside its range are an error.  n_cal = 0 is legal and yields
    an infinite threshold, i.e. full label sets.
    """
    probs = table.probs
    labels = np.asarray(labels, dtype=np.int64)
    cal = np.asarray(split.calibration, dtype=np.int64)
    test = np.asarray(split.test, dtype=np.int64)
    if test.size == 0:
        raise ValueError("test partition is empty")
    for name, idx in (("calibration", cal), ("test", test)):
        if idx.size and (idx.min() < 0 or idx.max() >= probs.shape[0]):
            raise ValueError(f"{name} index outside the predictive table")
    if labels.shape[0] != probs.shape[0]:
        raise ValueError("labels and predictive table cover different item counts")

    if cal.size:
        cal_scores = _score_matrix(probs[cal])[np.arange(cal.size), labels[cal]]
    else:
        cal_scores = np.zeros(0)
    threshold = conformal_quantile(cal_scores, config.alpha)

    test_scores = _score_matrix(probs[test])
    membership = test_scores <= threshold
    empties = ~membership.any(axis=1)
    n_empty = int(empties.sum())
    forced = 0
    if config.force_argmax:
        top = np.argmax(probs[test], axis=1)
        already = membership[np.arange(test.size), top]
        forced = int((~already).sum())
        membership[np.arange(test.size), top] = True

    sizes = membership.sum(axis=1).astype(np.int64)
    hits = membership[np.arange(test.size), labels[test]]
    return ConformalResult(
        threshold=float(threshold),
        test_indices=test,
        membership=membership,
        set_sizes=sizes,
        hits=hits,
        n_empty=n_empty,
        forced_count=forced,
        cal_scores=cal_scores,
    )
