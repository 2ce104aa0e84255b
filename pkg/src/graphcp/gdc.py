"""Bayesian graph network via edge-wise DropConnect and a tempered objective.

Each layer drops individual feature entries of each incoming message with
per-layer probability pi_l (self-messages included), so one binary mask of
shape (directed edges, layer width) exists per layer per sample.  Training
minimizes

    mean NLL over the train items  +  beta * KL(variational || prior)

where beta is the temperature: beta = 0 removes the KL term from both the
value and the gradient, beta = 1 is the usual variational objective, and
large beta pulls the weights toward the prior.  The KL closes over a
zero-mean Gaussian weight prior of scale s and a Bernoulli mask prior
whose drop probability is the mean of a Beta(a0, b0):

    KL = sum_l [ (1 - pi_l) / (2 s^2) * ||W_l||^2  +  mask term ]

with the mask term a per-variable Bernoulli KL in fixed-rate mode and a
per-layer Kumaraswamy-vs-Beta KL when the rates are learnable.

Prediction draws T mask samples from a MaskSet that is shared by every
node in the pass: the masks depend only on (seed, t, layer), never on
which nodes are later labeled calibration or test, which is what keeps
calibration and test scores exchangeable.  Masks are regenerated from the
seed on demand, so a MaskSet stays O(1) in memory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import betaln, digamma, expit, polygamma

from .gcn import (
    ForwardCache,
    GcnConfig,
    TrainingDivergedError,
    accuracy_from_logits,
    backward_from_logit_grad,
    forward_pass,
    init_params,
    load_checkpoint,
    loss_and_logit_grad,
    save_checkpoint,
)
from .graph import GraphBundle, NeighborIndex, build_neighbor_index
from .numerics import AdamState, adam_step, bernoulli_sample, derive_rng, make_rng

MODE_FIXED = "fixed"
MODE_LEARNABLE = "learnable"

_EPS_RATE = 1e-6


class DropRateModeError(RuntimeError):
    """Operation requires the other drop-rate mode."""


@dataclass
class TemperatureConfig:
    """Temperature and prior settings for the tempered objective."""

    beta: float
    weight_prior_scale: float = 1.0
    mask_prior_a: float = 1.0
    mask_prior_b: float = 1.0

    def __post_init__(self):
        if self.beta < 0.0:
            raise ValueError(f"temperature beta must be >= 0, got {self.beta}")
        if self.weight_prior_scale <= 0.0:
            raise ValueError("weight_prior_scale must be > 0")
        if self.mask_prior_a <= 0.0 or self.mask_prior_b <= 0.0:
            raise ValueError("mask prior hyperparameters must be > 0")

    @property
    def prior_drop(self) -> float:
        """Mean drop probability under the Beta(a0, b0) mask prior."""
        return self.mask_prior_a / (self.mask_prior_a + self.mask_prior_b)


@dataclass
class DropRateParams:
    """Per-layer drop probabilities, fixed or learnable.

    Fixed mode stores the probabilities themselves (the closed interval
    [0, 1] is allowed; 0 disables dropping entirely).  Learnable mode
    stores log-parameters of a per-layer Kumaraswamy posterior over the
    drop probability; realized rates are sampled per step and clamped to
    the open interval.
    """

    mode: str
    probs: np.ndarray | None = None
    log_a: np.ndarray | None = None
    log_b: np.ndarray | None = None

    @staticmethod
    def fixed(probs) -> "DropRateParams":
        arr = np.asarray(probs, dtype=np.float64).reshape(-1)
        if arr.size == 0 or np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("fixed drop rates must lie in [0, 1]")
        return DropRateParams(mode=MODE_FIXED, probs=arr)

    @staticmethod
    def learnable(num_layers: int, init_a: float = 1.0, init_b: float = 4.0) -> "DropRateParams":
        if init_a <= 0.0 or init_b <= 0.0:
            raise ValueError("Kumaraswamy parameters must be > 0")
        return DropRateParams(
            mode=MODE_LEARNABLE,
            log_a=np.full(num_layers, np.log(init_a)),
            log_b=np.full(num_layers, np.log(init_b)),
        )

    @property
    def num_layers(self) -> int:
        return self.probs.size if self.mode == MODE_FIXED else self.log_a.size

    def kumaraswamy(self):
        if self.mode != MODE_LEARNABLE:
            raise DropRateModeError("drop rates are fixed; no posterior parameters")
        return np.exp(self.log_a), np.exp(self.log_b)

    def realized(self, rng=None) -> np.ndarray:
        """Concrete per-layer drop probabilities for one step.

        Fixed mode returns the stored probabilities.  Learnable mode draws
        one rate per layer from its Kumaraswamy posterior; rates always
        land strictly inside (0, 1).
        """
        if self.mode == MODE_FIXED:
            return self.probs.copy()
        if rng is None:
            raise ValueError("learnable drop rates need an rng to realize")
        a, b = self.kumaraswamy()
        u = rng.random(a.shape)
        pi = kumaraswamy_sample(a, b, u)
        return np.clip(pi, _EPS_RATE, 1.0 - _EPS_RATE)

    def mean_rates(self) -> np.ndarray:
        """Deterministic summary rates: stored probs, or the posterior mean."""
        if self.mode == MODE_FIXED:
            return self.probs.copy()
        a, b = self.kumaraswamy()
        return np.clip(b * beta_fn(1.0 + 1.0 / a, b), _EPS_RATE, 1.0 - _EPS_RATE)


def kumaraswamy_sample(a, b, u):
    """Inverse-CDF sample of Kumaraswamy(a, b) at uniform u."""
    return (1.0 - (1.0 - u) ** (1.0 / b)) ** (1.0 / a)


# ---------------------------------------------------------------------------
# mask sets


@dataclass(frozen=True)
class MaskSet:
    """T samples of per-layer, per-directed-edge, per-feature keep masks.

    Masks are a pure function of (seed, sample, layer) and the stored drop
    rates, regenerated on demand; nothing about them depends on node
    identity or split designation.  rates has shape (T, L): the protocol
    draws a fresh rate per sample per layer when rates are learnable, and
    repeats the fixed rates otherwise.
    """

    seed: int
    num_samples: int
    num_edges: int
    feature_dims: tuple
    rates: np.ndarray

    def layer_mask(self, t: int, layer: int) -> np.ndarray:
        """(num_edges, f_layer) 0/1 keep mask for sample t."""
        if not 0 <= t < self.num_samples:
            raise ValueError(f"sample index {t} outside [0, {self.num_samples})")
        if not 0 <= layer < len(self.feature_dims):
            raise ValueError(f"layer {layer} outside [0, {len(self.feature_dims)})")
        rng = derive_rng(self.seed, "mask", t, layer)
        pi = self.rates[t, layer]
        shape = (self.num_edges, self.feature_dims[layer])
        return (rng.random(shape) >= pi).astype(np.float64)


def sample_masks(seed: int, index: NeighborIndex, feature_dims, drop_rates,
                 num_samples: int) -> MaskSet:
    """Build the shared MaskSet for a prediction pass.

    drop_rates may be a DropRateParams or a plain per-layer probability
    sequence.  num_samples >= 1.
    """
    if num_samples < 1:
        raise ValueError("need at least one mask sample")
    feature_dims = tuple(int(f) for f in feature_dims)
    if isinstance(drop_rates, DropRateParams):
        if drop_rates.mode == MODE_FIXED:
            if drop_rates.probs.size != len(feature_dims):
                raise ValueError("one drop rate per layer required")
            rates = np.tile(drop_rates.probs, (num_samples, 1))
        else:
            rate_rng = derive_rng(seed, "rates")
            rates = np.stack([drop_rates.realized(rate_rng) for _ in range(num_samples)])
    else:
        probs = np.asarray(drop_rates, dtype=np.float64).reshape(-1)
        if probs.size != len(feature_dims):
            raise ValueError("one drop rate per layer required")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise ValueError("drop rates must lie in [0, 1]")
        rates = np.tile(probs, (num_samples, 1))
    return MaskSet(
        seed=seed,
        num_samples=num_samples,
        num_edges=index.num_directed_edges,
        feature_dims=feature_dims,
        rates=rates,
    )


# ---------------------------------------------------------------------------
# model container


@dataclass
class GdcModel:
    config: GcnConfig
    params: list
    drop_rates: DropRateParams
    temperature: TemperatureConfig


def gdc_forward(bundle: GraphBundle, index: NeighborIndex, model: GdcModel,
                masks: MaskSet, t: int, want_cache: bool = False):
    """Masked forward with sample t of the MaskSet; returns (logits, cache)."""
    return forward_pass(
        bundle.features, index, model.params, model.config,
        mask_fn=lambda l: masks.layer_mask(t, l),
        graph_ids=bundle.graph_ids,
        num_graphs=bundle.num_graphs,
        want_cache=want_cache,
    )


# ---------------------------------------------------------------------------
# KL terms


def bernoulli_kl(p: float, q: float) -> float:
    """KL(Bernoulli(p) || Bernoulli(q)), with the p in {0, 1} limits."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p outside [0, 1]: {p}")
    if not 0.0 < q < 1.0:
        raise ValueError(f"prior probability must lie strictly inside (0, 1): {q}")
    out = 0.0
    if p > 0.0:
        out += p * np.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * np.log((1.0 - p) / (1.0 - q))
    return float(out)


_KUM_SERIES_TERMS = 10


def kumaraswamy_beta_kl(a: float, b: float, prior_a: float = 1.0,
                        prior_b: float = 1.0) -> float:
    """KL(Kumaraswamy(a, b) || Beta(prior_a, prior_b)).

    Exact for a Beta(x, 1) prior; otherwise the usual 10-term series
    approximation of E[log(1 - x)].  Zero at a = b = 1 against Beta(1, 1).
    """
    if min(a, b, prior_a, prior_b) <= 0.0:
        raise ValueError("Kumaraswamy/Beta parameters must be > 0")
    cb = -np.euler_gamma - digamma(b) - 1.0 / b
    kl = (a - prior_a) / a * cb + np.log(a * b) + betaln(prior_a, prior_b) - (b - 1.0) / b
    if prior_b != 1.0:
        m = np.arange(1, _KUM_SERIES_TERMS + 1, dtype=np.float64)
        kl += (prior_b - 1.0) * b * np.sum(beta_fn(m / a, b) / (m + a * b))
    return float(kl)


def kumaraswamy_beta_kl_grad(a: float, b: float, prior_a: float = 1.0,
                             prior_b: float = 1.0):
    """(d/da, d/db) of kumaraswamy_beta_kl, same truncation."""
    cb = -np.euler_gamma - digamma(b) - 1.0 / b
    dcb = -polygamma(1, b) + 1.0 / (b * b)
    da = prior_a * cb / (a * a) + 1.0 / a
    db = (a - prior_a) / a * dcb + 1.0 / b - 1.0 / (b * b)
    if prior_b != 1.0:
        m = np.arange(1, _KUM_SERIES_TERMS + 1, dtype=np.float64)
        x = m / a
        bx = beta_fn(x, b)
        dbx_dx = bx * (digamma(x) - digamma(x + b))
        dbx_db = bx * (digamma(b) - digamma(x + b))
        denom = m + a * b
        da += (prior_b - 1.0) * b * np.sum(
            dbx_dx * (-m / (a * a)) / denom - bx * b / (denom * denom))
        db += (prior_b - 1.0) * np.sum(
            bx / denom + b * dbx_db / denom - b * bx * a / (denom * denom))
    return float(da), float(db)


def mask_variable_counts(index: NeighborIndex, config: GcnConfig) -> np.ndarray:
    """Number of Bernoulli mask variables per layer: directed edges x width."""
    e = index.num_directed_edges
    return np.array([e * config.layer_dims[l] for l in range(config.num_layers)],
                    dtype=np.float64)


def kl_term(params: list, drop_rates: DropRateParams, temp: TemperatureConfig,
            mask_counts, realized=None) -> float:
    """KL(variational || prior) under the closed form described above.

    `realized` supplies the concrete per-layer drop probabilities for the
    weight term; defaults to the stored/mean rates.  Nonnegative, zero
    exactly when weights are zero and the mask distribution matches the
    prior.
    """
    pi = np.asarray(realized, dtype=np.float64) if realized is not None \
        else drop_rates.mean_rates()
    mask_counts = np.asarray(mask_counts, dtype=np.float64)
    s2 = temp.weight_prior_scale ** 2
    total = 0.0
    for l, w in enumerate(params):
        total += (1.0 - pi[l]) / (2.0 * s2) * float(np.sum(w * w))
    if drop_rates.mode == MODE_FIXED:
        for l in range(len(params)):
            total += mask_counts[l] * bernoulli_kl(float(drop_rates.probs[l]), temp.prior_drop)
    else:
        a, b = drop_rates.kumaraswamy()
        for l in range(len(params)):
            total += kumaraswamy_beta_kl(float(a[l]), float(b[l]),
                                         temp.mask_prior_a, temp.mask_prior_b)
    return float(total)


def free_energy_loss(batch_nll: float, params: list, drop_rates: DropRateParams,
                     temp: TemperatureConfig, mask_counts, realized=None):
    """Tempered objective: batch NLL plus beta times the KL term.

    Returns (loss, kl, weight_grad_terms).  With beta = 0 the KL term is
    absent from both the value and the gradient: the returned loss is the
    NLL itself and weight_grad_terms is None.
    """
    if temp.beta == 0.0:
        return float(batch_nll), 0.0, None
    pi = np.asarray(realized, dtype=np.float64) if realized is not None \
        else drop_rates.mean_rates()
    kl = kl_term(params, drop_rates, temp, mask_counts, realized=pi)
    s2 = temp.weight_prior_scale ** 2
    wgrads = [temp.beta * (1.0 - pi[l]) / s2 * w for l, w in enumerate(params)]
    return float(batch_nll) + temp.beta * kl, kl, wgrads


# ---------------------------------------------------------------------------
# ARM gradient estimator for drop-rate logits


def arm_gradient_estimate(loss_fn, phi, rng) -> np.ndarray:
    """One-draw ARM estimate of d E_{d ~ Bern(sigmoid(phi))}[loss(d)] / d phi.

    Antithetic construction: a single uniform vector u gives the two
    configurations d1 = 1[u > sigmoid(-phi)] and d2 = 1[u < sigmoid(phi)];
    the per-entry estimate is (loss(d1) - loss(d2)) * (u - 1/2).  Equal
    pseudo-samples give an exactly zero estimate.
    """
    phi = np.asarray(phi, dtype=np.float64)
    u = rng.random(phi.shape)
    d1 = (u > expit(-phi)).astype(np.float64)
    d2 = (u < expit(phi)).astype(np.float64)
    l1 = float(loss_fn(d1))
    l2 = float(loss_fn(d2))
    return (l1 - l2) * (u - 0.5)


def _logit(p):
    return np.log(p) - np.log1p(-p)


def _arm_model_pass(bundle, index, params, config, pi, items, labels, rng,
                    want_weight_grads=True):
    """Two masked NLL evaluations driving ARM for per-layer drop logits.

    Returns (g_phi, loss1, loss2, weight_grads).  g_phi[l] sums the
    per-variable ARM terms of layer l, i.e. the gradient wrt a logit
    shared across that layer's mask variables.
    """
    n_layers = config.num_layers
    e = index.num_directed_edges
    us = [rng.random((e, config.layer_dims[l])) for l in range(n_layers)]
    keep2 = [(us[l] >= pi[l]).astype(np.float64) for l in range(n_layers)]      # 1 - 1[u < pi]
    keep1 = [(us[l] <= 1.0 - pi[l]).astype(np.float64) for l in range(n_layers)]  # 1 - 1[u > 1-pi]

    logits2, cache2 = forward_pass(
        bundle.features, index, params, config, mask_fn=lambda l: keep2[l],
        graph_ids=bundle.graph_ids, num_graphs=bundle.num_graphs, want_cache=True)
    loss2, dlogits = loss_and_logit_grad(logits2, labels, items)
    wgrads = backward_from_logit_grad(cache2, dlogits, 0.0) if want_weight_grads else None

    logits1, _ = forward_pass(
        bundle.features, index, params, config, mask_fn=lambda l: keep1[l],
        graph_ids=bundle.graph_ids, num_graphs=bundle.num_graphs, want_cache=False)
    loss1, _ = loss_and_logit_grad(logits1, labels, items)

    diff = loss1 - loss2
    g_phi = np.array([diff * float(np.sum(us[l] - 0.5)) for l in range(n_layers)])
    return g_phi, loss1, loss2, wgrads


def arm_drop_rate_gradient(model: GdcModel, bundle: GraphBundle, index: NeighborIndex,
                           items, rng) -> np.ndarray:
    """ARM estimate of d(mean NLL)/d(drop-rate logit) per layer.

    Only defined when the model's drop rates are learnable; raises
    DropRateModeError otherwise.  The concrete rates for the draw come
    from the model's posterior.
    """
    if model.drop_rates.mode != MODE_LEARNABLE:
        raise DropRateModeError("ARM gradients require learnable drop rates")
    pi = model.drop_rates.realized(rng)
    labels = bundle.item_labels()
    g_phi, _, _, _ = _arm_model_pass(
        bundle, index, model.params, model.config, pi, items, labels, rng,
        want_weight_grads=False)
    return g_phi


# ---------------------------------------------------------------------------
# training


def train_bayesian(bundle: GraphBundle, split, config: GcnConfig,
                   temp: TemperatureConfig, seed: int, epochs: int, lr: float,
                   drop_rates: DropRateParams, train_mc_samples: int = 1):
    """Adam on the tempered objective with fresh masks every step.

    The data term is the mean NLL over the train items, estimated with
    `train_mc_samples` mask draws per step (default 1).  With learnable
    rates each step also moves the per-layer Kumaraswamy parameters using
    the ARM estimator chained through the rate sample, plus the analytic
    KL gradient.  Returns (GdcModel, log).
    """
    if epochs < 0:
        raise ValueError("epochs must be >= 0")
    if train_mc_samples < 1:
        raise ValueError("train_mc_samples must be >= 1")
    if drop_rates.num_layers != config.num_layers:
        raise ValueError("one drop rate per layer required")
    index = build_neighbor_index(bundle.num_nodes, bundle.edges)
    params = init_params(config, derive_rng(seed, "init"))
    states = [AdamState(lr=lr) for _ in params]
    mask_rng = derive_rng(seed, "train-masks")
    labels = bundle.item_labels()
    mask_counts = mask_variable_counts(index, config)
    e = index.num_directed_edges
    learn = drop_rates.mode == MODE_LEARNABLE
    if learn:
        drop_rates = DropRateParams(mode=MODE_LEARNABLE,
                                    log_a=drop_rates.log_a.copy(),
                                    log_b=drop_rates.log_b.copy())
        rate_rng = derive_rng(seed, "rates")
        state_a = AdamState(lr=lr)
        state_b = AdamState(lr=lr)
    s2 = temp.weight_prior_scale ** 2
    log = {"loss": [], "nll": [], "kl": [], "accuracy": []}

    for epoch in range(epochs):
        if learn:
            a, b = drop_rates.kumaraswamy()
            u_rate = rate_rng.random(a.shape)
            pi_raw = kumaraswamy_sample(a, b, u_rate)
            pi = np.clip(pi_raw, _EPS_RATE, 1.0 - _EPS_RATE)
        else:
            pi = drop_rates.probs

        nll_acc = 0.0
        wgrads = None
        g_phi = np.zeros(config.num_layers) if learn else None
        acc_logits = None
        for _ in range(train_mc_samples):
            if learn:
                gp, _, loss2, wg = _arm_model_pass(
                    bundle, index, params, config, pi, split.train, labels, mask_rng)
                nll_acc += loss2
                g_phi += gp
                draw_logits = None
            else:
                masks = [bernoulli_sample(mask_rng, 1.0 - pi[l], (e, config.layer_dims[l]))
                         for l in range(config.num_layers)]
                logits, cache = forward_pass(
                    bundle.features, index, params, config, mask_fn=lambda l: masks[l],
                    graph_ids=bundle.graph_ids, num_graphs=bundle.num_graphs, want_cache=True)
                data_loss, dlogits = loss_and_logit_grad(logits, labels, split.train)
                wg = backward_from_logit_grad(cache, dlogits, 0.0)
                nll_acc += data_loss
                draw_logits = logits
            wgrads = wg if wgrads is None else [x + y for x, y in zip(wgrads, wg)]
            acc_logits = draw_logits
        nll = nll_acc / train_mc_samples
        wgrads = [g / train_mc_samples for g in wgrads]
        if learn:
            g_phi /= train_mc_samples

        loss, kl, kl_wgrads = free_energy_loss(
            nll, params, drop_rates, temp, mask_counts, realized=pi)
        if kl_wgrads is not None:
            wgrads = [g + kg for g, kg in zip(wgrads, kl_wgrads)]
        if not np.isfinite(loss):
            raise TrainingDivergedError(epoch, "non-finite loss")

        if learn:
            # chain the ARM logit gradient and the weight-term rate
            # sensitivity through the Kumaraswamy sample, add the KL part
            dphi_dpi = 1.0 / (pi * (1.0 - pi))
            dl_dpi = g_phi * dphi_dpi
            if temp.beta > 0.0:
                wsq = np.array([float(np.sum(w * w)) for w in params])
                dl_dpi = dl_dpi - temp.beta * wsq / (2.0 * s2)
            dpi_da = -pi_raw * np.log(np.maximum(pi_raw, 1e-300)) / a
            w_kum = 1.0 - pi_raw ** a
            dpi_db = (pi_raw ** (1.0 - a)) * w_kum * np.log1p(-u_rate) / (a * b * b)
            grad_a = dl_dpi * dpi_da
            grad_b = dl_dpi * dpi_db
            if temp.beta > 0.0:
                for l in range(config.num_layers):
                    dka, dkb = kumaraswamy_beta_kl_grad(
                        float(a[l]), float(b[l]), temp.mask_prior_a, temp.mask_prior_b)
                    grad_a[l] += temp.beta * dka
                    grad_b[l] += temp.beta * dkb
            drop_rates.log_a = adam_step(drop_rates.log_a, grad_a * a, state_a)
            drop_rates.log_b = adam_step(drop_rates.log_b, grad_b * b, state_b)

        params = [adam_step(p, g, s) for p, g, s in zip(params, wgrads, states)]
        log["loss"].append(loss)
        log["nll"].append(nll)
        log["kl"].append(kl)
        if acc_logits is not None:
            log["accuracy"].append(accuracy_from_logits(acc_logits, labels, split.train))
        else:
            log["accuracy"].append(float("nan"))

    return GdcModel(config=config, params=params, drop_rates=drop_rates,
                    temperature=temp), log


# ---------------------------------------------------------------------------
# Monte Carlo prediction


@dataclass(frozen=True)
class PredictiveTable:
    """Per-item class probabilities, rows summing to 1."""

    probs: np.ndarray

    @property
    def num_items(self) -> int:
        return int(self.probs.shape[0])

    @property
    def num_classes(self) -> int:
        return int(self.probs.shape[1])


def predictive_from_logits(logits: np.ndarray) -> PredictiveTable:
    from .numerics import softmax_rows
    return PredictiveTable(probs=softmax_rows(logits))


def mc_predict(model: GdcModel, bundle: GraphBundle, index: NeighborIndex,
               masks: MaskSet) -> PredictiveTable:
    """Average of softmax outputs over the MaskSet's samples.

    Every pass computes all items at once under the same masks, so the
    result for an item never depends on which other items exist in the
    calibration or test partition.
    """
    from .numerics import softmax_rows
    total = None
    for t in range(masks.num_samples):
        logits, _ = gdc_forward(bundle, index, model, masks, t, want_cache=False)
        p = softmax_rows(logits)
        total = p if total is None else total + p
    return PredictiveTable(probs=total / masks.num_samples)


# ---------------------------------------------------------------------------
# checkpoints


def save_model(path, model: GdcModel) -> None:
    extra = {
        "kind": "gdc",
        "beta": model.temperature.beta,
        "weight_prior_scale": model.temperature.weight_prior_scale,
        "mask_prior_a": model.temperature.mask_prior_a,
        "mask_prior_b": model.temperature.mask_prior_b,
        "drop_mode": model.drop_rates.mode,
    }
    if model.drop_rates.mode == MODE_FIXED:
        extra["drop_probs"] = [float(x) for x in model.drop_rates.probs]
    else:
        extra["drop_log_a"] = [float(x) for x in model.drop_rates.log_a]
        extra["drop_log_b"] = [float(x) for x in model.drop_rates.log_b]
    save_checkpoint(path, model.config, model.params, extra=extra)


def load_model(path) -> GdcModel:
    config, params, meta = load_checkpoint(path)
    if meta.get("kind") != "gdc":
        raise ValueError(f"{path}: not a Bayesian model checkpoint")
    temp = TemperatureConfig(
        beta=float(meta["beta"]),
        weight_prior_scale=float(meta["weight_prior_scale"]),
        mask_prior_a=float(meta["mask_prior_a"]),
        mask_prior_b=float(meta["mask_prior_b"]),
    )
    if meta["drop_mode"] == MODE_FIXED:
        rates = DropRateParams.fixed(meta["drop_probs"])
    else:
        rates = DropRateParams(
            mode=MODE_LEARNABLE,
            log_a=np.asarray(meta["drop_log_a"], dtype=np.float64),
            log_b=np.asarray(meta["drop_log_b"], dtype=np.float64),
        )
    return GdcModel(config=config, params=params, drop_rates=rates, temperature=temp)
