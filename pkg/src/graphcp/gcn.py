"""Graph convolutional network with mean-over-neighborhood aggregation.

Layer rule: the new state of node v is act((1/c_v) * sum of incoming
states over N(v) and v itself, times the layer weight), with c_v =
degree(v) + 1.  Hidden layers use ReLU, the final layer is linear.  For
graph-level tasks a mean or sum readout pools node logits per graph.

The forward/backward core is shared with the mask-dropping Bayesian
variant; a pass with all-ones masks runs the identical floating-point
program, which keeps the two pipelines bit-comparable.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph import (
    TASK_GRAPH,
    GraphBundle,
    NeighborIndex,
    aggregate_mean,
    build_neighbor_index,
    scatter_to_sources,
)
from .numerics import (
    AdamState,
    adam_step,
    derive_rng,
    glorot_init,
    log_softmax_rows,
    matmul,
)

_READOUTS = ("none", "mean", "sum")


class TrainingDivergedError(RuntimeError):
    """Loss or parameters became non-finite during training."""

    def __init__(self, epoch: int, detail: str = ""):
        self.epoch = epoch
        super().__init__(f"training diverged at epoch {epoch}" + (f": {detail}" if detail else ""))


@dataclass
class GcnConfig:
    """Architecture plus frequentist regularization knobs.

    layer_dims runs input -> hidden -> ... -> classes; readout "none" is
    the node-classification setting, "mean"/"sum" pool per graph.
    """

    layer_dims: tuple
    readout: str = "none"
    weight_decay: float = 0.0
    dropout_rate: float = 0.0

    def __post_init__(self):
        self.layer_dims = tuple(int(d) for d in self.layer_dims)
        if len(self.layer_dims) < 2:
            raise ValueError("layer_dims needs at least input and output dims")
        if any(d < 1 for d in self.layer_dims):
            raise ValueError(f"layer dims must be positive, got {self.layer_dims}")
        if self.readout not in _READOUTS:
            raise ValueError(f"readout must be one of {_READOUTS}, got {self.readout!r}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must lie in [0, 1), got {self.dropout_rate}")
        if self.weight_decay < 0.0:
            raise ValueError("weight_decay must be >= 0")

    @property
    def num_layers(self) -> int:
        return len(self.layer_dims) - 1


def init_params(config: GcnConfig, rng) -> list:
    """Glorot-uniform weights, one matrix per layer, drawn in layer order."""
    return [
        glorot_init(rng, config.layer_dims[l], config.layer_dims[l + 1])
        for l in range(config.num_layers)
    ]


@dataclass
class ForwardCache:
    """Everything backward needs: per-layer inputs, aggregates, preactivations."""

    index: NeighborIndex
    params: list
    config: GcnConfig
    inputs: list              # H_l fed into layer l (after activation/dropout)
    aggregated: list          # (1/c) sum of (masked) messages, per layer
    preact: list              # aggregated @ W, per layer
    layer_masks: list | None  # per-layer (E_dir, f_l) 0/1 masks, or None
    dropout_masks: list       # per hidden layer: keep mask or None
    graph_ids: np.ndarray | None
    num_graphs: int
    node_logits: np.ndarray
    logits: np.ndarray        # after readout (== node_logits for node tasks)


def _readout(node_vals, graph_ids, num_graphs, kind):
    order = np.argsort(graph_ids, kind="stable")
    offsets = np.searchsorted(graph_ids[order], np.arange(num_graphs), side="left")
    sums = np.add.reduceat(node_vals[order], offsets, axis=0)
    if kind == "sum":
        return sums
    counts = np.diff(np.append(offsets, graph_ids.size)).astype(np.float64)
    return sums / counts[:, None]


def _readout_backward(dgraph, graph_ids, num_graphs, kind):
    if kind == "sum":
        return dgraph[graph_ids]
    counts = np.bincount(graph_ids, minlength=num_graphs).astype(np.float64)
    return dgraph[graph_ids] / counts[graph_ids][:, None]


def forward_pass(
    features: np.ndarray,
    index: NeighborIndex,
    params: list,
    config: GcnConfig,
    *,
    mask_fn=None,
    dropout_rng=None,
    graph_ids=None,
    num_graphs: int = 0,
    want_cache: bool = True,
):
    """Shared forward core.

    mask_fn, when given, returns the (E_dir, f_l) 0/1 mask for layer l;
    messages are multiplied by it before aggregation.  Dropout applies to
    hidden activations only when both a rate and an rng are provided.
    """
    n_layers = len(params)
    h = np.asarray(features, dtype=np.float64)
    inputs, aggregated, preact, masks_used, drop_masks = [], [], [], [], []
    use_dropout = config.dropout_rate > 0.0 and dropout_rng is not None
    for l, w in enumerate(params):
        msgs = h[index.edge_src]
        if mask_fn is not None:
            z = mask_fn(l)
            msgs = msgs * z
            if want_cache:
                masks_used.append(z)
        agg = aggregate_mean(index, msgs)
        z_pre = matmul(agg, w)
        if want_cache:
            inputs.append(h)
            aggregated.append(agg)
            preact.append(z_pre)
        if l < n_layers - 1:
            h = np.maximum(z_pre, 0.0)
            if use_dropout:
                keep = dropout_rng.random(h.shape) >= config.dropout_rate
                h = h * keep / (1.0 - config.dropout_rate)
                drop_masks.append(keep)
            else:
                drop_masks.append(None)
        else:
            h = z_pre
    node_logits = h
    if config.readout != "none":
        logits = _readout(node_logits, graph_ids, num_graphs, config.readout)
    else:
        logits = node_logits
    if not want_cache:
        return logits, None
    cache = ForwardCache(
        index=index,
        params=params,
        config=config,
        inputs=inputs,
        aggregated=aggregated,
        preact=preact,
        layer_masks=masks_used if mask_fn is not None else None,
        dropout_masks=drop_masks,
        graph_ids=graph_ids,
        num_graphs=num_graphs,
        node_logits=node_logits,
        logits=logits,
    )
    return logits, cache


def gcn_forward(bundle: GraphBundle, index: NeighborIndex, params: list,
                config: GcnConfig, *, dropout_rng=None, want_cache: bool = True):
    """Deterministic forward over the whole bundle; returns (logits, cache)."""
    return forward_pass(
        bundle.features, index, params, config,
        dropout_rng=dropout_rng,
        graph_ids=bundle.graph_ids,
        num_graphs=bundle.num_graphs,
        want_cache=want_cache,
    )


def loss_and_logit_grad(logits: np.ndarray, labels: np.ndarray, items: np.ndarray):
    """Mean cross-entropy over `items` and its gradient wrt the logits.

    Empty item sets are legal: loss 0, zero gradient.
    """
    items = np.asarray(items, dtype=np.int64)
    grad = np.zeros_like(logits)
    if items.size == 0:
        return 0.0, grad
    logp = log_softmax_rows(logits[items])
    picked = labels[items]
    loss = -float(logp[np.arange(items.size), picked].mean())
    g = np.exp(logp)
    g[np.arange(items.size), picked] -= 1.0
    grad[items] = g / items.size
    return loss, grad


def gcn_backward(cache: ForwardCache, labels: np.ndarray, train_items: np.ndarray,
                 weight_decay: float = 0.0) -> list:
    """Exact gradients of mean cross-entropy (+ 0.5 * wd * ||W||^2) per layer."""
    _, dlogits = loss_and_logit_grad(cache.logits, labels, train_items)
    return backward_from_logit_grad(cache, dlogits, weight_decay)


def backward_from_logit_grad(cache: ForwardCache, dlogits: np.ndarray,
                             weight_decay: float = 0.0) -> list:
    index = cache.index
    config = cache.config
    n_layers = len(cache.params)
    if config.readout != "none":
        g = _readout_backward(dlogits, cache.graph_ids, cache.num_graphs, config.readout)
    else:
        g = dlogits
    grads = [None] * n_layers
    for l in range(n_layers - 1, -1, -1):
        # g is dLoss/dpreact[l] once the activation derivative is applied
        if l < n_layers - 1:
            g = g * (cache.preact[l] > 0.0)
        grads[l] = matmul(cache.aggregated[l].T, g)
        if weight_decay:
            grads[l] = grads[l] + weight_decay * cache.params[l]
        if l > 0:
            da = matmul(g, cache.params[l].T)
            per_edge = da[index.edge_dst] / index.c[index.edge_dst][:, None]
            if cache.layer_masks is not None:
                per_edge = per_edge * cache.layer_masks[l]
            g = scatter_to_sources(index, per_edge)
            dm = cache.dropout_masks[l - 1]
            if dm is not None:
                g = g * dm / (1.0 - config.dropout_rate)
    return grads


def weight_norm_sq(params: list) -> float:
    return float(sum(np.sum(w * w) for w in params))


def accuracy_from_logits(logits: np.ndarray, labels: np.ndarray, items: np.ndarray) -> float:
    items = np.asarray(items, dtype=np.int64)
    if items.size == 0:
        return float("nan")
    pred = np.argmax(logits[items], axis=1)
    return float(np.mean(pred == labels[items]))


def train_frequentist(bundle: GraphBundle, split, config: GcnConfig, seed: int,
                      epochs: int, lr: float):
    """Full-batch Adam training of the deterministic network.

    Loss is mean cross-entropy over the train items plus
    0.5 * weight_decay * sum ||W||^2.  Returns (params, log); epochs = 0
    returns the untouched initialization.  Raises TrainingDivergedError on
    non-finite loss.
    """
    if epochs < 0:
        raise ValueError("epochs must be >= 0")
    index = build_neighbor_index(bundle.num_nodes, bundle.edges)
    params = init_params(config, derive_rng(seed, "init"))
    states = [AdamState(lr=lr) for _ in params]
    dropout_rng = derive_rng(seed, "dropout") if config.dropout_rate > 0.0 else None
    labels = bundle.item_labels()
    log = {"loss": [], "accuracy": []}
    for epoch in range(epochs):
        logits, cache = gcn_forward(bundle, index, params, config, dropout_rng=dropout_rng)
        data_loss, dlogits = loss_and_logit_grad(logits, labels, split.train)
        loss = data_loss
        if config.weight_decay:
            loss = loss + 0.5 * config.weight_decay * weight_norm_sq(params)
        if not np.isfinite(loss):
            raise TrainingDivergedError(epoch, "non-finite loss")
        grads = backward_from_logit_grad(cache, dlogits, config.weight_decay)
        params = [adam_step(p, g, s) for p, g, s in zip(params, grads, states)]
        log["loss"].append(loss)
        log["accuracy"].append(accuracy_from_logits(logits, labels, split.train))
    return params, log


# ---------------------------------------------------------------------------
# checkpoints: meta.json + one little-endian f64 blob per layer

_MAGIC = b"GCPW"


def _write_layer(path: Path, w: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQ", w.shape[0], w.shape[1]))
        fh.write(np.ascontiguousarray(w, dtype="<f8").tobytes())


def _read_layer(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    if raw[:4] != _MAGIC:
        raise ValueError(f"{path.name}: not a weight file")
    rows, cols = struct.unpack("<QQ", raw[4:20])
    data = np.frombuffer(raw[20:], dtype="<f8")
    if data.size != rows * cols:
        raise ValueError(f"{path.name}: payload size does not match {rows}x{cols} header")
    return data.reshape(rows, cols).astype(np.float64)


def save_checkpoint(path, config: GcnConfig, params: list, extra: dict | None = None) -> None:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    meta = {
        "kind": "gcn",
        "layer_dims": list(config.layer_dims),
        "readout": config.readout,
        "weight_decay": config.weight_decay,
        "dropout_rate": config.dropout_rate,
        "num_layers": len(params),
    }
    if extra:
        meta.update(extra)
    (p / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n",
                                 encoding="utf-8")
    for l, w in enumerate(params):
        _write_layer(p / f"layer_{l:03d}.bin", w)


def load_checkpoint(path):
    p = Path(path)
    meta = json.loads((p / "meta.json").read_text(encoding="utf-8"))
    config = GcnConfig(
        layer_dims=tuple(meta["layer_dims"]),
        readout=meta.get("readout", "none"),
        weight_decay=float(meta.get("weight_decay", 0.0)),
        dropout_rate=float(meta.get("dropout_rate", 0.0)),
    )
    params = [_read_layer(p / f"layer_{l:03d}.bin") for l in range(int(meta["num_layers"]))]
    return config, params, meta
