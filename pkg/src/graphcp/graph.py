"""Graph bundles, on-disk format, synthetic generators, and splits.

A bundle directory holds a dataset in a plain, language-neutral layout
(UTF-8, LF line endings, '.' decimal separator, no headers):

    meta.json       {"name", "task", "num_nodes", "num_classes",
                     "feature_dim"[, "num_graphs"]}
    edges.csv       two integer columns, one undirected edge per row
    features.csv    one row per node, feature_dim float columns
    labels.csv      one integer label per node
    graph_index.csv     (graph tasks) one graph id per node
    graph_labels.csv    (graph tasks) one integer label per graph

Edges are symmetrized on load; duplicates and self-loops are dropped, so
in memory every edge appears exactly once with u < v.  Isolated nodes are
legal.  For graph-classification bundles each node additionally carries
the id of the graph it belongs to, and splitting operates on graph ids
rather than node ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .numerics import make_rng

TASK_NODE = "node-classification"
TASK_GRAPH = "graph-classification"
_TASKS = (TASK_NODE, TASK_GRAPH)


class BundleError(ValueError):
    """Base class for bundle validation failures."""


class BundleMissingFile(BundleError):
    pass


class BundleMalformed(BundleError):
    """Wrong shape, non-numeric cell, or broken meta.json."""


class BundleIndexError(BundleError):
    """Edge endpoint or graph id out of range."""


class BundleLabelError(BundleError):
    """Label outside [0, num_classes)."""


@dataclass
class GraphBundle:
    num_nodes: int
    edges: np.ndarray        # (E, 2) int64, canonical: unique, u < v
    features: np.ndarray     # (N, f) float64
    labels: np.ndarray       # (N,) int64
    num_classes: int
    task: str = TASK_NODE
    name: str = "unnamed"
    graph_ids: np.ndarray | None = None      # (N,) int64, graph tasks only
    graph_labels: np.ndarray | None = None   # (G,) int64, graph tasks only

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def num_graphs(self) -> int:
        if self.task != TASK_GRAPH:
            return 0
        return int(self.graph_labels.shape[0])

    @property
    def num_items(self) -> int:
        """Number of units eligible for train/cal/test splitting."""
        return self.num_graphs if self.task == TASK_GRAPH else self.num_nodes

    def item_labels(self) -> np.ndarray:
        """Label per splittable item (node labels or graph labels)."""
        return self.graph_labels if self.task == TASK_GRAPH else self.labels

    def validate(self) -> None:
        n = self.num_nodes
        if self.task not in _TASKS:
            raise BundleMalformed(f"unknown task {self.task!r}")
        if self.features.shape[0] != n:
            raise BundleMalformed(
                f"features has {self.features.shape[0]} rows, expected {n}")
        if self.labels.shape != (n,):
            raise BundleMalformed(f"labels has shape {self.labels.shape}, expected ({n},)")
        if self.num_classes < 2:
            raise BundleMalformed(f"need at least 2 classes, got {self.num_classes}")
        if self.edges.size and (self.edges.min() < 0 or self.edges.max() >= n):
            bad = int(np.argmax((self.edges < 0) | (self.edges >= n)) // 2)
            raise BundleIndexError(f"edge row {bad} references a node outside [0, {n})")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            bad = int(np.argmax((self.labels < 0) | (self.labels >= self.num_classes)))
            raise BundleLabelError(
                f"label {int(self.labels[bad])} at node {bad} outside [0, {self.num_classes})")
        if self.task == TASK_GRAPH:
            if self.graph_ids is None or self.graph_labels is None:
                raise BundleMalformed("graph task requires graph_ids and graph_labels")
            g = self.graph_labels.shape[0]
            if self.graph_ids.shape != (n,):
                raise BundleMalformed("graph_ids must hold one id per node")
            if self.graph_ids.size and (self.graph_ids.min() < 0 or self.graph_ids.max() >= g):
                raise BundleIndexError("graph id outside [0, num_graphs)")
            if self.graph_labels.min() < 0 or self.graph_labels.max() >= self.num_classes:
                raise BundleLabelError("graph label outside [0, num_classes)")
            sizes = np.bincount(self.graph_ids, minlength=g)
            if np.any(sizes == 0):
                raise BundleMalformed(f"graph {int(np.argmax(sizes == 0))} has no nodes")


def normalize_edges(num_nodes: int, edges) -> np.ndarray:
    """Canonical undirected edge list: symmetrized, deduplicated, no self-loops.

    Accepts any (E, 2) integer array, directed or not, and returns unique
    rows with u < v in lexicographic order.
    """
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if e.size and (e.min() < 0 or e.max() >= num_nodes):
        bad = int(np.argmax((e < 0) | (e >= num_nodes)) // 2)
        raise BundleIndexError(f"edge row {bad} references a node outside [0, {num_nodes})")
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    keep = lo != hi
    if not np.any(keep):
        return np.zeros((0, 2), dtype=np.int64)
    return np.unique(np.stack([lo[keep], hi[keep]], axis=1), axis=0)


# ---------------------------------------------------------------------------
# neighborhood index and aggregation kernels


@dataclass(frozen=True)
class NeighborIndex:
    """Directed-edge layout for mean-over-neighborhood aggregation.

    Holds every directed edge (dst, src) including one self-pair per node,
    sorted by (dst, src).  `c` counts incoming messages per node, i.e.
    degree + 1.  `src_order`/`src_offsets` give the same edges regrouped by
    source, which is the adjoint traversal used by backprop.
    """

    num_nodes: int
    neighbors: tuple          # per-node sorted neighbor arrays (self excluded)
    c: np.ndarray             # (N,) float64, degree + 1
    edge_dst: np.ndarray      # (E_dir,) int64
    edge_src: np.ndarray      # (E_dir,) int64
    dst_offsets: np.ndarray   # (N,) segment starts into edge_* arrays
    src_order: np.ndarray     # permutation sorting edges by src
    src_offsets: np.ndarray   # (N,) segment starts into the src-sorted view

    @property
    def num_directed_edges(self) -> int:
        return int(self.edge_dst.size)


def build_neighbor_index(num_nodes: int, edges) -> NeighborIndex:
    edges = normalize_edges(num_nodes, edges)
    ar = np.arange(num_nodes, dtype=np.int64)
    dst = np.concatenate([edges[:, 0], edges[:, 1], ar])
    src = np.concatenate([edges[:, 1], edges[:, 0], ar])
    order = np.lexsort((src, dst))
    dst = dst[order]
    src = src[order]
    dst_offsets = np.searchsorted(dst, ar, side="left")
    counts = np.diff(np.append(dst_offsets, dst.size))
    src_order = np.argsort(src, kind="stable")
    src_offsets = np.searchsorted(src[src_order], ar, side="left")
    ends = np.append(dst_offsets[1:], dst.size)
    neighbors = tuple(
        src[dst_offsets[i]:ends[i]][src[dst_offsets[i]:ends[i]] != i]
        for i in range(num_nodes)
    )
    return NeighborIndex(
        num_nodes=num_nodes,
        neighbors=neighbors,
        c=counts.astype(np.float64),
        edge_dst=dst,
        edge_src=src,
        dst_offsets=dst_offsets,
        src_order=src_order,
        src_offsets=src_offsets,
    )


def aggregate_mean(index: NeighborIndex, messages: np.ndarray) -> np.ndarray:
    """Mean over incoming messages per destination node.

    `messages` has one row per directed edge in index order; the self-pair
    row carries the node's own message, so the result for node v is
    (1/c_v) * sum of messages into v.
    """
    sums = np.add.reduceat(messages, index.dst_offsets, axis=0)
    return sums / index.c[:, None]


def scatter_to_sources(index: NeighborIndex, per_edge: np.ndarray) -> np.ndarray:
    """Sum per-edge rows (in index order) into their source nodes; adjoint of gather."""
    ordered = per_edge[index.src_order]
    return np.add.reduceat(ordered, index.src_offsets, axis=0)


# ---------------------------------------------------------------------------
# splits


@dataclass(frozen=True)
class SplitSpec:
    """Disjoint train / calibration / test item indices plus the seed used."""

    train: np.ndarray
    calibration: np.ndarray
    test: np.ndarray
    seed: int

    def validate(self, num_items: int) -> None:
        parts = [self.train, self.calibration, self.test]
        allidx = np.concatenate(parts) if num_items else np.zeros(0, dtype=np.int64)
        if allidx.size:
            if allidx.min() < 0 or allidx.max() >= num_items:
                raise ValueError(f"split index outside [0, {num_items})")
            if np.unique(allidx).size != allidx.size:
                raise ValueError("train/calibration/test sets overlap")


def resample_split(
    bundle: GraphBundle,
    n_train: int,
    n_cal: int,
    n_test: int,
    seed: int,
    train_indices: np.ndarray | None = None,
) -> SplitSpec:
    """Uniformly random disjoint split over the bundle's items.

    When `train_indices` is given the train set is pinned and only the
    calibration/test partition of the remaining pool is redrawn, which is
    the cheap per-trial path.  n_cal = 0 is legal.
    """
    pop = bundle.num_items
    rng = make_rng(seed)
    if train_indices is not None:
        train = np.asarray(train_indices, dtype=np.int64)
        if train.size and (train.min() < 0 or train.max() >= pop):
            raise ValueError(f"train index outside [0, {pop})")
        if np.unique(train).size != train.size:
            raise ValueError("duplicate train indices")
        mask = np.ones(pop, dtype=bool)
        mask[train] = False
        pool = rng.permutation(np.flatnonzero(mask))
    else:
        perm = rng.permutation(pop)
        train = perm[:n_train]
        pool = perm[n_train:]
    if n_cal < 0 or n_test <= 0:
        raise ValueError("need n_cal >= 0 and n_test >= 1")
    if n_cal + n_test > pool.size:
        raise ValueError(
            f"cannot draw {n_cal} + {n_test} items from a pool of {pool.size}")
    spec = SplitSpec(
        train=train,
        calibration=pool[:n_cal],
        test=pool[n_cal:n_cal + n_test],
        seed=seed,
    )
    spec.validate(pop)
    return spec


# ---------------------------------------------------------------------------
# synthetic generators


def generate_sbm(
    seed: int,
    communities: int,
    nodes_per_community: int,
    p_in: float,
    p_out: float,
    feature_noise: float,
    label_noise: float = 0.0,
    name: str = "sbm",
) -> GraphBundle:
    """Stochastic block model with one community per class.

    Node features are the one-hot community indicator plus iid Gaussian
    noise of scale `feature_noise`.  With `label_noise` > 0 that fraction
    of observed labels is independently resampled uniformly over all
    classes while edges and features still follow the true community, so
    the noise is irreducible.
    """
    if communities < 2 or nodes_per_community < 1:
        raise ValueError("need >= 2 communities and >= 1 node each")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise ValueError(f"need 0 <= p_out <= p_in <= 1, got p_in={p_in} p_out={p_out}")
    if not 0.0 <= label_noise <= 1.0:
        raise ValueError(f"label_noise must lie in [0, 1], got {label_noise}")
    rng = make_rng(seed)
    n = communities * nodes_per_community
    block = np.repeat(np.arange(communities, dtype=np.int64), nodes_per_community)

    iu, iv = np.triu_indices(n, k=1)
    p_edge = np.where(block[iu] == block[iv], p_in, p_out)
    hit = rng.random(iu.size) < p_edge
    edges = np.stack([iu[hit], iv[hit]], axis=1).astype(np.int64)

    features = np.eye(communities)[block]
    if feature_noise > 0.0:
        features = features + feature_noise * rng.normal(size=features.shape)

    labels = block.copy()
    if label_noise > 0.0:
        flip = rng.random(n) < label_noise
        labels[flip] = rng.integers(0, communities, size=int(flip.sum()))

    bundle = GraphBundle(
        num_nodes=n,
        edges=normalize_edges(n, edges),
        features=features,
        labels=labels,
        num_classes=communities,
        task=TASK_NODE,
        name=name,
    )
    bundle.validate()
    return bundle


def generate_graph_dataset(
    seed: int,
    num_graphs: int,
    nodes_per_graph: int,
    num_classes: int,
    edge_p: float,
    feature_noise: float,
    name: str = "synthetic-graphs",
) -> GraphBundle:
    """Small graph-classification dataset: per-graph class signal in the features."""
    if num_graphs < 2 or nodes_per_graph < 1 or num_classes < 2:
        raise ValueError("need >= 2 graphs, >= 1 node each, >= 2 classes")
    rng = make_rng(seed)
    glabels = rng.integers(0, num_classes, size=num_graphs)
    n = num_graphs * nodes_per_graph
    gids = np.repeat(np.arange(num_graphs, dtype=np.int64), nodes_per_graph)
    feats = np.eye(num_classes)[glabels[gids]]
    if feature_noise > 0.0:
        feats = feats + feature_noise * rng.normal(size=feats.shape)
    rows = []
    for g in range(num_graphs):
        base = g * nodes_per_graph
        iu, iv = np.triu_indices(nodes_per_graph, k=1)
        hit = rng.random(iu.size) < edge_p
        if np.any(hit):
            rows.append(np.stack([iu[hit] + base, iv[hit] + base], axis=1))
    edges = np.concatenate(rows, axis=0) if rows else np.zeros((0, 2), dtype=np.int64)
    bundle = GraphBundle(
        num_nodes=n,
        edges=normalize_edges(n, edges),
        features=feats,
        labels=glabels[gids].astype(np.int64),
        num_classes=num_classes,
        task=TASK_GRAPH,
        name=name,
        graph_ids=gids,
        graph_labels=glabels.astype(np.int64),
    )
    bundle.validate()
    return bundle


# ---------------------------------------------------------------------------
# on-disk bundle format


def save_bundle(bundle: GraphBundle, path) -> None:
    """Write the bundle directory; floats keep full round-trip precision."""
    bundle.validate()
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    meta = {
        "name": bundle.name,
        "task": bundle.task,
        "num_nodes": bundle.num_nodes,
        "num_classes": bundle.num_classes,
        "feature_dim": bundle.feature_dim,
    }
    if bundle.task == TASK_GRAPH:
        meta["num_graphs"] = bundle.num_graphs
    (p / "meta.json").write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    with open(p / "edges.csv", "w", encoding="utf-8", newline="\n") as fh:
        for u, v in bundle.edges:
            fh.write(f"{int(u)},{int(v)}\n")
    with open(p / "features.csv", "w", encoding="utf-8", newline="\n") as fh:
        for row in bundle.features:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    with open(p / "labels.csv", "w", encoding="utf-8", newline="\n") as fh:
        for y in bundle.labels:
            fh.write(f"{int(y)}\n")
    if bundle.task == TASK_GRAPH:
        with open(p / "graph_index.csv", "w", encoding="utf-8", newline="\n") as fh:
            for g in bundle.graph_ids:
                fh.write(f"{int(g)}\n")
        with open(p / "graph_labels.csv", "w", encoding="utf-8", newline="\n") as fh:
            for y in bundle.graph_labels:
                fh.write(f"{int(y)}\n")


def _open_required(p: Path) -> str:
    if not p.is_file():
        raise BundleMissingFile(f"missing bundle file: {p}")
    return p.read_text(encoding="utf-8")


def _parse_int_rows(p: Path, cols: int) -> np.ndarray:
    text = _open_required(p)
    out = []
    for ln, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != cols:
            raise BundleMalformed(f"{p.name}:{ln}: expected {cols} columns, got {len(parts)}")
        try:
            out.append([int(x) for x in parts])
        except ValueError:
            raise BundleMalformed(f"{p.name}:{ln}: non-integer value") from None
    arr = np.asarray(out, dtype=np.int64).reshape(-1, cols)
    return arr[:, 0] if cols == 1 else arr


def _parse_float_rows(p: Path, cols: int) -> np.ndarray:
    text = _open_required(p)
    rows = []
    for ln, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = np.array(line.split(","), dtype=np.float64)
        except ValueError:
            raise BundleMalformed(f"{p.name}:{ln}: non-numeric value") from None
        if row.size != cols:
            raise BundleMalformed(f"{p.name}:{ln}: expected {cols} columns, got {row.size}")
        rows.append(row)
    if not rows:
        return np.zeros((0, cols))
    return np.stack(rows, axis=0)


def load_bundle(path) -> GraphBundle:
    """Read and validate a bundle directory.

    Raises BundleMissingFile / BundleMalformed / BundleIndexError /
    BundleLabelError with file and line context.
    """
    p = Path(path)
    if not p.is_dir():
        raise BundleMissingFile(f"bundle directory not found: {p}")
    try:
        meta = json.loads(_open_required(p / "meta.json"))
    except json.JSONDecodeError as e:
        raise BundleMalformed(f"meta.json: invalid JSON ({e})") from None
    for key in ("name", "task", "num_nodes", "num_classes", "feature_dim"):
        if key not in meta:
            raise BundleMalformed(f"meta.json: missing field {key!r}")
    task = meta["task"]
    if task not in _TASKS:
        raise BundleMalformed(f"meta.json: unknown task {task!r}")
    n = int(meta["num_nodes"])
    num_classes = int(meta["num_classes"])
    feature_dim = int(meta["feature_dim"])

    raw_edges = _parse_int_rows(p / "edges.csv", cols=2)
    features = _parse_float_rows(p / "features.csv", cols=feature_dim)
    labels = _parse_int_rows(p / "labels.csv", cols=1)

    if features.shape[0] != n:
        raise BundleMalformed(f"features.csv: {features.shape[0]} rows, meta says {n} nodes")
    if labels.shape[0] != n:
        raise BundleMalformed(f"labels.csv: {labels.shape[0]} rows, meta says {n} nodes")
    if raw_edges.size:
        bad = (raw_edges < 0) | (raw_edges >= n)
        if np.any(bad):
            ln = int(np.argmax(np.any(bad, axis=1))) + 1
            raise BundleIndexError(f"edges.csv:{ln}: endpoint outside [0, {n})")
    if labels.size:
        bad = (labels < 0) | (labels >= num_classes)
        if np.any(bad):
            ln = int(np.argmax(bad)) + 1
            raise BundleLabelError(f"labels.csv:{ln}: label outside [0, {num_classes})")

    graph_ids = None
    graph_labels = None
    if task == TASK_GRAPH:
        graph_ids = _parse_int_rows(p / "graph_index.csv", cols=1)
        graph_labels = _parse_int_rows(p / "graph_labels.csv", cols=1)
        g = graph_labels.shape[0]
        if "num_graphs" in meta and int(meta["num_graphs"]) != g:
            raise BundleMalformed(
                f"graph_labels.csv: {g} rows, meta says {meta['num_graphs']} graphs")
        if graph_ids.shape[0] != n:
            raise BundleMalformed(f"graph_index.csv: {graph_ids.shape[0]} rows, expected {n}")
        if graph_ids.size:
            bad = (graph_ids < 0) | (graph_ids >= g)
            if np.any(bad):
                ln = int(np.argmax(bad)) + 1
                raise BundleIndexError(f"graph_index.csv:{ln}: graph id outside [0, {g})")
        if graph_labels.size:
            bad = (graph_labels < 0) | (graph_labels >= num_classes)
            if np.any(bad):
                ln = int(np.argmax(bad)) + 1
                raise BundleLabelError(f"graph_labels.csv:{ln}: label outside [0, {num_classes})")

    bundle = GraphBundle(
        num_nodes=n,
        edges=normalize_edges(n, raw_edges),
        features=features,
        labels=labels.astype(np.int64),
        num_classes=num_classes,
        task=task,
        name=str(meta["name"]),
        graph_ids=graph_ids,
        graph_labels=graph_labels,
    )
    bundle.validate()
    return bundle
