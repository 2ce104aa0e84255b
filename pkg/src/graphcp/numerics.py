"""Dense float64 kernels: matrix product, softmax, Adam, seeded sampling.

Everything here operates on 2-D numpy arrays of dtype float64.  Randomness
always flows through an explicitly seeded PCG64 generator, so any sample
stream is reproducible bit for bit from (seed, call order) under a fixed
numpy version.  PCG64 is the one generator used by the whole package.

`matmul` deliberately avoids BLAS: it accumulates rank-1 updates with the
contraction index ascending, which reproduces the classic triple loop
exactly (BLAS kernels fuse multiply-add and are not bit-stable against
that reference).  At the graph sizes this package targets the cost is
negligible next to the neighborhood aggregation.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

# A "matrix" throughout this package is a 2-D float64 ndarray.
Matrix = np.ndarray


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator seeded from a single integer."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _label_key(labels) -> tuple[int, ...]:
    key = []
    for lab in labels:
        if isinstance(lab, str):
            key.append(zlib.crc32(lab.encode("utf-8")))
        else:
            key.append(int(lab))
    return tuple(key)


def derive_rng(seed: int, *labels) -> np.random.Generator:
    """Independent, reproducible substream identified by (seed, labels).

    String labels are hashed with crc32, integers are used as-is; the tuple
    becomes a SeedSequence spawn key.  Distinct label paths give distinct
    streams, identical paths give identical streams.
    """
    ss = np.random.SeedSequence(seed, spawn_key=_label_key(labels))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *labels) -> int:
    """Single integer seed derived from (seed, labels), same scheme as derive_rng."""
    ss = np.random.SeedSequence(seed, spawn_key=_label_key(labels))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product with the contraction index accumulated in ascending order.

    Bit-identical to the naive triple loop on every shape.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError(f"matmul expects 2-D operands, got {a.ndim}-D and {b.ndim}-D")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul inner dimensions differ: {a.shape} x {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]))
    for t in range(a.shape[1]):
        out += a[:, t : t + 1] * b[t : t + 1, :]
    return out


def softmax_rows(logits: Matrix) -> Matrix:
    """Row-wise softmax with max subtraction; rows sum to 1 within 1e-12."""
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax_rows(logits: Matrix) -> Matrix:
    """Row-wise log-softmax, stable for extreme logits."""
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


@dataclass
class AdamState:
    """Adam optimizer state for one parameter matrix.

    Moments start at zero and are bias-corrected by step count; `step`
    increases by exactly one per update.
    """

    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: Matrix | None = None
    v: Matrix | None = None


def adam_step(params: Matrix, grads: Matrix, state: AdamState) -> Matrix:
    """One Adam update.  Returns new params; advances `state` in place."""
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if params.shape != grads.shape:
        raise ValueError(f"param/grad shapes differ: {params.shape} vs {grads.shape}")
    if state.m is None:
        state.m = np.zeros_like(params)
        state.v = np.zeros_like(params)
    elif state.m.shape != params.shape:
        raise ValueError(f"state buffers {state.m.shape} do not match params {params.shape}")
    state.step += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * (grads * grads)
    m_hat = state.m / (1.0 - state.beta1 ** state.step)
    v_hat = state.v / (1.0 - state.beta2 ** state.step)
    return params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)


def bernoulli_sample(rng: np.random.Generator, p: float, shape) -> Matrix:
    """0/1 float64 array with independent P(entry = 1) = p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"bernoulli probability must lie in [0, 1], got {p}")
    return (rng.random(shape) < p).astype(np.float64)


def glorot_init(rng: np.random.Generator, rows: int, cols: int) -> Matrix:
    """Uniform init on [-a, a] with a = sqrt(6 / (rows + cols))."""
    if rows <= 0 or cols <= 0:
        raise ValueError(f"glorot_init needs positive dims, got {rows}x{cols}")
    bound = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-bound, bound, size=(rows, cols))


def require_finite(x: Matrix | float, what: str) -> None:
    if not np.all(np.isfinite(x)):
        raise FloatingPointError(f"non-finite values in {what}")
