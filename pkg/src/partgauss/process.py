"""The stationary sequence Y_n = X_{n,k} + X_{n+1,k-1} + ... + X_{n+k-1,1}.

X_{n,.} are i.i.d. draws of the perturbed Gaussian law, addressed by the
signed vector index n through a counter-based Philox stream. Y_n therefore
reads vectors n..n+k-1, taking coordinate k-j (1-based) from vector n+j.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from ._backend import kernels
from .dist import PerturbedGaussianParams, seed_key
from .errors import InvalidInputError, SamplerError

__all__ = [
    "PathSegment",
    "VectorSource",
    "VectorStream",
    "generate_segment",
    "sliding_products",
    "vector_at",
    "window_samples",
]


class VectorSource(Protocol):
    k: int

    def vector_at(self, n: int) -> np.ndarray: ...


@dataclass(frozen=True)
class VectorStream:
    """Index-addressable i.i.d. stream of k-vectors.

    The vector at index n depends only on (root_seed, k, n): its rejection
    sampler reads Philox blocks keyed by the seed with counter
    (n mod 2^32, n >> 32, attempt, block). ``perturbation_sign`` other than 1
    swaps in the Gaussian reference (0) or the sign-flipped law (-1).
    """

    root_seed: int
    k: int
    perturbation_sign: float = 1.0

    def __post_init__(self):
        PerturbedGaussianParams(self.k)
        seed_key(self.root_seed)
        if self.perturbation_sign not in (-1.0, 0.0, 1.0):
            raise InvalidInputError("perturbation_sign must be -1, 0 or 1")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "perturbation_sign", float(self.perturbation_sign))

    @property
    def params(self) -> PerturbedGaussianParams:
        return PerturbedGaussianParams(self.k)

    @property
    def key(self):
        return seed_key(self.root_seed)

    def vectors(self, indices) -> np.ndarray:
        idx = np.ascontiguousarray(indices, dtype=np.int64)
        out, used = kernels.draw_vectors(*self.key, self.k, self.perturbation_sign, idx)
        if used < 0:
            raise SamplerError("rejection cap exceeded; random source is broken")
        return out

    def vector_at(self, n: int) -> np.ndarray:
        return self.vectors(np.array([n], dtype=np.int64))[0]


def vector_at(stream: VectorSource, n: int) -> np.ndarray:
    return stream.vector_at(int(n))


@dataclass(frozen=True)
class PathSegment:
    """Realization Y_{offset}, ..., Y_{offset+len-1} with its provenance."""

    offset: int
    values: np.ndarray
    root_seed: int | None
    k: int

    def __len__(self):
        return len(self.values)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.values), dtype=np.int64)

    def at(self, n: int) -> float:
        i = n - self.offset
        if not 0 <= i < len(self.values):
            raise IndexError(n)
        return float(self.values[i])


def _generic_segment(stream: VectorSource, n0: int, length: int) -> np.ndarray:
    k = stream.k
    ring = deque((stream.vector_at(n0 + j) for j in range(k - 1)), maxlen=k)
    out = np.empty(length)
    for i in range(length):
        ring.append(stream.vector_at(n0 + i + k - 1))
        # ring[j] is vector n0+i+j; Y takes its coordinate k-j (1-based)
        out[i] = sum(ring[j][k - 1 - j] for j in range(k))
    return out


def generate_segment(stream: VectorSource, n0: int, length: int) -> PathSegment:
    """Y_{n0..n0+length-1}; O(k) memory for the fast kernel path.

    Any object with ``k`` and ``vector_at`` works; non-``VectorStream``
    sources go through a plain ring-buffer loop.
    """
    if length < 1:
        raise InvalidInputError("segment length must be >= 1")
    n0 = int(n0)
    if isinstance(stream, VectorStream):
        values, ok = kernels.path_values(*stream.key, stream.k, stream.perturbation_sign, n0, int(length))
        if not ok:
            raise SamplerError("rejection cap exceeded; random source is broken")
        return PathSegment(n0, values, stream.root_seed, stream.k)
    return PathSegment(n0, _generic_segment(stream, n0, int(length)), getattr(stream, "root_seed", None), stream.k)


def sliding_products(segment, window: int) -> np.ndarray:
    """Products Y_{n}...Y_{n+window-1} for every full window, in order."""
    values = np.asarray(segment.values if isinstance(segment, PathSegment) else segment, dtype=np.float64)
    if window < 1:
        raise InvalidInputError("window must be >= 1")
    if window > len(values):
        raise InvalidInputError(f"window {window} exceeds segment length {len(values)}")
    out = values[: len(values) - window + 1].copy()
    for j in range(1, window):
        out *= values[j: len(values) - window + 1 + j]
    return out


def window_samples(stream: VectorStream, indices, n_real: int, base: int = 0) -> np.ndarray:
    """``n_real`` independent copies of (Y_{n_1}, ..., Y_{n_p}).

    Realization r is read at shift ``base + r * stride`` with stride equal to
    the number of vectors one realization touches, so no two realizations
    share a vector and they are exactly independent.
    """
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1 or len(idx) == 0:
        raise InvalidInputError("indices must be a non-empty 1-D sequence")
    if n_real < 1:
        raise InvalidInputError("need at least one realization")
    stride = int(idx.max() - idx.min()) + stream.k
    bases = int(base) + stride * np.arange(n_real, dtype=np.int64)
    out, ok = kernels.window_values(*stream.key, stream.k, stream.perturbation_sign, idx, bases)
    if not ok:
        raise SamplerError("rejection cap exceeded; random source is broken")
    return out
