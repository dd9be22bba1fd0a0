"""Exact finite-dimensional laws of the Y process.

Two independent evaluators of the characteristic function are provided:

* :func:`cf_marginal` works for any index set. Vector r feeds Y_n with its
  coordinate k-(r-n) whenever 0 <= r-n <= k-1, so the joint CF is the product
  over vectors of the law's CF evaluated at the frequencies routed to it.
* :func:`cf_block_convolution` rebuilds a consecutive window of length m >= k
  from its explicit block list: k-1 Gaussian prefix blocks [1, j], m-k+1
  copies of the law on [r, r+k-1], and k-1 Gaussian suffix blocks [j, m].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist import PerturbedGaussianParams, cf_nu
from .errors import CapabilityError, InvalidInputError

__all__ = [
    "BlockSpec",
    "MarginalQuery",
    "block_list",
    "cf_block_convolution",
    "cf_marginal",
    "exact_mixed_moment",
    "gaussian_cf",
    "nongaussianity_gap",
]


@dataclass(frozen=True)
class MarginalQuery:
    indices: tuple
    t: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in np.atleast_1d(self.indices))
        t = tuple(float(v) for v in np.atleast_1d(np.asarray(self.t, dtype=np.float64)))
        if not idx:
            raise InvalidInputError("query needs at least one index")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidInputError(f"indices must be strictly increasing, got {idx}")
        if len(t) != len(idx):
            raise InvalidInputError(f"t has {len(t)} entries for {len(idx)} indices")
        if not all(math.isfinite(v) for v in t):
            raise InvalidInputError("t must be finite")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "t", t)


@dataclass(frozen=True)
class BlockSpec:
    """Law embedded on the 1-based closed coordinate range [start, stop]."""

    kind: str  # "gaussian" or "nu"
    start: int
    stop: int

    @property
    def width(self) -> int:
        return self.stop - self.start + 1


def gaussian_cf(params: PerturbedGaussianParams, t) -> float:
    """CF of N(0, k I) at t."""
    t = np.asarray(t, dtype=np.float64)
    return math.exp(-0.5 * params.k * float(np.dot(t, t)))


def _routing(k: int, indices, t):
    """Frequency vector s_r for each vector r (relative to indices[0]) with s_r != 0."""
    first = indices[0]
    slots = {}
    for n, tn in zip(indices, t):
        if tn == 0.0:
            continue
        for j in range(k):
            r = n - first + j
            s = slots.get(r)
            if s is None:
                s = slots[r] = np.zeros(k)
            s[k - 1 - j] = tn
    return [slots[r] for r in sorted(slots)]


def cf_marginal(params: PerturbedGaussianParams, indices, t) -> complex:
    """Exact CF of (Y_{n_1}, ..., Y_{n_p}) at t.

    Depends only on index differences, so shifting every index leaves the
    result bit-identical.
    """
    q = MarginalQuery(indices, t)
    out = complex(1.0)
    for s in _routing(params.k, q.indices, q.t):
        out *= cf_nu(params, s)
    return out


def block_list(k: int, m: int) -> list[BlockSpec]:
    """Gaussian prefix, law blocks, Gaussian suffix for a window of length m >= k."""
    if m < k:
        raise CapabilityError(f"block decomposition needs m >= k ({m} < {k}); use cf_marginal")
    prefix = [BlockSpec("gaussian", 1, j) for j in range(1, k)]
    body = [BlockSpec("nu", r, r + k - 1) for r in range(1, m - k + 2)]
    suffix = [BlockSpec("gaussian", j, m) for j in range(m - k + 2, m + 1)]
    return prefix + body + suffix


def cf_block_convolution(params: PerturbedGaussianParams, m: int, t) -> complex:
    """CF of a consecutive m-window as the product over :func:`block_list`.

    Law blocks are fed t[start..stop] in index order; the law is symmetric in
    its coordinates so the reversal relative to the routing rule is immaterial.
    """
    t = np.asarray(t, dtype=np.float64)
    if t.shape != (m,):
        raise InvalidInputError(f"t must have length m={m}")
    out = complex(1.0)
    for b in block_list(params.k, m):
        seg = t[b.start - 1: b.stop]
        if b.kind == "nu":
            out *= cf_nu(params, seg)
        else:
            out *= math.exp(-0.5 * float(np.dot(seg, seg)))
    return out


def nongaussianity_gap(params: PerturbedGaussianParams, m: int, t) -> float:
    """|CF of a consecutive m-window minus the N(0, k I_m) CF| at t."""
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    t = np.asarray(t, dtype=np.float64)
    if t.shape != (m,):
        raise InvalidInputError(f"t must have length m={m}")
    return abs(cf_marginal(params, range(m), t) - gaussian_cf(params, t))


# --- mixed moments -----------------------------------------------------------
# Polynomials in the p query frequencies are dicts {exponent tuple: coefficient},
# truncated at the total degree of the requested moment.


def _pmul(a, b, deg):
    out = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > deg:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return out


def _pexp(q, deg, p):
    """exp of a polynomial without constant term, truncated."""
    one = {(0,) * p: 1.0}
    out, term = dict(one), dict(one)
    for n in range(1, deg + 1):
        term = {e: c / n for e, c in _pmul(term, q, deg).items()}
        if not term:
            break
        for e, c in term.items():
            out[e] = out.get(e, 0) + c
    return out


def _quadratic(weights, p):
    out = {}
    for q, w in weights.items():
        e = [0] * p
        e[q] = 2
        out[tuple(e)] = w
    return out


def exact_mixed_moment(params: PerturbedGaussianParams, indices, orders) -> float:
    """E[prod_q Y_{n_q}^{a_q}] with sum(a) <= k + 2.

    Expands the CF to the needed degree: the Gaussian factors of all vectors
    combine into exp(-k|t|^2/2), and each vector covering k query indices adds
    a factor 1 + c_k prod(s) exp(|s|^2/4). The moment is read off the Taylor
    coefficient of t^a.
    """
    k = params.k
    idx = [int(i) for i in indices]
    a = [int(o) for o in orders]
    if len(a) != len(idx) or not idx:
        raise InvalidInputError("need one order per index")
    if min(a) < 0:
        raise InvalidInputError("orders must be non-negative")
    if any(y <= x for x, y in zip(idx, idx[1:])):
        raise InvalidInputError("indices must be strictly increasing")
    deg = sum(a)
    if deg > k + 2:
        raise CapabilityError(f"total order {deg} exceeds budget k+2={k + 2}")
    p = len(idx)
    if deg == 0:
        return 1.0
    poly = _pexp(_quadratic({q: -0.5 * k for q in range(p)}, p), deg, p)
    pos = {n: q for q, n in enumerate(idx)}
    for r in (n + k - 1 for n in idx):
        # vector r is full iff Y_{r-k+1}..Y_r are all queried
        members = [pos.get(r - j) for j in range(k)]
        if any(m is None for m in members):
            continue
        e = [0] * p
        for m in members:
            e[m] = 1
        pert = {tuple(e): params.cf_coefficient}
        pert = _pmul(pert, _pexp(_quadratic({m: 0.25 for m in members}, p), deg, p), deg)
        factor = {(0,) * p: 1.0}
        for ex, c in pert.items():
            factor[ex] = factor.get(ex, 0) + c
        poly = _pmul(poly, factor, deg)
    coef = poly.get(tuple(a), 0.0)
    value = coef * math.prod(math.factorial(x) for x in a) / (1, 1j, -1, -1j)[deg % 4]
    return float(np.real(value))

