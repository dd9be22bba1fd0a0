"""Pure-numpy kernels, same counter layout and signatures as the numba ones.

Results agree with the numba backend up to libm rounding in log/cos/sin
(last-ulp differences), so draws match to ~1e-15 rather than bit-for-bit.
"""
import math

import numpy as np

MAX_REJECTIONS = 1000

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)
_INV53 = 1.0 / 9007199254740992.0

CHUNK = 1 << 16


def _philox(c0, c1, c2, c3, k0, k1):
    k0 = np.uint64(k0)
    k1 = np.uint64(k1)
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> np.uint64(32)) ^ c1 ^ k0,
            p1 & _MASK32,
            (p0 >> np.uint64(32)) ^ c3 ^ k1,
            p0 & _MASK32,
        )
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return c0, c1, c2, c3


def philox4x32(ctr, key):
    """Philox4x32-10 on a single counter block (test hook)."""
    words = [np.asarray(c, dtype=np.uint64) for c in ctr]
    return np.array(_philox(*words, np.uint64(key[0]), np.uint64(key[1])), dtype=np.uint64)


def _unit(a, b):
    return (((a >> np.uint64(5)) * np.uint64(67108864) + (b >> np.uint64(6))).astype(np.float64) + 0.5) * _INV53


def draw_vectors(k0, k1, k, sign, indices):
    indices = np.asarray(indices, dtype=np.int64)
    out = np.empty((indices.shape[0], k))
    if indices.shape[0] == 0:
        return out, 0
    bound = 1.0 + abs(sign) * math.exp(-0.5 * k)
    lo = (indices & 0xFFFFFFFF).astype(np.uint64)
    hi = ((indices >> 32) & 0xFFFFFFFF).astype(np.uint64)
    nblocks = (k + 1) // 2
    pending = np.arange(indices.shape[0])
    total = 0
    for attempt in range(MAX_REJECTIONS):
        a = np.full(pending.shape[0], attempt, dtype=np.uint64)
        plo = lo[pending]
        phi = hi[pending]
        z = np.empty((pending.shape[0], 2 * nblocks))
        for blk in range(nblocks):
            r0, r1, r2, r3 = _philox(plo, phi, a, np.full_like(a, blk), k0, k1)
            rad = np.sqrt(-2.0 * np.log(_unit(r0, r1)))
            theta = (2.0 * math.pi) * _unit(r2, r3)
            z[:, 2 * blk] = rad * np.cos(theta)
            z[:, 2 * blk + 1] = rad * np.sin(theta)
        z = z[:, :k]
        total += pending.shape[0]
        if sign == 0.0:
            out[pending] = z
            return out, total
        r0, r1, _, _ = _philox(plo, phi, a, np.full_like(a, nblocks), k0, k1)
        u = _unit(r0, r1)
        sq = np.zeros(pending.shape[0])
        prod = np.ones(pending.shape[0])
        for j in range(k):  # same accumulation order as the scalar kernel
            sq += z[:, j] * z[:, j]
            prod *= z[:, j]
        accept = u * bound < 1.0 + sign * prod * np.exp(-0.5 * sq)
        out[pending[accept]] = z[accept]
        pending = pending[~accept]
        if pending.shape[0] == 0:
            return out, total
    return out, -1


def path_values(k0, k1, k, sign, n0, length):
    y = np.empty(length)
    cols = np.arange(k - 1, -1, -1)
    for start in range(0, length, CHUNK):
        c = min(CHUNK, length - start)
        vecs, used = draw_vectors(k0, k1, k, sign, np.arange(n0 + start, n0 + start + c + k - 1, dtype=np.int64))
        if used < 0:
            return y, False
        acc = np.zeros(c)
        for j in range(k):
            acc += vecs[j:j + c, cols[j]]
        y[start:start + c] = acc
    return y, True


def window_values(k0, k1, k, sign, offsets, bases):
    offsets = np.asarray(offsets, dtype=np.int64)
    bases = np.asarray(bases, dtype=np.int64)
    p = offsets.shape[0]
    out = np.empty((bases.shape[0], p))
    step = max(1, CHUNK // (p * k))
    lags = np.arange(k)
    for start in range(0, bases.shape[0], step):
        b = bases[start:start + step]
        idx = b[:, None, None] + offsets[None, :, None] + lags[None, None, :]
        vecs, used = draw_vectors(k0, k1, k, sign, idx.ravel())
        if used < 0:
            return out, False
        vecs = vecs.reshape(b.shape[0], p, k, k)
        acc = np.zeros((b.shape[0], p))
        for j in range(k):
            acc += vecs[:, :, j, k - 1 - j]
        out[start:start + b.shape[0]] = acc
    return out, True


def ecf_sums(samples, grid):
    g = grid.shape[0]
    re = np.zeros(g)
    im = np.zeros(g)
    for start in range(0, samples.shape[0], CHUNK):
        ph = samples[start:start + CHUNK] @ grid.T
        re += np.cos(ph).sum(axis=0)
        im += np.sin(ph).sum(axis=0)
    return re, im
