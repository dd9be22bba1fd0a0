"""numba kernels. Signatures mirror :mod:`partgauss._kernels_numpy` exactly."""
import math

import numpy as np
from numba import njit

MAX_REJECTIONS = 1000

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_SHIFT5 = np.uint64(5)
_SHIFT6 = np.uint64(6)
_TWO26 = np.uint64(67108864)
_INV53 = 1.0 / 9007199254740992.0
_TWO_PI = 2.0 * math.pi


@njit(cache=True, inline="always")
def _philox(c0, c1, c2, c3, k0, k1):
    # Philox4x32-10; all words are uint64 holding 32-bit values
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0 = p0 >> _SHIFT32
        lo0 = p0 & _MASK32
        hi1 = p1 >> _SHIFT32
        lo1 = p1 & _MASK32
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return c0, c1, c2, c3


@njit(cache=True)
def philox4x32(ctr, key):
    """Philox4x32-10 on a single counter block (test hook)."""
    out = np.empty(4, dtype=np.uint64)
    r = _philox(np.uint64(ctr[0]), np.uint64(ctr[1]), np.uint64(ctr[2]),
                np.uint64(ctr[3]), np.uint64(key[0]), np.uint64(key[1]))
    out[0], out[1], out[2], out[3] = r
    return out


@njit(cache=True, inline="always")
def _unit(a, b):
    # 53-bit uniform strictly inside (0, 1)
    return (float((a >> _SHIFT5) * _TWO26 + (b >> _SHIFT6)) + 0.5) * _INV53


@njit(cache=True)
def _draw_one(k0, k1, n, k, sign, bound, out):
    """Exact draw of vector ``n`` into ``out``; returns proposals used or -1."""
    lo = np.uint64(n & 0xFFFFFFFF)
    hi = np.uint64((n >> 32) & 0xFFFFFFFF)
    nblocks = (k + 1) // 2
    for attempt in range(MAX_REJECTIONS):
        a = np.uint64(attempt)
        sq = 0.0
        prod = 1.0
        for blk in range(nblocks):
            r0, r1, r2, r3 = _philox(lo, hi, a, np.uint64(blk), k0, k1)
            u1 = _unit(r0, r1)
            u2 = _unit(r2, r3)
            rad = math.sqrt(-2.0 * math.log(u1))
            theta = _TWO_PI * u2
            j = 2 * blk
            z = rad * math.cos(theta)
            out[j] = z
            sq += z * z
            prod *= z
            if j + 1 < k:
                z = rad * math.sin(theta)
                out[j + 1] = z
                sq += z * z
                prod *= z
        if sign == 0.0:
            return attempt + 1
        r0, r1, r2, r3 = _philox(lo, hi, a, np.uint64(nblocks), k0, k1)
        u = _unit(r0, r1)
        if u * bound < 1.0 + sign * prod * math.exp(-0.5 * sq):
            return attempt + 1
    return -1


@njit(cache=True)
def draw_vectors(k0, k1, k, sign, indices):
    """Draw the vectors at ``indices``; returns (array (n, k), total proposals)."""
    bound = 1.0 + abs(sign) * math.exp(-0.5 * k)
    n = indices.shape[0]
    out = np.empty((n, k))
    total = 0
    for i in range(n):
        used = _draw_one(k0, k1, indices[i], k, sign, bound, out[i])
        if used < 0:
            return out, -1
        total += used
    return out, total


@njit(cache=True)
def path_values(k0, k1, k, sign, n0, length):
    """Y_{n0..n0+length-1} with a ring buffer of ``k`` vectors."""
    bound = 1.0 + abs(sign) * math.exp(-0.5 * k)
    buf = np.empty((k, k))
    y = np.empty(length)
    for j in range(k - 1):
        if _draw_one(k0, k1, n0 + j, k, sign, bound, buf[j]) < 0:
            return y, False
    for i in range(length):
        slot = (i + k - 1) % k
        if _draw_one(k0, k1, n0 + i + k - 1, k, sign, bound, buf[slot]) < 0:
            return y, False
        acc = 0.0
        for j in range(k):
            acc += buf[(i + j) % k, k - 1 - j]
        y[i] = acc
    return y, True


@njit(cache=True)
def window_values(k0, k1, k, sign, offsets, bases):
    """Y at ``bases[r] + offsets[q]`` for every realization r and slot q."""
    bound = 1.0 + abs(sign) * math.exp(-0.5 * k)
    nb = bases.shape[0]
    p = offsets.shape[0]
    out = np.empty((nb, p))
    vec = np.empty(k)
    for r in range(nb):
        for q in range(p):
            n = bases[r] + offsets[q]
            acc = 0.0
            for j in range(k):
                if _draw_one(k0, k1, n + j, k, sign, bound, vec) < 0:
                    return out, False
                acc += vec[k - 1 - j]
            out[r, q] = acc
    return out, True


@njit(cache=True)
def ecf_sums(samples, grid):
    """Sums of cos and sin of <t, x> over samples, per grid row."""
    n, p = samples.shape
    g = grid.shape[0]
    re = np.zeros(g)
    im = np.zeros(g)
    for i in range(n):
        for a in range(g):
            ph = 0.0
            for j in range(p):
                ph += grid[a, j] * samples[i, j]
            re[a] += math.cos(ph)
            im[a] += math.sin(ph)
    return re, im
