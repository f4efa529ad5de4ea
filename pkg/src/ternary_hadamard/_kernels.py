"""Compiled inner loops.  Vectors are rows of ``uint64`` word arrays, one
array per bit plane (see :mod:`ternary_hadamard.gf3` for the encoding)."""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64


def n_words(n: int) -> int:
    return max(1, (n + 63) // 64)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """(r, n) 0/1 array -> (r, W) uint64, coordinate i at bit i % 64 of word i // 64."""
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    r, n = bits.shape
    w = n_words(n)
    padded = np.zeros((r, w * 64), dtype=np.uint8)
    padded[:, :n] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(r, w).astype(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    words = np.ascontiguousarray(np.atleast_2d(words).astype("<u8"))
    raw = words.view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :n]


def pack_rows(values) -> tuple[np.ndarray, np.ndarray]:
    a = np.atleast_2d(np.asarray(values, dtype=np.int64)) % 3
    return pack_bits(a == 1), pack_bits(a == 2)


def unpack_rows(lo: np.ndarray, hi: np.ndarray, n: int) -> np.ndarray:
    return (unpack_bits(lo, n) + 2 * unpack_bits(hi, n)).astype(np.int8)


def column_mask(n: int) -> np.ndarray:
    return pack_bits(np.ones((1, n), dtype=np.uint8))[0]


@njit(cache=True, inline="always")
def popcount64(x):
    x = x - ((x >> U64(1)) & U64(0x5555555555555555))
    x = (x & U64(0x3333333333333333)) + ((x >> U64(2)) & U64(0x3333333333333333))
    x = (x + (x >> U64(4))) & U64(0x0F0F0F0F0F0F0F0F)
    return (x * U64(0x0101010101010101)) >> U64(56)


@njit(cache=True, inline="always")
def ctz64(x):
    n = 0
    if (x & U64(0xFFFFFFFF)) == U64(0):
        n += 32
        x >>= U64(32)
    if (x & U64(0xFFFF)) == U64(0):
        n += 16
        x >>= U64(16)
    if (x & U64(0xFF)) == U64(0):
        n += 8
        x >>= U64(8)
    if (x & U64(0xF)) == U64(0):
        n += 4
        x >>= U64(4)
    if (x & U64(0x3)) == U64(0):
        n += 2
        x >>= U64(2)
    if (x & U64(0x1)) == U64(0):
        n += 1
    return n


@njit(cache=True, inline="always")
def _add_into(vlo, vhi, blo, bhi):
    for w in range(vlo.shape[0]):
        alo = vlo[w]
        ahi = vhi[w]
        t = (alo | bhi[w]) ^ (ahi | blo[w])
        vlo[w] = (ahi | bhi[w]) ^ t
        vhi[w] = (alo | blo[w]) ^ t


@njit(cache=True, inline="always")
def _sub_into(vlo, vhi, blo, bhi):
    _add_into(vlo, vhi, bhi, blo)


@njit(cache=True, inline="always")
def _weight(vlo, vhi):
    s = 0
    for w in range(vlo.shape[0]):
        s += popcount64(vlo[w] | vhi[w])
    return s


@njit(cache=True)
def weight_distribution_kernel(lo, hi, n):
    """Histogram of weights over all 3**k combinations of the rows.

    Counts through the messages in base 3.  Every digit change, whether
    0->1, 1->2 or the wrap 2->0 (a change of -2 = +1), adds one copy of
    the corresponding row, so each step is a handful of row additions.
    """
    k = lo.shape[0]
    W = lo.shape[1]
    counts = np.zeros(n + 1, dtype=np.int64)
    vlo = np.zeros(W, dtype=np.uint64)
    vhi = np.zeros(W, dtype=np.uint64)
    digits = np.zeros(k, dtype=np.int8)
    counts[0] += 1
    total = 1
    for _ in range(k):
        total *= 3
    for _ in range(total - 1):
        j = 0
        while digits[j] == 2:
            digits[j] = 0
            _add_into(vlo, vhi, lo[j], hi[j])
            j += 1
        digits[j] += 1
        _add_into(vlo, vhi, lo[j], hi[j])
        counts[_weight(vlo, vhi)] += 1
    return counts


@njit(cache=True, nogil=True)
def fullweight_gray_kernel(alo, ahi, mask, start, stop, out):
    """Scan Gray-code indices ``t`` in ``[start, stop)`` for full-weight words.

    Message coordinate j is 1 when bit j of gray(t) is clear and 2 when it
    is set; the running vector is ``m . A``.  Hits are written to ``out`` as
    gray(t) while room remains; the total hit count is returned.
    """
    k = alo.shape[0]
    W = alo.shape[1]
    vlo = np.zeros(W, dtype=np.uint64)
    vhi = np.zeros(W, dtype=np.uint64)
    g = U64(start) ^ (U64(start) >> U64(1))
    for j in range(k):
        _add_into(vlo, vhi, alo[j], ahi[j])
        if (g >> U64(j)) & U64(1):
            _add_into(vlo, vhi, alo[j], ahi[j])
    cap = out.shape[0]
    found = 0
    t = U64(start)
    end = U64(stop)
    while True:
        full = True
        for w in range(W):
            if ((vlo[w] | vhi[w]) & mask[w]) != mask[w]:
                full = False
                break
        if full:
            if found < cap:
                out[found] = g
            found += 1
        t += U64(1)
        if t >= end:
            break
        j = ctz64(t)
        g ^= U64(1) << U64(j)
        if (g >> U64(j)) & U64(1):
            _add_into(vlo, vhi, alo[j], ahi[j])
        else:
            _sub_into(vlo, vhi, alo[j], ahi[j])
    return found


@njit(cache=True, nogil=True)
def fullweight_gray_kernel_1w(alo, ahi, mask, start, stop, out):
    """Single-word variant of :func:`fullweight_gray_kernel` (at most 64
    redundancy columns); the running vector stays in registers."""
    k = alo.shape[0]
    m = mask[0]
    lo = U64(0)
    hi = U64(0)
    g = U64(start) ^ (U64(start) >> U64(1))
    for j in range(k):
        reps = 2 if (g >> U64(j)) & U64(1) else 1
        for _ in range(reps):
            t = (lo | ahi[j, 0]) ^ (hi | alo[j, 0])
            lo2 = (hi | ahi[j, 0]) ^ t
            hi = (lo | alo[j, 0]) ^ t
            lo = lo2
    cap = out.shape[0]
    found = 0
    t_ = U64(start)
    end = U64(stop)
    while True:
        if ((lo | hi) & m) == m:
            if found < cap:
                out[found] = g
            found += 1
        t_ += U64(1)
        if t_ >= end:
            break
        j = ctz64(t_)
        g ^= U64(1) << U64(j)
        if (g >> U64(j)) & U64(1):
            blo = alo[j, 0]
            bhi = ahi[j, 0]
        else:
            blo = ahi[j, 0]
            bhi = alo[j, 0]
        t = (lo | bhi) ^ (hi | blo)
        lo2 = (hi | bhi) ^ t
        hi = (lo | blo) ^ t
        lo = lo2
    return found


@njit(cache=True)
def bz_round_kernel(glo, ghi, w, best, witness):
    """Try every message of Hamming weight ``w`` whose first nonzero entry is 1.

    ``glo/ghi`` is a generator that is systematic on some information set,
    so the message weight is a lower bound on the weight restricted to it.
    Returns the smallest codeword weight seen if it beats ``best`` (the
    message is stored in ``witness`` as coefficients 0/1/2), else ``best``.
    """
    k = glo.shape[0]
    W = glo.shape[1]
    if w == 0 or w > k:
        return best
    idx = np.arange(w)
    vlo = np.zeros(W, dtype=np.uint64)
    vhi = np.zeros(W, dtype=np.uint64)
    nsign = U64(1) << U64(w - 1)
    while True:
        vlo[:] = 0
        vhi[:] = 0
        for i in range(w):
            _add_into(vlo, vhi, glo[idx[i]], ghi[idx[i]])
        g = U64(0)
        s = U64(0)
        while True:
            wt = _weight(vlo, vhi)
            if wt < best:
                best = wt
                witness[:] = 0
                for i in range(w):
                    witness[idx[i]] = 1
                    if i > 0 and (g >> U64(i - 1)) & U64(1):
                        witness[idx[i]] = 2
            s += U64(1)
            if s >= nsign:
                break
            j = ctz64(s)
            g ^= U64(1) << U64(j)
            r = idx[j + 1]
            if (g >> U64(j)) & U64(1):
                _add_into(vlo, vhi, glo[r], ghi[r])
            else:
                _sub_into(vlo, vhi, glo[r], ghi[r])
        # next combination in lexicographic order
        i = w - 1
        while i >= 0 and idx[i] == k - w + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j2 in range(i + 1, w):
            idx[j2] = idx[j2 - 1] + 1
    return best


@njit(cache=True)
def ortho_adjacency_kernel(signs, n):
    """Bitset adjacency of +-1 vectors given as (V, W) sign-bit words.

    Two vectors are orthogonal over Z exactly when they disagree in n/2
    coordinates.
    """
    V = signs.shape[0]
    W = signs.shape[1]
    VW = (V + 63) // 64
    adj = np.zeros((V, VW), dtype=np.uint64)
    if n % 2:
        return adj
    half = n // 2
    for a in range(V):
        for b in range(a + 1, V):
            d = 0
            for w in range(W):
                d += popcount64(signs[a, w] ^ signs[b, w])
            if d == half:
                adj[a, b >> 6] |= U64(1) << U64(b & 63)
                adj[b, a >> 6] |= U64(1) << U64(a & 63)
    return adj


@njit(cache=True, inline="always")
def _color_sort(adj, P, verts, colors, U, Q):
    """Greedy sequential colouring of the set P; vertices are listed in
    nondecreasing colour order.  Returns the number listed."""
    W = P.shape[0]
    for w in range(W):
        U[w] = P[w]
    cnt = 0
    color = 0
    while True:
        empty = True
        for w in range(W):
            if U[w] != U64(0):
                empty = False
                break
        if empty:
            break
        color += 1
        for w in range(W):
            Q[w] = U[w]
        for w in range(W):
            while Q[w] != U64(0):
                b = ctz64(Q[w])
                v = w * 64 + b
                bit = U64(1) << U64(b)
                Q[w] &= ~bit
                U[w] &= ~bit
                for x in range(W):
                    Q[x] &= ~adj[v, x]
                verts[cnt] = v
                colors[cnt] = color
                cnt += 1
    return cnt


@njit(cache=True, nogil=True)
def kclique_kernel(adj, cand, need, budget, out, prefix):
    """Enumerate cliques of size ``need`` inside the vertex set ``cand``.

    Branch and bound with greedy colouring bounds, explicit stack.  Every
    clique is reported once.  ``out`` receives found cliques (as rows of
    vertex indices, filled after ``prefix`` reserved columns) while room
    remains.  Returns (cliques found, nodes used, completed flag).
    """
    V = adj.shape[0]
    W = adj.shape[1]
    depth_max = need + 1
    P = np.zeros((depth_max, W), dtype=np.uint64)
    verts = np.zeros((depth_max, V), dtype=np.int32)
    colors = np.zeros((depth_max, V), dtype=np.int32)
    ptr = np.zeros(depth_max, dtype=np.int64)
    R = np.zeros(depth_max, dtype=np.int32)
    U = np.zeros(W, dtype=np.uint64)
    Q = np.zeros(W, dtype=np.uint64)
    cap = out.shape[0]
    found = 0
    if need <= 0:
        return 0, 0, True
    for w in range(W):
        P[0, w] = cand[w]
    cnt = _color_sort(adj, P[0], verts[0], colors[0], U, Q)
    ptr[0] = cnt - 1
    nodes = 1
    d = 0
    completed = True
    while d >= 0:
        if ptr[d] < 0:
            d -= 1
            continue
        i = ptr[d]
        v = verts[d, i]
        if d + colors[d, i] < need:
            ptr[d] = -1
            continue
        ptr[d] = i - 1
        R[d] = v
        vb = U64(1) << U64(v & 63)
        if d + 1 == need:
            if found < cap:
                for j in range(need):
                    out[found, prefix + j] = R[j]
            found += 1
            P[d, v >> 6] &= ~vb
            continue
        nonempty = False
        for w in range(W):
            x = P[d, w] & adj[v, w]
            P[d + 1, w] = x
            if x != U64(0):
                nonempty = True
        P[d, v >> 6] &= ~vb
        if not nonempty:
            continue
        nodes += 1
        if nodes > budget:
            completed = False
            break
        d += 1
        cnt = _color_sort(adj, P[d], verts[d], colors[d], U, Q)
        ptr[d] = cnt - 1
    return found, nodes, completed
