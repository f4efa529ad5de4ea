"""Full-weight codeword enumeration, the orthogonality graph on the
sign-normalised full-weight words, clique search and Brouwer-Zimmermann
minimum weight."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Sequence

import numpy as np

from . import _kernels as K
from .gf3 import Gf3Vector, TernaryCode, is_self_orthogonal, rref, standard_form

log = logging.getLogger(__name__)

THREADS_ENV = "TERNHAD_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# ------------------------------------------------------------ enumeration

@dataclass(frozen=True)
class FullWeightResult:
    length: int
    count: int
    words: np.ndarray  # (count, length) int8 over {1, 2}, rows sorted lexicographically

    def stream(self) -> Iterator[Gf3Vector]:
        for w in self.words:
            yield Gf3Vector.from_values(w)


def _gray(t: np.ndarray) -> np.ndarray:
    return t ^ (t >> np.uint64(1))


def _scan_shard(alo, ahi, mask, start, stop, cap=1 << 14) -> np.ndarray:
    kernel = K.fullweight_gray_kernel_1w if alo.shape[1] == 1 else K.fullweight_gray_kernel
    while True:
        out = np.zeros(cap, dtype=np.uint64)
        found = kernel(alo, ahi, mask, start, stop, out)
        if found <= cap:
            return out[:found]
        cap = int(found)


def enumerate_full_weight(code: TernaryCode, threads: int | None = None,
                          shards: int | None = None) -> FullWeightResult:
    """All codewords without a zero coordinate.

    In standard form ``[I_k | A]`` a word ``m [I | A]`` has full weight iff
    ``m`` lies in ``{1, 2}^k`` and ``m A`` has no zero; the ``2^k`` choices of
    ``m`` are walked in binary reflected Gray order so each step adds or
    subtracts one row of ``A``.  The index range is cut into ``shards``
    contiguous blocks (each restarts with one full product); shards run on a
    thread pool and the merged output does not depend on the split.
    """
    n, k = code.length, code.dimension
    if k == 0:
        return FullWeightResult(n, 0, np.zeros((0, n), dtype=np.int8))
    if k > 62:
        raise ValueError(f"dimension {k} is beyond the 2^62 enumeration range")
    g, perm = standard_form(code)
    garr = g.to_array().astype(np.int64)
    a = garr[:, k:]
    if a.shape[1] == 0:
        alo = np.zeros((k, 1), dtype=np.uint64)
        ahi = alo.copy()
        mask = np.zeros(1, dtype=np.uint64)
    else:
        alo, ahi = K.pack_rows(a)
        mask = K.column_mask(a.shape[1])
    threads = threads or default_threads()
    total = 1 << k
    if shards is None:
        shards = 1 if threads == 1 else min(total, 4 * threads)
    shards = max(1, min(shards, total))
    bounds = [(total * s) // shards for s in range(shards + 1)]
    jobs = list(zip(bounds[:-1], bounds[1:]))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _scan_shard(alo, ahi, mask, b[0], b[1]), jobs))
    else:
        parts = [_scan_shard(alo, ahi, mask, lo, hi) for lo, hi in jobs]
    hits = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint64)
    bits = ((hits[:, None] >> np.arange(k, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(np.int64)
    msgs = 1 + bits
    permuted = (msgs @ garr) % 3
    words = np.empty_like(permuted)
    words[:, list(perm)] = permuted
    words = words.astype(np.int8)
    if len(words):
        words = words[np.lexsort(words.T[::-1])]
    return FullWeightResult(n, len(words), words)


def naive_full_weight(code: TernaryCode) -> np.ndarray:
    """Reference enumeration through all 3^k codewords (small k only)."""
    from .gf3 import all_codewords

    words = all_codewords(code)
    full = words[np.all(words != 0, axis=1)]
    return full[np.lexsort(full.T[::-1])] if len(full) else full


# ------------------------------------------------------------ sign vectors

@dataclass(frozen=True)
class SignVectorSet:
    length: int
    vectors: np.ndarray  # (V, n) int8 +-1, first coordinate +1, sorted, distinct

    def __len__(self) -> int:
        return len(self.vectors)

    def sign_bits(self) -> np.ndarray:
        return K.pack_bits(self.vectors < 0)

    def to_gf3(self) -> np.ndarray:
        return np.where(self.vectors > 0, 1, 2).astype(np.int8)


def sign_normalize(words) -> SignVectorSet:
    """One representative of each pair {x, 2x} mapped 0,1,2 -> 0,+1,-1 and
    scaled so the first coordinate is +1."""
    w = np.atleast_2d(np.asarray(words, dtype=np.int64)) % 3
    if w.size and np.any(w == 0):
        raise ValueError("sign normalisation needs full-weight words")
    n = w.shape[1]
    s = np.where(w == 1, 1, -1).astype(np.int8)
    if len(s):
        s = s * s[:, :1]
        s = np.unique(s, axis=0)
        s = s[np.lexsort(s.T[::-1])]
        # a surviving pair x, -x would mean the first coordinate was not fixed
        if np.any(s[:, 0] != 1):
            raise AssertionError("normalisation left a word and its negative")
    return SignVectorSet(n, s)


@dataclass(frozen=True)
class OrthoGraph:
    vertices: SignVectorSet
    adj: np.ndarray  # (V, ceil(V/64)) uint64 bitsets, no loops

    @property
    def order(self) -> int:
        return len(self.vertices)

    def adjacent(self, a: int, b: int) -> bool:
        return bool((self.adj[a, b >> 6] >> np.uint64(b & 63)) & np.uint64(1))

    def neighbors(self, a: int) -> np.ndarray:
        bits = K.unpack_bits(self.adj[a:a + 1], self.order)[0]
        return np.flatnonzero(bits)

    def degrees(self) -> np.ndarray:
        return K.unpack_bits(self.adj, self.order).sum(axis=1)

    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2


def build_ortho_graph(s: SignVectorSet) -> OrthoGraph:
    if len(s) == 0:
        return OrthoGraph(s, np.zeros((0, 1), dtype=np.uint64))
    adj = K.ortho_adjacency_kernel(s.sign_bits(), s.length)
    return OrthoGraph(s, adj)


# ------------------------------------------------------------ cliques

@dataclass
class CliqueResult:
    size: int
    cliques: list[tuple[int, ...]]
    status: str  # "exhaustive" or "budget-exhausted"
    nodes: int
    total_found: int

    @property
    def exhaustive(self) -> bool:
        return self.status == "exhaustive"


def _components(bits: np.ndarray) -> list[list[int]]:
    n = len(bits)
    seen = np.zeros(n, dtype=bool)
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in np.flatnonzero(bits[v] & ~seen):
                seen[u] = True
                stack.append(int(u))
        comps.append(sorted(comp))
    return comps


def degeneracy_order(bits: np.ndarray) -> list[int]:
    """Per connected component, vertices in reverse min-degree removal order
    (the densest core first); components follow their smallest vertex."""
    order: list[int] = []
    for comp in _components(bits):
        sub = bits[np.ix_(comp, comp)].astype(np.int64)
        deg = sub.sum(axis=1)
        alive = np.ones(len(comp), dtype=bool)
        removed = []
        for _ in range(len(comp)):
            cand = np.where(alive, deg, np.iinfo(np.int64).max)
            v = int(np.argmin(cand))
            removed.append(v)
            alive[v] = False
            deg -= sub[v]
        order.extend(comp[v] for v in reversed(removed))
    return order


def find_cliques(g: OrthoGraph, size: int, budget: int = 10**7,
                 seed: Sequence[int] = (), max_cliques: int = 100_000) -> CliqueResult:
    """Cliques of exactly ``size`` vertices (containing ``seed``, if given).

    Branch and bound over a degeneracy ordering with greedy colouring
    bounds.  ``budget`` caps the number of search-tree nodes, so results are
    reproducible across machines.  At most ``max_cliques`` cliques are kept;
    ``total_found`` counts all of them.
    """
    seed = tuple(int(v) for v in seed)
    V = g.order
    for i, a in enumerate(seed):
        for b in seed[i + 1:]:
            if not g.adjacent(a, b):
                raise ValueError(f"seed vertices {a} and {b} are not adjacent")
    need = size - len(seed)
    if need < 0:
        raise ValueError("seed is larger than the requested clique")
    if need == 0:
        return CliqueResult(size, [tuple(sorted(seed))], "exhaustive", 0, 1)
    if V == 0:
        return CliqueResult(size, [], "exhaustive", 0, 0)
    full = K.unpack_bits(g.adj, V).astype(bool)
    cand_mask = np.ones(V, dtype=bool)
    for v in seed:
        cand_mask &= full[v]
        cand_mask[v] = False
    cand = np.flatnonzero(cand_mask)
    if len(cand) < need:
        return CliqueResult(size, [], "exhaustive", 0, 0)
    sub = full[np.ix_(cand, cand)]
    order = degeneracy_order(sub)
    relabel = cand[order]
    sub = sub[np.ix_(order, order)]
    adj = K.pack_bits(sub)
    cmask = K.pack_bits(np.ones((1, len(cand)), dtype=np.uint8))[0]
    out = np.zeros((max_cliques, need), dtype=np.int32)
    found, nodes, completed = K.kclique_kernel(adj, cmask, need, budget, out, 0)
    kept = []
    for row in out[:min(found, max_cliques)]:
        kept.append(tuple(sorted(seed + tuple(int(relabel[v]) for v in row))))
    kept.sort()
    status = "exhaustive" if completed else "budget-exhausted"
    return CliqueResult(size, kept, status, int(nodes), int(found))


def clique_matrix(g: OrthoGraph, clique: Sequence[int]) -> np.ndarray:
    return g.vertices.vectors[list(clique)].astype(np.int64)


# ------------------------------------------------------------ minimum weight

@dataclass
class MinWeightResult:
    minimum_weight: int | None   # exact value, when certified
    lower_bound: int
    upper_bound: int | None
    witness: Gf3Vector | None
    exact: bool
    information_sets: list[int] = field(default_factory=list)  # ranks r_j
    rounds: int = 0
    enumerated: int = 0

    @property
    def value(self) -> int:
        return self.minimum_weight if self.exact else self.lower_bound


def information_set_generators(code: TernaryCode) -> list[tuple[np.ndarray, int]]:
    """Generators systematic on greedily chosen information sets.

    Each new set takes as many not-yet-covered columns as the code allows
    (its rank ``r_j``); the rest of its pivots overlap earlier sets.
    Returns (generator in original column order, r_j) pairs.
    """
    n, k = code.length, code.dimension
    g = code.generator
    covered: set[int] = set()
    out = []
    while len(covered) < n:
        fresh = [j for j in range(n) if j not in covered]
        order = fresh + sorted(covered)
        red, rank, piv = rref(g.permute_columns(order))
        if rank != k:
            raise AssertionError("generator lost rank")
        new_cols = [order[c] for c in piv if c < len(fresh)]
        if not new_cols:
            break
        arr = red.to_array()[:k]
        orig = np.empty_like(arr)
        orig[:, order] = arr
        out.append((orig.astype(np.int64), len(new_cols)))
        covered.update(new_cols)
    return out


def _bz_bound(ranks: list[int], k: int, w_done: list[int]) -> int:
    return sum(max(0, w + 1 - (k - r)) for r, w in zip(ranks, w_done))


def min_weight_bz(code: TernaryCode, budget: int | None = None,
                  divisibility: bool | None = None) -> MinWeightResult:
    """Brouwer-Zimmermann minimum weight.

    Round ``w`` tries every message of weight ``w`` (first nonzero entry 1;
    the scalar multiple has the same weight) against each information-set
    generator.  Once all generators have finished round ``w``, any codeword
    not yet seen has weight at least ``sum_j max(0, w + 1 - (k - r_j))``.
    When every generator row has weight divisible by 3 and the code is
    self-orthogonal, all weights are multiples of 3 and the bound is rounded
    up accordingly.  ``budget`` caps the number of messages tried.
    """
    n, k = code.length, code.dimension
    if k == 0:
        raise ValueError("the zero code has no nonzero codewords")
    if divisibility is None:
        divisibility = is_self_orthogonal(code)
    step = 3 if divisibility else 1
    gens = information_set_generators(code)
    ranks = [r for _, r in gens]
    packed = [K.pack_rows(gm) for gm, _ in gens]
    best = n + 1
    witness_msg = None
    witness_gen = None
    done = [0] * len(gens)
    lower = 0
    enumerated = 0
    rounds = 0

    def rounded(x: int) -> int:
        return -(-x // step) * step

    for w in range(1, k + 1):
        cost = comb(k, w) * (1 << (w - 1))
        for j, (glo, ghi) in enumerate(packed):
            if budget is not None and enumerated + cost > budget:
                return MinWeightResult(None, lower, best if best <= n else None,
                                       _witness(gens, witness_gen, witness_msg), False,
                                       ranks, rounds, enumerated)
            msg = np.zeros(k, dtype=np.int8)
            new_best = K.bz_round_kernel(glo, ghi, w, best, msg)
            enumerated += cost
            if new_best < best:
                best = int(new_best)
                witness_msg, witness_gen = msg.copy(), j
            done[j] = w
            lower = max(lower, rounded(_bz_bound(ranks, k, done)))
            if lower >= best:
                return MinWeightResult(best, best, best, _witness(gens, witness_gen, witness_msg),
                                       True, ranks, w, enumerated)
        rounds = w
        log.debug("BZ round %d: best %d, lower bound %d", w, best, lower)
    # every message enumerated
    return MinWeightResult(best, best, best, _witness(gens, witness_gen, witness_msg), True,
                           ranks, rounds, enumerated)


def _witness(gens, j, msg) -> Gf3Vector | None:
    if msg is None:
        return None
    vals = (msg.astype(np.int64) @ gens[j][0]) % 3
    return Gf3Vector.from_values(vals)
