"""Hadamard equivalence, canonical forms and automorphism group orders.

A Hadamard matrix H of order n becomes a graph on 4n vertices: a
positive and a negative copy of every row and every column.  Row copy
r_i^s is joined to column copy c_j^(s * H_ij) ("incidence" edges) and each
r^+ / c^+ is joined to its own negative copy ("antipodal" edges).  Rows
and columns start in different colour classes, so colour-preserving
isomorphisms are exactly the pairs of signed permutations (P, Q) with
K = P H Q; transposition is excluded.

The search is individualisation-refinement: partitions are refined to
equitable ones (counting incidence neighbours per cell and the cell of the
antipode), and as soon as two rows (or two columns) are fixed, rows are
further split by the distribution of |sum_j h_aj h_bj h_rj h_sj| over s.
Target cells are the first smallest non-singleton cell.  Leaves are
compared by (trace of refinement invariants, relabelled graph); automorphisms
found between equal leaves prune the tree and give the group order by the
orbit-stabiliser product along the first path.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from hashlib import blake2b

import numpy as np

from .hadamard import SignMatrix, _as_sign

log = logging.getLogger(__name__)

CONVENTION_NOTE = (
    "order counts pairs (P, Q) of signed permutation matrices with P H Q = H; "
    "the central pair (-I, -I) is included, so the group of such pairs modulo "
    "{(I, I), (-I, -I)} has half this order"
)


# ------------------------------------------------------------ monomials

@dataclass(frozen=True)
class SignedPermutation:
    """Monomial matrix S with S[i, perm[i]] = signs[i]."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def from_matrix(cls, m) -> "SignedPermutation":
        m = np.asarray(m, dtype=np.int64)
        perm = tuple(int(np.flatnonzero(r)[0]) for r in m)
        signs = tuple(int(m[i, j]) for i, j in enumerate(perm))
        out = cls(perm, signs)
        if not np.array_equal(out.matrix(), m):
            raise ValueError("not a monomial +-1 matrix")
        return out

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "SignedPermutation":
        return cls(tuple(int(x) for x in rng.permutation(n)),
                   tuple(int(x) for x in rng.choice((-1, 1), n)))

    @property
    def degree(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        n = self.degree
        m = np.zeros((n, n), dtype=np.int64)
        m[np.arange(n), list(self.perm)] = self.signs
        return m

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return SignedPermutation.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> "SignedPermutation":
        return SignedPermutation.from_matrix(self.matrix().T)


@dataclass(frozen=True)
class MonomialPair:
    P: SignedPermutation
    Q: SignedPermutation

    def apply(self, h) -> np.ndarray:
        a = _as_sign(h).array
        return self.P.matrix() @ a @ self.Q.matrix()

    def maps(self, h1, h2) -> bool:
        return bool(np.array_equal(self.apply(h1), _as_sign(h2).array))

    def to_json(self) -> dict:
        return {"P": {"perm": list(self.P.perm), "signs": list(self.P.signs)},
                "Q": {"perm": list(self.Q.perm), "signs": list(self.Q.signs)}}


# ------------------------------------------------------------ profile

def profile_invariant(h, full: bool | None = None, sample_size: int = 100_000,
                      seed: int = 20130) -> dict[int, int]:
    """Multiset of |sum_j h_aj h_bj h_cj h_dj| over 4-subsets of rows.

    Full over all 4-subsets when ``n <= 40`` (or ``full=True``); otherwise a
    fixed-seed sample of ``sample_size`` index 4-subsets.  Only the full
    profile is an equivalence invariant.
    """
    a = _as_sign(h).array
    n = len(a)
    if n < 4:
        return {}
    if full is None:
        full = n <= 40
    counts: dict[int, int] = {}
    if full:
        iu_c, iu_d = np.triu_indices(n, 1)
        for i in range(n):
            for j in range(i + 1, n):
                m = np.abs((a * (a[i] * a[j])) @ a.T)
                keep = iu_c > j
                vals, cnt = np.unique(m[iu_c[keep], iu_d[keep]], return_counts=True)
                for v, c in zip(vals.tolist(), cnt.tolist()):
                    counts[v] = counts.get(v, 0) + c
    else:
        rng = np.random.default_rng(seed)
        quads = np.sort(np.array([rng.choice(n, 4, replace=False) for _ in range(sample_size)]), axis=1)
        vals = np.abs((a[quads[:, 0]] * a[quads[:, 1]] * a[quads[:, 2]] * a[quads[:, 3]]).sum(axis=1))
        v, c = np.unique(vals, return_counts=True)
        counts = dict(zip(v.tolist(), c.tolist()))
    return dict(sorted(counts.items()))


# ------------------------------------------------------------ graph + refinement

# fixed pseudo-random cell weights; any fixed table works, it only has to
# be the same for every matrix compared
_WEIGHTS = np.random.default_rng(0x5EED).integers(1, 1 << 20, size=(4096, 2), dtype=np.int64)
_WEIGHTS_F = _WEIGHTS.astype(np.float64)


def _relabel(cols: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Dense labels ordered lexicographically by the key columns (first
    column most significant), plus the sorted distinct keys."""
    key = np.stack(cols, axis=1)
    order = np.lexsort(cols[::-1])
    k = key[order]
    step = np.any(k[1:] != k[:-1], axis=1)
    grp = np.concatenate([[0], np.cumsum(step)])
    out = np.empty(len(order), dtype=np.int64)
    out[order] = grp
    return out, k[np.concatenate([[True], step])]


class HadamardGraph:
    """Vertex layout: r_i^+ = i, r_i^- = n + i, c_j^+ = 2n + j, c_j^- = 3n + j."""

    def __init__(self, h):
        a = _as_sign(h).array
        n = len(a)
        self.h = a
        self.n = n
        V = 4 * n
        if V > len(_WEIGHTS):
            raise ValueError(f"order {n} is above the supported maximum {len(_WEIGHTS) // 4}")
        self.V = V
        pos = (a == 1).astype(np.float64)
        neg = 1.0 - pos
        inc = np.zeros((2 * n, 2 * n))
        inc[:n, :n] = pos
        inc[:n, n:] = neg
        inc[n:, :n] = neg
        inc[n:, n:] = pos
        A = np.zeros((V, V))
        A[:2 * n, 2 * n:] = inc
        A[2 * n:, :2 * n] = inc.T
        self.A = A
        self.incidence = inc.astype(bool)
        blk = np.arange(n)
        self.ant = np.concatenate([blk + n, blk, blk + 3 * n, blk + 2 * n])
        self.initial = np.concatenate([np.zeros(2 * n, dtype=np.int64), np.ones(2 * n, dtype=np.int64)])
        self._quad_cache: dict[tuple[str, int, int], np.ndarray] = {}

    # -- invariants
    def _quad_hash(self, kind: str, a: int, b: int) -> np.ndarray:
        """Per row (or column) r: hash of the histogram of |sum_j h_aj h_bj h_rj h_sj| over s."""
        key = (kind, min(a, b), max(a, b))
        out = self._quad_cache.get(key)
        if out is None:
            m = self.h if kind == "row" else self.h.T
            n = self.n
            prod = np.abs((m * (m[a] * m[b])) @ m.T).astype(np.int64)
            hist = np.zeros((n, n + 1), dtype=np.int64)
            np.add.at(hist, (np.repeat(np.arange(n), n), prod.ravel()), 1)
            out = hist @ _WEIGHTS[:n + 1, 0]
            self._quad_cache[key] = out
        return out

    def _equitable(self, labels: np.ndarray, hasher) -> np.ndarray:
        # neighbour counts per cell, compressed to exact integer hashes with
        # fixed random weights per cell index; a deterministic function of
        # the labelled partition, hence invariant
        V = self.V
        c = int(labels.max()) + 1
        while c < V:
            sig = (self.A @ _WEIGHTS_F[labels]).astype(np.int64)
            labels, uniq = _relabel([labels, labels[self.ant], sig[:, 0], sig[:, 1]])
            hasher.update(uniq.tobytes())
            if len(uniq) == c:
                break
            c = len(uniq)
        return labels

    def _fixed_pair(self, labels: np.ndarray, lo: int, hi: int) -> tuple[int, int] | None:
        sizes = np.bincount(labels)
        single = np.flatnonzero(sizes[labels] == 1)
        single = single[(single >= lo) & (single < hi)]
        if len(single) < 2:
            return None
        single = single[np.argsort(labels[single])]
        first = int(single[0] - lo) % self.n
        for v in single[1:]:
            other = int(v - lo) % self.n
            if other != first:
                return first, other
        return None

    def _quad_split(self, labels: np.ndarray, hasher) -> tuple[np.ndarray, bool]:
        n, V = self.n, self.V
        if n < 4:
            return labels, False
        feat = np.zeros(V, dtype=np.int64)
        used = False
        rows = self._fixed_pair(labels, 0, 2 * n)
        if rows is not None:
            q = self._quad_hash("row", *rows)
            feat[:2 * n] = np.concatenate([q, q])
            used = True
        cols = self._fixed_pair(labels, 2 * n, 4 * n)
        if cols is not None:
            q = self._quad_hash("col", *cols)
            feat[2 * n:] = np.concatenate([q, q])
            used = True
        if not used:
            return labels, False
        new, uniq = _relabel([labels, feat])
        hasher.update(b"quad" + uniq.tobytes())
        if len(uniq) == int(labels.max()) + 1:
            return labels, False
        return new, True

    def refine(self, labels: np.ndarray) -> tuple[np.ndarray, int]:
        hasher = blake2b(digest_size=8)
        while True:
            labels = self._equitable(labels, hasher)
            labels, split = self._quad_split(labels, hasher)
            if not split:
                break
        return labels, int.from_bytes(hasher.digest(), "big")

    @staticmethod
    def individualize(labels: np.ndarray, v: int) -> np.ndarray:
        new = 2 * labels + 1
        new[v] -= 1
        return np.unique(new, return_inverse=True)[1].reshape(-1)

    @staticmethod
    def target_cell(labels: np.ndarray) -> np.ndarray:
        sizes = np.bincount(labels)
        big = np.flatnonzero(sizes > 1)
        cell = big[np.argmin(sizes[big])]
        return np.flatnonzero(labels == cell)

    # -- leaves
    def certificate(self, labels: np.ndarray) -> bytes:
        inv = np.argsort(labels)
        n2 = 2 * self.n
        rows, cols = inv[:n2], inv[n2:] - n2
        block = self.incidence[np.ix_(rows, cols)]
        return np.packbits(block).tobytes() + labels[self.ant[inv]].astype(np.int32).tobytes()

    def is_automorphism(self, g: np.ndarray) -> bool:
        return (np.array_equal(self.A[np.ix_(g, g)], self.A)
                and np.array_equal(g[self.ant], self.ant[g])
                and np.array_equal(self.initial[g], self.initial))

    def leaf_matrix(self, labels: np.ndarray) -> tuple[np.ndarray, MonomialPair]:
        """Sign matrix read off a discrete partition, and (P, Q) producing it from H."""
        n = self.n
        inv = np.argsort(labels)

        def reps(block: np.ndarray, base: int):
            seen, out = set(), []
            for v in block:
                idx = int(v - base) % n
                if idx in seen:
                    continue
                seen.add(idx)
                out.append((idx, 1 if v - base < n else -1))
            return out

        rrep = reps(inv[:2 * n], 0)
        crep = reps(inv[2 * n:], 2 * n)
        P = SignedPermutation(tuple(i for i, _ in rrep), tuple(s for _, s in rrep))
        Qm = np.zeros((n, n), dtype=np.int64)
        for b, (j, t) in enumerate(crep):
            Qm[j, b] = t
        pair = MonomialPair(P, SignedPermutation.from_matrix(Qm))
        return pair.apply(SignMatrix.from_array(self.h)), pair


# ------------------------------------------------------------ search

@dataclass
class _Leaf:
    labels: np.ndarray
    seq: tuple[int, ...]
    traces: tuple[int, ...]
    cert: bytes


def _common_prefix(a: tuple, b: tuple) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


@dataclass
class SearchResult:
    canonical: np.ndarray
    pair: MonomialPair
    group_order: int
    generators: list[np.ndarray] = field(repr=False)
    nodes: int = 0


class _Search:
    def __init__(self, graph: HadamardGraph):
        self.g = graph
        self.first: _Leaf | None = None
        self.best: _Leaf | None = None
        self.gens: list[np.ndarray] = []
        self.nodes = 0
        self._orbit_cache: dict[tuple, np.ndarray] = {}

    def run(self) -> SearchResult:
        g = self.g
        labels, tr = g.refine(g.initial.copy())
        self._explore(labels, (), (tr,))
        order = 1
        seq = self.first.seq
        for d in range(len(seq)):
            orb = self._orbits(seq[:d])
            order *= int(np.count_nonzero(orb == orb[seq[d]]))
        canon, pair = g.leaf_matrix(self.best.labels)
        return SearchResult(canon, pair, order, self.gens, self.nodes)

    def _orbits(self, fixed: tuple[int, ...]) -> np.ndarray:
        key = (fixed, len(self.gens))
        lab = self._orbit_cache.get(key)
        if lab is not None:
            return lab
        fx = np.array(fixed, dtype=np.int64)
        gens = [p for p in self.gens if np.array_equal(p[fx], fx)] if len(fx) else self.gens
        lab = np.arange(self.g.V)
        invs = [np.argsort(p) for p in gens]
        while True:
            old = lab
            for p, q in zip(gens, invs):
                lab = np.minimum(lab, lab[p])
                lab = np.minimum(lab, lab[q])
            lab = lab[lab]
            if np.array_equal(lab, old):
                break
        self._orbit_cache[key] = lab
        return lab

    def _viable(self, traces: tuple[int, ...]) -> bool:
        if self.first is None:
            return True
        k = len(traces)
        if traces == self.first.traces[:k]:
            return True
        return traces <= self.best.traces[:k]

    def _explore(self, labels, seq, traces):
        self.nodes += 1
        g = self.g
        if int(labels.max()) + 1 == g.V:
            return self._leaf(labels, seq, traces)
        d = len(seq)
        tried: list[int] = []
        for w in g.target_cell(labels):
            w = int(w)
            if tried:
                orb = self._orbits(seq)
                if orb[w] in {orb[t] for t in tried}:
                    continue
            child, tr = g.refine(g.individualize(labels, w))
            ctr = traces + (tr,)
            if not self._viable(ctr):
                continue
            tried.append(w)
            jump = self._explore(child, seq + (w,), ctr)
            if jump is not None and jump < d:
                return jump
        return None

    def _record(self, ref: _Leaf, labels: np.ndarray) -> None:
        gamma = np.argsort(labels)[ref.labels]
        if not self.g.is_automorphism(gamma):
            raise AssertionError("equal leaves gave a non-automorphism")
        self.gens.append(gamma)

    def _leaf(self, labels, seq, traces):
        cert = self.g.certificate(labels)
        leaf = _Leaf(labels, seq, traces, cert)
        if self.first is None:
            self.first = self.best = leaf
            return None
        f, b = self.first, self.best
        if traces == f.traces and cert == f.cert:
            self._record(f, labels)
            return _common_prefix(seq, f.seq)
        if traces == b.traces and cert == b.cert:
            self._record(b, labels)
            return _common_prefix(seq, b.seq)
        if (traces, cert) < (b.traces, b.cert):
            self.best = leaf
        return None


def search(h) -> SearchResult:
    return _Search(HadamardGraph(h)).run()


# ------------------------------------------------------------ public API

def canonical_form(h) -> tuple[SignMatrix, MonomialPair]:
    """Canonical representative of the equivalence class of ``h`` and the
    pair (P, Q) with P h Q equal to it."""
    res = search(h)
    return SignMatrix.from_array(res.canonical), res.pair


@dataclass
class EquivalenceResult:
    equivalent: bool
    witness: MonomialPair | None = None

    def __bool__(self) -> bool:
        return self.equivalent

    def to_json(self) -> dict:
        out: dict = {"equivalent": self.equivalent}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def are_equivalent(h1, h2) -> EquivalenceResult:
    """Decide K = P H Q by comparing canonical forms; on success the
    witness satisfies ``witness.apply(h1) == h2``."""
    s1, s2 = _as_sign(h1), _as_sign(h2)
    if s1.order != s2.order:
        raise ValueError(f"orders differ: {s1.order} vs {s2.order}")
    c1, (p1, q1) = _unpack(canonical_form(s1))
    c2, (p2, q2) = _unpack(canonical_form(s2))
    if c1 != c2:
        return EquivalenceResult(False)
    witness = MonomialPair(p2.inverse() @ p1, q1 @ q2.inverse())
    if not witness.maps(s1, s2):
        raise AssertionError("equivalence witness failed verification")
    return EquivalenceResult(True, witness)


def _unpack(cf):
    canon, pair = cf
    return canon, (pair.P, pair.Q)


@dataclass
class AutomorphismResult:
    order: int
    convention: str = CONVENTION_NOTE
    generators: list[MonomialPair] = field(default_factory=list, repr=False)

    @property
    def order_mod_negation(self) -> int:
        return self.order // 2


def _gen_to_pair(gamma: np.ndarray, n: int) -> MonomialPair:
    # gamma: r_i^+ -> r_k^s and c_j^+ -> c_l^t forces H_ij = s t H_kl, i.e.
    # P[i, k] = s and Q[l, j] = t
    rows, cols = gamma[:n], gamma[2 * n:3 * n] - 2 * n
    perm = tuple(int(v) % n for v in rows)
    signs = tuple(1 if v < n else -1 for v in rows)
    Qm = np.zeros((n, n), dtype=np.int64)
    for j, v in enumerate(cols):
        Qm[int(v) % n, j] = 1 if v < n else -1
    return MonomialPair(SignedPermutation(perm, signs), SignedPermutation.from_matrix(Qm))


def automorphism_group(h) -> AutomorphismResult:
    s = _as_sign(h)
    res = search(s)
    gens = [_gen_to_pair(g, s.order) for g in res.generators]
    return AutomorphismResult(res.group_order, CONVENTION_NOTE, gens)


def automorphism_group_order(h) -> int:
    return automorphism_group(h).order


def brute_force_automorphism_order(h) -> int:
    """Count pairs (P, Q) with P H Q = H by trying every P (tiny orders only)."""
    a = _as_sign(h).array
    n = len(a)
    if n > 6:
        raise ValueError("brute force is limited to order <= 6")
    mons = [SignedPermutation(p, s).matrix()
            for p in itertools.permutations(range(n))
            for s in itertools.product((1, -1), repeat=n)]
    ainv = a.T / n
    count = 0
    for P in mons:
        # Q is forced: Q = (P H)^-1 H = H^-1 P^T H
        Q = np.rint(ainv @ P.T @ a).astype(np.int64)
        if np.all(np.abs(Q).sum(axis=0) == 1) and np.all(np.abs(Q).sum(axis=1) == 1) \
                and np.all(np.isin(Q, (-1, 0, 1))) and np.array_equal(P @ a @ Q, a):
            count += 1
    return count


# ------------------------------------------------------------ ternary codes

CODE_EQUIVALENCE_MAX_LENGTH = 12


@dataclass
class CodeEquivalenceResult:
    status: str                      # "equivalent", "inequivalent" or "undecided"
    perm: tuple[int, ...] | None = None
    signs: tuple[int, ...] | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "reason": self.reason}
        if self.perm is not None:
            out["perm"] = list(self.perm)
            out["signs"] = list(self.signs)
        return out


def _rowspace_key(a: np.ndarray) -> bytes:
    from .gf3 import Gf3Matrix, rref
    if a.shape[1] == 0:
        return b""
    r, rank, _ = rref(Gf3Matrix.from_array(a % 3))
    return r.to_array()[:rank].astype(np.int8).tobytes()


def apply_code_monomial(g, perm, signs) -> np.ndarray:
    """Columns of ``g`` moved by y[perm[i]] = signs[i] * x[i]."""
    g = np.asarray(g, dtype=np.int64)
    out = np.zeros_like(g)
    out[:, list(perm)] = g * np.asarray(signs)
    return out % 3


def codes_equivalent(c1, c2) -> CodeEquivalenceResult:
    """Monomial equivalence of ternary codes by backtracking (length <= 12).

    Coordinates of ``c1`` are assigned one at a time; a partial assignment
    survives only while the projection of ``c1`` onto the assigned
    coordinates (with signs) equals the projection of ``c2`` onto their
    images.  Longer codes get an invariant comparison and at best
    "undecided".
    """
    from .gf3 import weight_distribution_small
    if c1.n != c2.n or c1.k != c2.k:
        return CodeEquivalenceResult("inequivalent", reason="parameters differ")
    n, k = c1.n, c1.k
    if k <= 20:
        if weight_distribution_small(c1) != weight_distribution_small(c2):
            return CodeEquivalenceResult("inequivalent", reason="weight distributions differ")
    if n > CODE_EQUIVALENCE_MAX_LENGTH:
        return CodeEquivalenceResult("undecided",
                                     reason=f"length {n} above brute-force limit; invariants agree")
    g1 = c1.generator.to_array().astype(np.int64) if k else np.zeros((0, n), dtype=np.int64)
    g2 = c2.generator.to_array().astype(np.int64) if k else np.zeros((0, n), dtype=np.int64)
    if k == 0:
        return CodeEquivalenceResult("equivalent", tuple(range(n)), (1,) * n)
    perm: list[int] = []
    signs: list[int] = []
    used = [False] * n

    def extend(t: int) -> bool:
        if t == n:
            return True
        for j in range(n):
            if used[j]:
                continue
            for s in ((1,) if t == 0 else (1, -1)):
                cols1 = g1[:, :t + 1] * np.asarray(signs + [s])
                cols2 = g2[:, perm + [j]]
                if _rowspace_key(cols1) != _rowspace_key(cols2):
                    continue
                perm.append(j)
                signs.append(s)
                used[j] = True
                if extend(t + 1):
                    return True
                perm.pop()
                signs.pop()
                used[j] = False
        return False

    if not extend(0):
        return CodeEquivalenceResult("inequivalent", reason="exhaustive search")
    mapped = apply_code_monomial(g1, perm, signs)
    if not all(c2.contains(row) for row in mapped):
        raise AssertionError("code equivalence witness failed verification")
    return CodeEquivalenceResult("equivalent", tuple(perm), tuple(signs))
