"""Sign matrices, Hadamard matrices and their constructions.

GF(3) and signs are identified by 0 <-> 0, 1 <-> +1, 2 <-> -1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .constructions import (
    ConstructionError,
    build_blocks,
    build_nv_code,
    is_prime,
    pless_core,
    quadratic_character,
)
from .gf3 import Gf3Vector, TernaryCode, rank3


class NotHadamardError(ValueError):
    pass


@dataclass(frozen=True)
class SignMatrix:
    """Square +-1 matrix; row i is an int whose bit j is set iff entry (i, j) = +1."""

    order: int
    rows: tuple[int, ...]

    @classmethod
    def from_array(cls, a) -> "SignMatrix":
        a = np.asarray(a, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.abs(a) == 1):
            raise ValueError("entries must be +1 or -1")
        n = a.shape[0]
        weights = 1 << np.arange(n, dtype=object)
        rows = tuple(int(((r == 1).astype(object) * weights).sum()) for r in a)
        return cls(n, rows)

    @property
    def array(self) -> np.ndarray:
        n = self.order
        out = np.empty((n, n), dtype=np.int64)
        for i, r in enumerate(self.rows):
            bits = np.array([(r >> j) & 1 for j in range(n)], dtype=np.int64)
            out[i] = 2 * bits - 1
        return out

    def __neg__(self) -> "SignMatrix":
        full = (1 << self.order) - 1
        return SignMatrix(self.order, tuple(full ^ r for r in self.rows))

    @property
    def T(self) -> "SignMatrix":
        return SignMatrix.from_array(self.array.T)

    def __repr__(self) -> str:
        return f"SignMatrix(order={self.order})"


def _as_sign(m) -> SignMatrix:
    if isinstance(m, HadamardMatrix):
        return m.matrix
    if isinstance(m, SignMatrix):
        return m
    return SignMatrix.from_array(m)


def is_hadamard(m) -> bool:
    """All distinct rows have integer inner product 0 (n/2 sign disagreements)."""
    m = _as_sign(m)
    n = m.order
    if n == 1:
        return True
    if n % 2:
        return False
    half = n // 2
    rows = m.rows
    return all((rows[i] ^ rows[j]).bit_count() == half
               for i in range(n) for j in range(i + 1, n))


@dataclass(frozen=True)
class HadamardMatrix:
    matrix: SignMatrix

    def __post_init__(self):
        n = self.matrix.order
        if not (n in (1, 2) or n % 4 == 0):
            raise NotHadamardError(f"order {n} is not 1, 2 or a multiple of 4")
        if not is_hadamard(self.matrix):
            raise NotHadamardError("rows are not pairwise orthogonal")

    @classmethod
    def from_array(cls, a) -> "HadamardMatrix":
        return cls(SignMatrix.from_array(a))

    @property
    def order(self) -> int:
        return self.matrix.order

    @property
    def array(self) -> np.ndarray:
        return self.matrix.array

    def __neg__(self) -> "HadamardMatrix":
        return HadamardMatrix(-self.matrix)


def is_skew(h) -> bool:
    a = _as_sign(h).array
    return bool(np.array_equal(a + a.T, 2 * np.eye(len(a), dtype=np.int64)))


def build_h_nv(p: int, a: int = 1) -> HadamardMatrix:
    """The order-2(p+1) matrix whose rows are full-weight words of NV^(a)(p)."""
    if not is_prime(p) or p % 24 != 5:
        raise ConstructionError(f"p = {p} is not a prime congruent to 5 mod 24")
    if a not in (1, -1):
        raise ConstructionError("a must be +1 or -1")
    blk = build_blocks(p)
    x, y = blk.x, blk.y
    ai = a * np.eye(p + 1, dtype=np.int64)
    h = np.block([[x - y.T + ai, y + x.T + ai],
                  [-y.T - x - ai, x.T - y + ai]])
    had = HadamardMatrix.from_array(h)
    if not rows_in_code(had, build_nv_code(p, a)):
        raise ConstructionError("rows of H_NV are not codewords of NV")
    return had


@dataclass(frozen=True)
class CyclotomicClasses:
    p: int
    omega: int
    classes: tuple[frozenset[int], ...]
    epsilon: int

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.classes[i % 4]

    def union(self, *indices: int) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for i in indices:
            out = out | self[i]
        return out


def primitive_root(p: int) -> int:
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")
    if p == 2:
        return 1
    factors = {f for f in range(2, p) if (p - 1) % f == 0 and is_prime(f)}
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable")


def cyclotomic_classes(p: int) -> CyclotomicClasses:
    """Index-4 cosets C_i = w^i <w^4> for the smallest primitive root w."""
    if not is_prime(p) or p % 8 != 5:
        raise ConstructionError(f"p = {p} is not a prime congruent to 5 mod 8")
    w = primitive_root(p)
    classes = tuple(frozenset(pow(w, i + 4 * j, p) for j in range((p - 1) // 4)) for i in range(4))
    eps = next(i for i in range(4) if (p - 2) % p in classes[i])
    assert p - 1 in classes[2] and eps in (1, 3)
    return CyclotomicClasses(p, w, classes, eps)


@dataclass(frozen=True)
class SdsPair:
    v: int
    k: int
    lam: int
    d1: frozenset[int]
    d2: frozenset[int]

    @classmethod
    def from_sets(cls, d1, d2, v: int) -> "SdsPair":
        d1 = frozenset(x % v for x in d1)
        d2 = frozenset(x % v for x in d2)
        k = len(d1)
        lam = 2 * k * (k - 1) // (v - 1) if v > 1 else 0
        return cls(v, k, lam, d1, d2)


def difference_counts(pair: SdsPair) -> np.ndarray:
    counts = np.zeros(pair.v, dtype=np.int64)
    for d in (pair.d1, pair.d2):
        for x in d:
            for y in d:
                if x != y:
                    counts[(x - y) % pair.v] += 1
    return counts


def is_sds(pair: SdsPair) -> bool:
    """Exact difference check.  A degenerate pair with no differences at all
    (lambda = 0) is not counted as a supplementary difference set."""
    if len(pair.d1) != pair.k or len(pair.d2) != pair.k or pair.lam < 1:
        return False
    counts = difference_counts(pair)
    return bool(np.all(counts[1:] == pair.lam))


def type1_matrix(subset, v: int) -> SignMatrix | np.ndarray:
    s = {x % v for x in subset}
    idx = np.arange(v)
    diff = (idx[None, :] - idx[:, None]) % v
    return np.where(np.isin(diff, list(s)), 1, -1).astype(np.int64)


def build_h_sds(d1, d2=None, v: int | None = None) -> HadamardMatrix:
    """Bordered Hadamard matrix of order 4(m+1) from a (2m+1, m, m-1) pair."""
    if isinstance(d1, SdsPair):
        pair = d1
    else:
        pair = SdsPair.from_sets(d1, d2, v)
    v = pair.v
    m = (v - 1) // 2
    if v % 2 == 0 or pair.k != m or pair.lam != m - 1 or not is_sds(pair):
        raise ConstructionError(f"not a ({v}, {m}, {m - 1}) supplementary difference set pair")
    m1 = type1_matrix(pair.d1, v)
    m2 = type1_matrix(pair.d2, v)
    one = np.ones((1, v), dtype=np.int64)
    h = np.block([
        [np.array([[1, 1]]), one, -one],
        [np.array([[-1, 1]]), -one, -one],
        [np.concatenate([-one.T, one.T], axis=1), -m1, -m2],
        [np.concatenate([one.T, one.T], axis=1), m2.T, -m1.T],
    ])
    return HadamardMatrix.from_array(h)


def sds_for_theorem(p: int, a: int) -> tuple[frozenset[int], frozenset[int]]:
    """The pair (D1, D2) whose bordered matrix is equivalent to H_NV^(a)(p)."""
    cc = cyclotomic_classes(p)
    e = cc.epsilon
    if a == 1:
        return cc.union(2, 2 + e), cc.union(0, e + 2)
    return cc.union(0, e), cc.union(2, e)


def jacobsthal(q: int) -> np.ndarray:
    idx = np.arange(q)
    return np.array([[quadratic_character(q, b - a) for b in idx] for a in idx], dtype=np.int64)


def build_paley(q: int, kind: str = "I") -> HadamardMatrix:
    """Paley type I (q = 3 mod 4, order q+1, skew) or type II (q = 1 mod 4,
    order 2(q+1)).  Index order is (inf, 0, ..., q-1)."""
    if not is_prime(q):
        raise ConstructionError(f"{q} is not prime")
    kind = kind.upper()
    if kind == "I":
        if q % 4 != 3:
            raise ConstructionError(f"type I needs q = 3 mod 4, got {q}")
        s = np.zeros((q + 1, q + 1), dtype=np.int64)
        s[0, 1:] = 1
        s[1:, 0] = -1
        # entry chi(a - b): with this orientation the rows lie in build_extended_qr(q)
        s[1:, 1:] = jacobsthal(q).T
        return HadamardMatrix.from_array(np.eye(q + 1, dtype=np.int64) + s)
    if kind == "II":
        if q % 4 != 1:
            raise ConstructionError(f"type II needs q = 1 mod 4, got {q}")
        s = pless_core(q)
        i = np.eye(q + 1, dtype=np.int64)
        return HadamardMatrix.from_array(np.block([[s + i, s - i], [s - i, -s - i]]))
    raise ConstructionError(f"unknown Paley type {kind!r}")


def sylvester(k: int) -> HadamardMatrix:
    h = np.array([[1]], dtype=np.int64)
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return HadamardMatrix.from_array(h)


# ------------------------------------------------------------ binary / octal

def to_binary(h) -> np.ndarray:
    return (_as_sign(h).array > 0).astype(np.uint8)


def from_binary(b) -> SignMatrix:
    b = np.asarray(b)
    if not np.isin(b, (0, 1)).all():
        raise ValueError("binary matrix entries must be 0 or 1")
    return SignMatrix.from_array(2 * b.astype(np.int64) - 1)


def octal_decode(text: str, order: int | None = None) -> np.ndarray:
    """Rows of 3-bit octal digits, most significant bit first."""
    digits = re.sub(r"\s+", "", text)
    bad = re.search(r"[^0-7]", digits)
    if bad:
        raise ValueError(f"non-octal character {bad.group()!r}")
    if order is None:
        order = round((3 * len(digits)) ** 0.5)
    if order % 3 or len(digits) * 3 != order * order:
        raise ValueError(f"{len(digits)} digits do not describe an order-{order} matrix")
    bits = np.array([[(int(d) >> s) & 1 for s in (2, 1, 0)] for d in digits], dtype=np.uint8)
    return bits.reshape(order, order)


def octal_encode(b, per_line: int | None = None) -> str:
    b = np.asarray(b, dtype=np.uint8)
    n = b.shape[1]
    if n % 3:
        raise ValueError("row length must be a multiple of 3")
    trip = b.reshape(b.shape[0], n // 3, 3)
    vals = trip[:, :, 0] * 4 + trip[:, :, 1] * 2 + trip[:, :, 2]
    rows = ["".join(str(int(x)) for x in r) for r in vals]
    if per_line is None:
        return "\n".join(rows) + "\n"
    flat = "".join(rows)
    return "\n".join(flat[i:i + per_line] for i in range(0, len(flat), per_line)) + "\n"


def figure2_text() -> str:
    return resources.files("ternary_hadamard").joinpath("data/figure2.txt").read_text()


def figure2_binary() -> np.ndarray:
    return octal_decode(figure2_text(), 60)


def figure2_hadamard() -> HadamardMatrix:
    """H_{NV,2} = 2B - J from the shipped octal listing."""
    return HadamardMatrix(from_binary(figure2_binary()))


# ------------------------------------------------------------ containment

def sign_row_to_gf3(row) -> Gf3Vector:
    return Gf3Vector.from_values(1 if x == 1 else 2 if x == -1 else 0 for x in row)


def rows_in_code(h, code: TernaryCode) -> bool:
    a = _as_sign(h).array
    if a.shape[1] != code.length:
        raise ValueError(f"order {a.shape[1]} does not match code length {code.length}")
    return all(code.contains(sign_row_to_gf3(r)) for r in a)


def hadamard_rank3(h) -> int:
    return rank3(_as_sign(h).array)
