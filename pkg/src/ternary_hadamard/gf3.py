"""Exact linear algebra over GF(3) on two bit planes.

A vector of length n is a pair of Python integers ``(lo, hi)``; bit ``i`` of
``lo`` is set when coordinate ``i`` equals 1 and bit ``i`` of ``hi`` when it
equals 2.  Both bits set is never produced.  With this encoding

    t   = (a_lo | b_hi) ^ (a_hi | b_lo)
    lo' = (a_hi | b_hi) ^ t
    hi' = (a_lo | b_lo) ^ t

is coordinatewise addition mod 3, negation swaps the planes, and the weight
is ``popcount(lo | hi)``.  The same formulas are used on ``uint64`` words in
:mod:`ternary_hadamard._kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def plane_add(alo: int, ahi: int, blo: int, bhi: int) -> tuple[int, int]:
    t = (alo | bhi) ^ (ahi | blo)
    return (ahi | bhi) ^ t, (alo | blo) ^ t


def plane_sub(alo: int, ahi: int, blo: int, bhi: int) -> tuple[int, int]:
    return plane_add(alo, ahi, bhi, blo)


@dataclass(frozen=True)
class Gf3Vector:
    length: int
    lo: int = 0
    hi: int = 0

    def __post_init__(self):
        if self.lo & self.hi:
            raise ValueError("bit planes overlap: value 3 is not a GF(3) element")
        if (self.lo | self.hi) >> self.length:
            raise ValueError("bits set beyond the vector length")

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Gf3Vector":
        lo = hi = 0
        n = 0
        for i, x in enumerate(values):
            x = int(x) % 3
            if x == 1:
                lo |= 1 << i
            elif x == 2:
                hi |= 1 << i
            n = i + 1
        return cls(n, lo, hi)

    @classmethod
    def zero(cls, length: int) -> "Gf3Vector":
        return cls(length)

    def values(self) -> list[int]:
        lo, hi = self.lo, self.hi
        return [((lo >> i) & 1) + 2 * ((hi >> i) & 1) for i in range(self.length)]

    def to_array(self) -> np.ndarray:
        return np.array(self.values(), dtype=np.int8)

    def __getitem__(self, i: int) -> int:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        i %= self.length
        return ((self.lo >> i) & 1) + 2 * ((self.hi >> i) & 1)

    def __len__(self) -> int:
        return self.length

    def _check(self, other: "Gf3Vector") -> None:
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __add__(self, other: "Gf3Vector") -> "Gf3Vector":
        self._check(other)
        return Gf3Vector(self.length, *plane_add(self.lo, self.hi, other.lo, other.hi))

    def __sub__(self, other: "Gf3Vector") -> "Gf3Vector":
        self._check(other)
        return Gf3Vector(self.length, *plane_sub(self.lo, self.hi, other.lo, other.hi))

    def __neg__(self) -> "Gf3Vector":
        return Gf3Vector(self.length, self.hi, self.lo)

    def scale(self, c: int) -> "Gf3Vector":
        c %= 3
        if c == 0:
            return Gf3Vector(self.length)
        return self if c == 1 else -self

    def dot(self, other: "Gf3Vector") -> int:
        self._check(other)
        ones = ((self.lo & other.lo) | (self.hi & other.hi)).bit_count()
        twos = ((self.lo & other.hi) | (self.hi & other.lo)).bit_count()
        return (ones + 2 * twos) % 3

    @property
    def weight(self) -> int:
        return (self.lo | self.hi).bit_count()

    @property
    def support(self) -> int:
        return self.lo | self.hi

    def is_zero(self) -> bool:
        return not (self.lo | self.hi)

    def permute(self, perm: Sequence[int]) -> "Gf3Vector":
        """Coordinate ``t`` of the result is coordinate ``perm[t]`` of ``self``."""
        vals = self.values()
        return Gf3Vector.from_values(vals[j] for j in perm)

    def __repr__(self) -> str:
        return f"Gf3Vector({''.join(map(str, self.values()))})"


@dataclass(frozen=True)
class Gf3Matrix:
    """Immutable matrix over GF(3); row ``i`` is stored as two bit planes."""

    ncols: int
    planes: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "Gf3Matrix":
        vecs = [Gf3Vector.from_values(r) for r in rows]
        if ncols is None:
            if not vecs:
                raise ValueError("cannot infer the column count of an empty matrix")
            ncols = vecs[0].length
        for v in vecs:
            if v.length != ncols:
                raise ValueError("rows of unequal length")
        return cls(ncols, tuple((v.lo, v.hi) for v in vecs))

    @classmethod
    def from_vectors(cls, vecs: Sequence[Gf3Vector], ncols: int | None = None) -> "Gf3Matrix":
        if ncols is None:
            ncols = vecs[0].length
        if any(v.length != ncols for v in vecs):
            raise ValueError("rows of unequal length")
        return cls(ncols, tuple((v.lo, v.hi) for v in vecs))

    @classmethod
    def from_array(cls, a) -> "Gf3Matrix":
        a = np.asarray(a, dtype=np.int64) % 3
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows(a.tolist(), ncols=a.shape[1])

    @classmethod
    def identity(cls, n: int) -> "Gf3Matrix":
        return cls(n, tuple((1 << i, 0) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.planes)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[Gf3Vector, ...]:
        return tuple(Gf3Vector(self.ncols, lo, hi) for lo, hi in self.planes)

    def row(self, i: int) -> Gf3Vector:
        lo, hi = self.planes[i]
        return Gf3Vector(self.ncols, lo, hi)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int8)
        for i, (lo, hi) in enumerate(self.planes):
            out[i] = _unpack(lo, self.ncols) + 2 * _unpack(hi, self.ncols)
        return out

    def transpose(self) -> "Gf3Matrix":
        return Gf3Matrix.from_array(self.to_array().T) if self.nrows else Gf3Matrix(0)

    def __matmul__(self, other: "Gf3Matrix") -> "Gf3Matrix":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")
        prod = self.to_array().astype(np.int64) @ other.to_array().astype(np.int64)
        return Gf3Matrix.from_array(prod % 3)

    def permute_columns(self, perm: Sequence[int]) -> "Gf3Matrix":
        return Gf3Matrix.from_array(self.to_array()[:, list(perm)])

    def is_zero(self) -> bool:
        return all(not (lo | hi) for lo, hi in self.planes)

    def __repr__(self) -> str:
        body = "; ".join("".join(map(str, r.values())) for r in self.rows)
        return f"Gf3Matrix({self.nrows}x{self.ncols}: {body})"


def _unpack(x: int, n: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(np.int8)


def rref(m: Gf3Matrix) -> tuple[Gf3Matrix, int, list[int]]:
    """Reduced row-echelon form; zero rows are kept at the bottom."""
    rows = [list(p) for p in m.planes]
    pivots: list[int] = []
    r = 0
    for col in range(m.ncols):
        bit = 1 << col
        piv = next((i for i in range(r, len(rows)) if (rows[i][0] | rows[i][1]) & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if rows[r][1] & bit:
            rows[r] = [rows[r][1], rows[r][0]]
        plo, phi = rows[r]
        for i in range(len(rows)):
            if i == r:
                continue
            lo, hi = rows[i]
            if lo & bit:
                rows[i] = list(plane_sub(lo, hi, plo, phi))
            elif hi & bit:
                rows[i] = list(plane_add(lo, hi, plo, phi))
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return Gf3Matrix(m.ncols, tuple(tuple(x) for x in rows)), r, pivots


def rank3(m) -> int:
    """GF(3) rank of an integer matrix (entries reduced mod 3 first)."""
    if isinstance(m, Gf3Matrix):
        return rref(m)[1]
    a = np.asarray(m, dtype=np.int64)
    if a.size == 0:
        return 0
    return rref(Gf3Matrix.from_array(a % 3))[1]


@dataclass(frozen=True)
class TernaryCode:
    """Linear code over GF(3), held as its reduced row-echelon generator."""

    length: int
    generator: Gf3Matrix
    pivots: tuple[int, ...]

    @classmethod
    def from_generator(cls, g) -> "TernaryCode":
        if not isinstance(g, Gf3Matrix):
            g = Gf3Matrix.from_array(g)
        red, k, piv = rref(g)
        return cls(g.ncols, Gf3Matrix(g.ncols, red.planes[:k]), tuple(piv))

    @classmethod
    def zero(cls, length: int) -> "TernaryCode":
        return cls(length, Gf3Matrix(length), ())

    @classmethod
    def full(cls, length: int) -> "TernaryCode":
        return cls(length, Gf3Matrix.identity(length), tuple(range(length)))

    @property
    def dimension(self) -> int:
        return self.generator.nrows

    @property
    def n(self) -> int:
        return self.length

    @property
    def k(self) -> int:
        return self.dimension

    def contains(self, v) -> bool:
        if not isinstance(v, Gf3Vector):
            v = Gf3Vector.from_values(v)
        if v.length != self.length:
            raise ValueError("length mismatch")
        # reduce against the RREF basis; v is in the code iff nothing is left
        lo, hi = v.lo, v.hi
        for (plo, phi), col in zip(self.generator.planes, self.pivots):
            bit = 1 << col
            if lo & bit:
                lo, hi = plane_sub(lo, hi, plo, phi)
            elif hi & bit:
                lo, hi = plane_add(lo, hi, plo, phi)
        return not (lo | hi)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def encode(self, message) -> Gf3Vector:
        acc = Gf3Vector(self.length)
        for c, row in zip(message, self.generator.rows):
            acc = acc + row.scale(c)
        return acc

    def __repr__(self) -> str:
        return f"TernaryCode([{self.length}, {self.dimension}])"


def dual_code(c: TernaryCode) -> TernaryCode:
    n, piv = c.length, c.pivots
    g = c.generator.to_array()
    pivset = set(piv)
    rows = []
    for j in range(n):
        if j in pivset:
            continue
        h = np.zeros(n, dtype=np.int64)
        h[j] = 1
        for i, pc in enumerate(piv):
            h[pc] = -g[i, j]
        rows.append(h % 3)
    if not rows:
        return TernaryCode.zero(n)
    return TernaryCode.from_generator(Gf3Matrix.from_array(np.array(rows)))


def is_self_orthogonal(c: TernaryCode) -> bool:
    rows = c.generator.rows
    return all(rows[i].dot(rows[j]) == 0 for i in range(len(rows)) for j in range(i, len(rows)))


def is_self_dual(c: TernaryCode) -> bool:
    return 2 * c.dimension == c.length and is_self_orthogonal(c)


def standard_form(c) -> tuple[Gf3Matrix, tuple[int, ...]]:
    """Return ``(G', perm)`` with ``G' = [I_k | A]`` generating the code whose
    column ``t`` is column ``perm[t]`` of the original.

    Pivot columns come first (leftmost-pivot greedy, i.e. RREF pivots in
    increasing order), then the remaining columns in increasing order.
    """
    if isinstance(c, TernaryCode):
        red, piv = c.generator, list(c.pivots)
    else:
        red, k, piv = rref(c)
        if k < c.nrows:
            raise ValueError(f"generator is rank deficient: rank {k} < {c.nrows} rows")
        red = Gf3Matrix(c.ncols, red.planes[:k])
    rest = [j for j in range(red.ncols) if j not in set(piv)]
    perm = tuple(piv + rest)
    return red.permute_columns(perm), perm


def all_codewords(c: TernaryCode) -> np.ndarray:
    """Every codeword as a row of a (3**k, n) int8 array.  Small k only."""
    k = c.dimension
    if k > 14:
        raise ValueError(f"dimension {k} too large for explicit listing")
    if k == 0:
        return np.zeros((1, c.length), dtype=np.int8)
    msgs = np.array(np.meshgrid(*([np.arange(3)] * k), indexing="ij")).reshape(k, -1).T
    return ((msgs @ c.generator.to_array().astype(np.int64)) % 3).astype(np.int8)


def weight_distribution_small(c: TernaryCode, max_dimension: int = 20) -> dict[int, int]:
    """Weight distribution by enumerating all ``3**k`` codewords."""
    from ._kernels import pack_rows, weight_distribution_kernel

    k = c.dimension
    if k > max_dimension:
        raise ValueError(f"dimension {k} exceeds the enumeration limit {max_dimension}")
    if k == 0:
        return {0: 1}
    lo, hi = pack_rows(c.generator.to_array())
    counts = weight_distribution_kernel(lo, hi, c.length)
    return {w: int(x) for w, x in enumerate(counts) if x}


def minimum_weight_small(c: TernaryCode) -> int:
    dist = weight_distribution_small(c)
    return min((w for w in dist if w), default=0)


# ---------------------------------------------------------------- text format

_GF3_CHARS = {"0": 0, "1": 1, "2": 2}
_SIGN_CHARS = {"+": 1, "-": -1, "0": 0}


def parse_matrix_text(text: str) -> tuple[dict[str, str], np.ndarray]:
    """Parse the row-per-line text format.

    Rows use ``0/1/2`` (GF(3)) or ``+/-/0`` (sign and integer matrices).
    Lines starting with ``#`` carry ``key: value`` header fields.  Spaces
    inside rows are ignored.
    """
    header: dict[str, str] = {}
    rows: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, val = body.split(":", 1)
                header[key.strip()] = val.strip()
            continue
        line = line.replace(" ", "").replace("\t", "")
        table = _SIGN_CHARS if any(ch in "+-" for ch in line) else _GF3_CHARS
        try:
            rows.append([table[ch] for ch in line])
        except KeyError as exc:
            raise ValueError(f"line {lineno}: unexpected character {exc.args[0]!r}") from None
    if not rows:
        raise ValueError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rows of unequal length")
    return header, np.array(rows, dtype=np.int64)


def format_gf3(m, header: dict[str, object] | None = None) -> str:
    a = m.to_array() if isinstance(m, Gf3Matrix) else np.asarray(m) % 3
    lines = [f"# {k}: {v}" for k, v in (header or {}).items()]
    lines += ["".join(str(int(x)) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def format_signs(m, header: dict[str, object] | None = None) -> str:
    chars = {1: "+", -1: "-", 0: "0"}
    lines = [f"# {k}: {v}" for k, v in (header or {}).items()]
    lines += ["".join(chars[int(x)] for x in row) for row in np.asarray(m)]
    return "\n".join(lines) + "\n"


def format_code(c: TernaryCode, name: str) -> str:
    return format_gf3(c.generator, {"name": name, "n": c.length, "k": c.dimension})


def parse_code(text: str) -> tuple[str, TernaryCode]:
    header, a = parse_matrix_text(text)
    code = TernaryCode.from_generator(Gf3Matrix.from_array(a % 3))
    if "n" in header and int(header["n"]) != code.length:
        raise ValueError("header length does not match the rows")
    if "k" in header and int(header["k"]) != code.dimension:
        raise ValueError("header dimension does not match the rank of the rows")
    return header.get("name", ""), code
