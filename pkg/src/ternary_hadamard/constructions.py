"""Code families: NV^(a)(p), extended quadratic residue codes, Pless
symmetry codes and four-negacirculant codes.

Elements of F_p are ordered 0, 1, ..., p-1 throughout.  Matrices that live
over the integers (X, Y, R_X, R_Y, the Pless core) are plain ``int64``
numpy arrays; codes are :class:`~ternary_hadamard.gf3.TernaryCode`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf3 import Gf3Matrix, TernaryCode, Gf3Vector, is_self_dual


class ConstructionError(ValueError):
    """A construction precondition failed or its self-check did not hold."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ConstructionError(f"{p} is not prime")


@lru_cache(maxsize=None)
def _squares(p: int) -> frozenset[int]:
    return frozenset((x * x) % p for x in range(1, p))


def quadratic_character(p: int, x: int) -> int:
    _require_prime(p)
    x %= p
    if x == 0:
        return 0
    return 1 if x in _squares(p) else -1


@lru_cache(maxsize=None)
def _sqrt_table(p: int) -> dict[int, int]:
    # one root per nonzero square, scanning c = 1 .. (p-1)/2
    table: dict[int, int] = {}
    for c in range(1, (p - 1) // 2 + 1):
        table.setdefault((c * c) % p, c)
    return table


@dataclass(frozen=True)
class NvParameters:
    p: int
    a: int = 1

    def __post_init__(self):
        _require_prime(self.p)
        if self.p % 8 != 5:
            raise ConstructionError(f"p = {self.p} is not 5 mod 8")
        if self.a not in (1, -1):
            raise ConstructionError("a must be +1 or -1")

    @property
    def branch(self) -> int:
        return self.p % 24

    @property
    def length(self) -> int:
        return 2 * (self.p + 1)


def _check_nv_prime(p: int) -> None:
    _require_prime(p)
    if p % 8 != 5:
        raise ConstructionError(f"p = {p} is not 5 mod 8")


def build_rx_ry(p: int) -> tuple[np.ndarray, np.ndarray]:
    """The p x p matrices R_X and R_Y with entries in {0, +1, -1}."""
    _check_nv_prime(p)
    roots = _sqrt_table(p)
    chi = {c: quadratic_character(p, c) for c in range(p)}
    # chi(c) must not depend on the root chosen: chi(-1) = 1 for p = 1 mod 4
    for sq, c in roots.items():
        if chi[c] != chi[(p - c) % p]:
            raise ConstructionError(f"square root character ill defined at {sq} mod {p}")
    rx = np.zeros((p, p), dtype=np.int64)
    ry = np.zeros((p, p), dtype=np.int64)
    for a in range(p):
        for b in range(p):
            if a == b:
                continue
            d = (b - a) % p
            if d in roots:
                rx[a, b] = chi[roots[d]]
            d2 = (2 * d) % p
            if d2 in roots:
                ry[a, b] = chi[roots[d2]]
    return rx, ry


@dataclass(frozen=True)
class NvBlocks:
    p: int
    rx: np.ndarray
    ry: np.ndarray
    x: np.ndarray
    y: np.ndarray
    b_w: np.ndarray
    b_ew: np.ndarray

    def identities(self) -> dict[str, bool]:
        x, y, p = self.x, self.y, self.p
        eye = np.eye(p + 1, dtype=np.int64)
        return {
            "X^T = -X": bool(np.array_equal(x.T, -x)),
            "Y^T = -Y": bool(np.array_equal(y.T, -y)),
            "XY = YX": bool(np.array_equal(x @ y, y @ x)),
            "X^2 + Y^2 = -pI": bool(np.array_equal(x @ x + y @ y, -p * eye)),
        }


def build_blocks(p: int) -> NvBlocks:
    rx, ry = build_rx_ry(p)
    x = np.zeros((p + 1, p + 1), dtype=np.int64)
    x[0, 1:] = 1
    x[1:, 0] = -1
    x[1:, 1:] = rx
    y = np.zeros((p + 1, p + 1), dtype=np.int64)
    y[1:, 1:] = ry
    b_w = np.block([[x, y], [-y.T, x.T]])
    b_ew = np.block([[-y.T, x.T], [-x, -y]])
    blocks = NvBlocks(p, rx, ry, x, y, b_w, b_ew)
    bad = [name for name, ok in blocks.identities().items() if not ok]
    if bad:
        raise ConstructionError(f"block identities fail for p = {p}: {', '.join(bad)}")
    return blocks


def nv_generator_matrix(params: NvParameters) -> np.ndarray:
    blocks = build_blocks(params.p)
    m = params.a * np.eye(params.length, dtype=np.int64) + blocks.b_w
    if params.branch == 13:
        m = m + blocks.b_ew
    return m


def build_nv_code(params: NvParameters | int, a: int | None = None) -> TernaryCode:
    if not isinstance(params, NvParameters):
        params = NvParameters(params, 1 if a is None else a)
    m = nv_generator_matrix(params)
    code = TernaryCode.from_generator(Gf3Matrix.from_array(m % 3))
    if not is_self_dual(code):
        raise ConstructionError(f"NV({params.p}, {params.a:+d}) is not self-dual")
    return code


# ------------------------------------------------------- polynomials over GF(3)
# coefficient lists, lowest degree first, no trailing zeros

def _trim(f: list[int]) -> list[int]:
    f = [c % 3 for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod(f: list[int], g: list[int]) -> list[int]:
    f = _trim(f)
    g = _trim(g)
    inv_lead = g[-1]  # 1 and 2 are self-inverse mod 3
    while len(f) >= len(g):
        c = (f[-1] * inv_lead) % 3
        shift = len(f) - len(g)
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % 3
        f = _trim(f)
    return f


def poly_gcd(f: list[int], g: list[int]) -> list[int]:
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, _poly_mod(f, g)
    if not f:
        return f
    lead = f[-1]
    return [(c * lead) % 3 for c in f]  # multiply by lead^-1 = lead


def _cyclic_generator_rows(g: list[int], p: int) -> np.ndarray:
    k = p - (len(g) - 1)
    rows = np.zeros((k, p), dtype=np.int64)
    for i in range(k):
        rows[i, i:i + len(g)] = g
    return rows


def build_extended_qr(p: int) -> TernaryCode:
    """Extended ternary quadratic residue code of length p + 1, p = -1 mod 12.

    The cyclic code is generated by gcd(x^p - 1, theta) for the first theta
    in (E, E+1, E+2, E') giving dimension (p+1)/2, where E sums x^r over the
    nonzero squares r and E' over the nonsquares.  The extension coordinate
    c_inf = -sum(c_i) is placed first, so coordinates are ordered
    (inf, 0, 1, ..., p-1) like the Paley and Pless matrices.
    """
    _require_prime(p)
    if p % 12 != 11:
        raise ConstructionError(f"p = {p} is not -1 mod 12")
    sq = _squares(p)
    e = [1 if r in sq else 0 for r in range(p)]
    e_non = [1 if (r and r not in sq) else 0 for r in range(p)]
    candidates = [e, [1] + e[1:], [2] + e[1:], e_non]
    xp1 = [2] + [0] * (p - 1) + [1]  # x^p - 1
    for theta in candidates:
        g = poly_gcd(xp1, theta)
        if len(g) - 1 == (p - 1) // 2:
            break
    else:
        raise ConstructionError(f"no quadratic residue idempotent candidate works for p = {p}")
    rows = _cyclic_generator_rows(g, p)
    ext = (-rows.sum(axis=1)) % 3
    gen = np.concatenate([ext[:, None], rows], axis=1)
    code = TernaryCode.from_generator(Gf3Matrix.from_array(gen))
    if code.dimension != (p + 1) // 2 or not is_self_dual(code):
        raise ConstructionError(f"extended QR code for p = {p} is not self-dual")
    return code


def pless_core(q: int) -> np.ndarray:
    """The (q+1) x (q+1) matrix S_q indexed by (inf, 0, ..., q-1)."""
    _require_prime(q)
    s = np.zeros((q + 1, q + 1), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            s[a + 1, b + 1] = quadratic_character(q, b - a)
    s[0, 1:] = 1
    s[1:, 0] = 1 if q % 4 == 1 else -1
    if not np.array_equal(s @ s.T, q * np.eye(q + 1, dtype=np.int64)):
        raise ConstructionError(f"S_{q} S_{q}^T != {q} I")
    return s


def build_pless_symmetry(q: int) -> TernaryCode:
    """Pless symmetry code P_{2q+2} with generator (I | S_q), q prime, q = -1 mod 6."""
    _require_prime(q)
    if q % 6 != 5:
        raise ConstructionError(f"q = {q} is not -1 mod 6")
    s = pless_core(q)
    gen = np.concatenate([np.eye(q + 1, dtype=np.int64), s], axis=1) % 3
    code = TernaryCode.from_generator(Gf3Matrix.from_array(gen))
    if not is_self_dual(code):
        raise ConstructionError(f"P_{2 * q + 2} is not self-dual")
    return code


# ------------------------------------------------------------ negacirculants

def negacirculant(first_row) -> Gf3Matrix:
    r = np.asarray(first_row, dtype=np.int64) % 3
    n = len(r)
    m = np.zeros((n, n), dtype=np.int64)
    row = r.copy()
    for i in range(n):
        m[i] = row
        row = np.concatenate([[(2 * row[-1]) % 3], row[:-1]])
    return Gf3Matrix.from_array(m) if n else Gf3Matrix(0)


@dataclass(frozen=True)
class NegacirculantPair:
    r_a: tuple[int, ...]
    r_b: tuple[int, ...]

    def __post_init__(self):
        if len(self.r_a) != len(self.r_b):
            raise ConstructionError("first rows differ in length")

    @property
    def a(self) -> Gf3Matrix:
        return negacirculant(self.r_a)

    @property
    def b(self) -> Gf3Matrix:
        return negacirculant(self.r_b)


def four_negacirculant_generator(r_a, r_b) -> np.ndarray:
    pair = NegacirculantPair(tuple(int(x) % 3 for x in r_a), tuple(int(x) % 3 for x in r_b))
    n = len(pair.r_a)
    a = pair.a.to_array().astype(np.int64)
    b = pair.b.to_array().astype(np.int64)
    right = np.block([[a, b], [2 * b.T, a.T]])
    return np.concatenate([np.eye(2 * n, dtype=np.int64), right], axis=1) % 3


def build_four_negacirculant(r_a, r_b) -> TernaryCode:
    return TernaryCode.from_generator(Gf3Matrix.from_array(four_negacirculant_generator(r_a, r_b)))


NEGACIRCULANT_PAIRS: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {
    1: ((1, 1, 0, 2, 1, 1, 1, 2, 2, 2, 0, 1, 0, 0, 2),
        (2, 0, 0, 2, 1, 0, 0, 1, 2, 2, 0, 1, 0, 2, 2)),
    2: ((1, 1, 2, 2, 1, 2, 2, 1, 1, 1, 2, 1, 2, 1, 2),
        (2, 2, 1, 2, 2, 0, 2, 2, 1, 2, 2, 2, 2, 1, 1)),
    3: ((1, 0, 0, 1, 1, 2, 2, 0, 2, 1, 1, 0, 0, 0, 2),
        (1, 2, 0, 0, 2, 2, 1, 1, 0, 0, 0, 0, 2, 2, 0)),
}


def build_length60_negacirculant(index: int) -> TernaryCode:
    """C_1, C_2, C_3: the three known extremal length-60 codes in
    four-negacirculant form (equivalent to QR_60, P_60 and NV_60)."""
    try:
        r_a, r_b = NEGACIRCULANT_PAIRS[index]
    except KeyError:
        raise ConstructionError(f"no negacirculant pair {index}; choose 1, 2 or 3") from None
    return build_four_negacirculant(r_a, r_b)


def quasi_negacyclic_shift(code_length: int) -> tuple[list[int], list[int]]:
    """Signed coordinate permutation shifting the four blocks of a
    four-negacirculant code simultaneously: returns (source, sign) with
    ``y[t] = sign[t] * x[source[t]]``."""
    if code_length % 4:
        raise ValueError("length must be divisible by 4")
    n = code_length // 4
    src, sign = [], []
    for blk in range(4):
        base = blk * n
        for t in range(n):
            if t == 0:
                src.append(base + n - 1)
                sign.append(-1)
            else:
                src.append(base + t - 1)
                sign.append(1)
    return src, sign


def apply_signed_permutation(v: Gf3Vector, src, sign) -> Gf3Vector:
    vals = v.values()
    return Gf3Vector.from_values((s * vals[j]) % 3 for j, s in zip(src, sign))


def code_fixed_by(code: TernaryCode, src, sign) -> bool:
    return all(code.contains(apply_signed_permutation(r, src, sign)) for r in code.generator.rows)
