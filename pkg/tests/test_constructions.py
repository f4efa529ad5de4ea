import numpy as np
import pytest

from ternary_hadamard.constructions import (ConstructionError, NvParameters, build_blocks,
                                            build_extended_qr, build_four_negacirculant,
                                            build_length60_negacirculant, build_nv_code,
                                            build_pless_symmetry, build_rx_ry, code_fixed_by,
                                            negacirculant, pless_core, poly_gcd,
                                            quadratic_character, quasi_negacyclic_shift)
from ternary_hadamard.equivalence import codes_equivalent
from ternary_hadamard.gf3 import is_self_dual, rank3, weight_distribution_small

NV_PRIMES = [5, 13, 29, 37, 53, 61]


def test_quadratic_character():
    assert quadratic_character(5, 0) == 0
    assert quadratic_character(5, 4) == 1 and quadratic_character(5, 3) == -1
    assert quadratic_character(29, 28) == 1
    for p in (7, 13, 29):
        squares = {x * x % p for x in range(1, p)}
        assert all(quadratic_character(p, x) == (1 if x in squares else -1) for x in range(1, p))
    with pytest.raises(ValueError):
        quadratic_character(9, 1)


def test_rx_ry_p5_rows():
    rx, ry = build_rx_ry(5)
    assert rx[0].tolist() == [0, 1, 0, 0, -1]
    assert ry[0].tolist() == [0, 0, -1, 1, 0]
    for p in NV_PRIMES:
        rx, ry = build_rx_ry(p)
        assert not np.diag(rx).any() and not np.diag(ry).any()
    with pytest.raises(ConstructionError):
        build_rx_ry(7)


@pytest.mark.parametrize("p", NV_PRIMES)
def test_block_identities(p):
    b = build_blocks(p)
    x, y = b.x, b.y
    eye = np.eye(p + 1, dtype=np.int64)
    assert np.array_equal(x.T, -x) and np.array_equal(y.T, -y)
    assert np.array_equal(x @ y, y @ x)
    assert np.array_equal(x @ x + y @ y, -p * eye)
    assert x[0, 1:].tolist() == [1] * p and x[1:, 0].tolist() == [-1] * p
    assert not y[0].any() and not y[:, 0].any()


def test_block_shapes():
    b = build_blocks(29)
    assert b.b_w.shape == (60, 60) and np.array_equal(b.b_w.T, -b.b_w)
    b = build_blocks(13)
    n = 14
    assert np.array_equal(b.b_ew[:n, :n], -b.y.T) and np.array_equal(b.b_ew[:n, n:], b.x.T)
    assert np.array_equal(b.b_ew[n:, :n], -b.x) and np.array_equal(b.b_ew[n:, n:], -b.y)


@pytest.mark.parametrize("p", NV_PRIMES)
@pytest.mark.parametrize("a", [1, -1])
def test_nv_codes_self_dual(p, a):
    c = build_nv_code(p, a)
    assert c.n == 2 * (p + 1) and c.k == p + 1 and is_self_dual(c)


def test_nv_params():
    assert NvParameters(29, -1).branch == 5 and NvParameters(13).branch == 13
    with pytest.raises(ConstructionError):
        NvParameters(11)
    with pytest.raises(ConstructionError):
        NvParameters(5, 0)


def test_nv5_is_golay():
    c = build_nv_code(5, 1)
    wd = weight_distribution_small(c)
    assert min(w for w in wd if w) == 6
    # unique [12,6,6] ternary code: NV(5,+1) and QR_12 must be monomially equivalent
    assert codes_equivalent(c, build_extended_qr(11)).status == "equivalent"
    assert codes_equivalent(c, build_nv_code(5, -1)).status == "equivalent"


def test_poly_gcd():
    # coefficients low degree first, result monic
    assert poly_gcd([2, 0, 1], [2, 1]) == [2, 1]       # gcd(x^2 - 1, x - 1) = x - 1
    assert poly_gcd([2, 0, 1], [2, 2]) == [1, 1]       # gcd(x^2 - 1, 2x + 2) = x + 1
    assert poly_gcd([1, 0, 1], [1, 1]) == [1]          # x^2 + 1 is irreducible over GF(3)


@pytest.mark.parametrize("p", [11, 23, 47, 59])
def test_extended_qr(p):
    c = build_extended_qr(p)
    assert c.n == p + 1 and c.k == (p + 1) // 2 and is_self_dual(c)


def test_extended_qr_examples():
    wd = weight_distribution_small(build_extended_qr(11))
    assert wd[12] == 24 and min(w for w in wd if w) == 6
    wd = weight_distribution_small(build_extended_qr(23))
    assert min(w for w in wd if w) == 9
    with pytest.raises(ConstructionError):
        build_extended_qr(13)


@pytest.mark.parametrize("q", [5, 11, 17, 29])
def test_pless(q):
    s = pless_core(q)
    assert np.array_equal(s @ s.T, q * np.eye(q + 1, dtype=np.int64))
    assert not np.diag(s).any()
    c = build_pless_symmetry(q)
    assert c.n == 2 * q + 2 and c.k == q + 1 and is_self_dual(c)


def test_pless_errors():
    with pytest.raises(ConstructionError):
        build_pless_symmetry(13)


def test_negacirculant_examples():
    m = negacirculant([1, 2, 0]).to_array()
    r0, r1, r2 = 1, 2, 0
    assert m.tolist() == [[r0, r1, r2], [2 * r2 % 3, r0, r1], [2 * r1 % 3, 2 * r2 % 3, r0]]
    assert not negacirculant([0, 0, 0, 0]).to_array().any()
    assert np.array_equal(negacirculant([1, 0, 0, 0, 0]).to_array(), np.eye(5))
    assert not is_self_dual(build_four_negacirculant([0] * 5, [0] * 5))


@pytest.mark.parametrize("i", [1, 2, 3])
def test_length60_negacirculant(i):
    c = build_length60_negacirculant(i)
    assert c.n == 60 and c.k == 30 and is_self_dual(c)
    src, sign = quasi_negacyclic_shift(60)
    assert code_fixed_by(c, src, sign)


def test_negacirculant_generator_rank():
    c = build_four_negacirculant([1, 1, 0], [0, 1, 2])
    assert c.k == 6 and rank3(c.generator.to_array()) == 6
    with pytest.raises(ConstructionError):
        build_length60_negacirculant(4)
