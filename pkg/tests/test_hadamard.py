import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ternary_hadamard.constructions import (ConstructionError, build_extended_qr, build_nv_code,
                                            build_pless_symmetry)
from ternary_hadamard.gf3 import Gf3Matrix, rref
from ternary_hadamard.hadamard import (HadamardMatrix, NotHadamardError, SdsPair, SignMatrix,
                                       build_h_nv, build_h_sds, build_paley, cyclotomic_classes,
                                       figure2_binary, figure2_hadamard, figure2_text,
                                       from_binary, hadamard_rank3, is_hadamard, is_sds, is_skew,
                                       octal_decode, octal_encode, rows_in_code, sds_for_theorem,
                                       sylvester, to_binary, type1_matrix)


def gram_ok(h):
    a = h.array
    return np.array_equal(a @ a.T, len(a) * np.eye(len(a), dtype=np.int64))


def test_is_hadamard_examples():
    assert is_hadamard(SignMatrix.from_array([[1, 1], [1, -1]]))
    assert not is_hadamard(SignMatrix.from_array(np.ones((4, 4), dtype=int)))
    assert is_hadamard(build_h_nv(29, 1))
    with pytest.raises(NotHadamardError):
        HadamardMatrix.from_array(np.ones((4, 4), dtype=int))
    with pytest.raises(ValueError):
        SignMatrix.from_array([[1, 0], [1, 1]])


def test_is_skew_examples():
    assert is_skew(build_h_nv(5, 1))
    assert is_skew(-build_h_nv(5, -1).array)
    assert not is_skew([[1, 1], [1, -1]])


@pytest.mark.parametrize("p", [5, 29])
@pytest.mark.parametrize("a", [1, -1])
def test_h_nv_properties(p, a):
    h = build_h_nv(p, a)
    code = build_nv_code(p, a)
    assert h.order == 2 * (p + 1) and gram_ok(h)
    assert is_skew(a * h.array)
    assert hadamard_rank3(h) == p + 1
    assert rows_in_code(h, code)
    # same row space: identical RREF
    r, rank, _ = rref(Gf3Matrix.from_array(h.array % 3))
    assert np.array_equal(r.to_array()[:rank], code.generator.to_array())


@pytest.mark.parametrize("p", [5, 29])
@pytest.mark.parametrize("a", [1, -1])
def test_h_nv_blocks_follow_cyclotomic_rule(p, a):
    h = build_h_nv(p, a).array
    cc = cyclotomic_classes(p)
    e = cc.epsilon
    n = p + 1
    ap = h[1:n, 1:n]
    bp = h[1:n, n + 1:]
    for s in range(p):
        for t in range(p):
            d = (t - s) % p
            if d == 0:
                assert ap[s, t] == a and bp[s, t] == a
                continue
            assert ap[s, t] == (1 if d in cc.union(0, e) else -1)
            assert bp[s, t] == (1 if d in cc.union(2, e) else -1)
            assert d in cc.union(0, e) or d in cc.union(2, e + 2)


def test_h_nv_errors():
    with pytest.raises(ConstructionError):
        build_h_nv(13, 1)


def test_cyclotomic_classes():
    cc = cyclotomic_classes(5)
    assert cc.omega == 2 and cc.epsilon == 3
    assert [set(cc[i]) for i in range(4)] == [{1}, {2}, {4}, {3}]
    for p in (29, 53, 61):
        cc = cyclotomic_classes(p)
        assert (p - 1) in cc[2]
        assert all(len(cc[i]) == (p - 1) // 4 for i in range(4))
        assert set().union(*(cc[i] for i in range(4))) == set(range(1, p))
        assert (p - 2) in cc[cc.epsilon] and cc.epsilon in (1, 3)
        assert cc[5] == cc[1]


def test_is_sds_examples():
    assert is_sds(SdsPair.from_sets({1, 2}, {2, 4}, 5))
    assert not is_sds(SdsPair.from_sets({0}, {0}, 3))
    assert not is_sds(SdsPair.from_sets({1, 2}, {1, 2}, 5))


@pytest.mark.parametrize("p", [5, 29, 53])
def test_sds_theorem(p):
    cc = cyclotomic_classes(p)
    for i in range(4):
        pair = SdsPair.from_sets(cc.union(i, i + 1), cc.union(i + 1, i + 2), p)
        assert (pair.k, pair.lam) == ((p - 1) // 2, (p - 3) // 2)
        assert is_sds(pair)
        h = build_h_sds(pair)
        assert h.order == 2 * (p + 1) and gram_ok(h)


def test_type1_matrix():
    assert np.array_equal(type1_matrix(set(), 3), -np.ones((3, 3), dtype=int))
    assert np.array_equal(type1_matrix(range(4), 4), np.ones((4, 4), dtype=int))
    m = type1_matrix({1, 2}, 5)
    assert m[0].tolist() == [-1, 1, 1, -1, -1]
    assert all(np.array_equal(np.roll(m[0], i), m[i]) for i in range(5))


def test_build_h_sds_examples():
    h = build_h_sds({1, 2}, {2, 4}, v=5)
    assert h.order == 12 and gram_ok(h)
    with pytest.raises(ConstructionError):
        build_h_sds({1, 2}, {1, 2}, v=5)
    for p in (5, 29):
        for a in (1, -1):
            d1, d2 = sds_for_theorem(p, a)
            assert build_h_sds(d1, d2, v=p).order == 2 * (p + 1)


def test_paley():
    h = build_paley(11, "I")
    assert h.order == 12 and is_skew(h)
    assert rows_in_code(h, build_extended_qr(11))
    h = build_paley(17, "II")
    assert h.order == 36 and gram_ok(h)
    assert rows_in_code(h, build_pless_symmetry(17))
    for q in (23, 47, 59):
        assert rows_in_code(build_paley(q, "I"), build_extended_qr(q))
    with pytest.raises(ConstructionError):
        build_paley(13, "I")
    with pytest.raises(ConstructionError):
        build_paley(11, "II")


def test_sylvester():
    for k in range(6):
        assert gram_ok(sylvester(k))


def test_binary_maps():
    assert to_binary(SignMatrix.from_array(np.ones((3, 3), dtype=int))).tolist() == [[1] * 3] * 3
    assert to_binary([[1, -1], [-1, 1]]).tolist() == [[1, 0], [0, 1]]
    h = sylvester(3)
    assert from_binary(to_binary(h)) == h.matrix


def test_octal_examples():
    bits = octal_decode("730", 3)
    assert bits.tolist() == [[1, 1, 1], [0, 1, 1], [0, 0, 0]]
    bits = octal_decode("73" + "0" * 10, 6)
    assert bits[0].tolist() == [1, 1, 1, 0, 1, 1]
    with pytest.raises(ValueError):
        octal_decode("78", None)
    with pytest.raises(ValueError):
        octal_decode("7777", 6)


def test_figure2():
    text = figure2_text()
    digits = "".join(text.split())
    assert len(digits) == 1200
    assert digits[:20] == "77777777773777777777"
    b = figure2_binary()
    assert np.flatnonzero(b[0] == 0).tolist() == [30]          # position 31, 1-based
    h = figure2_hadamard()
    assert gram_ok(h)
    assert rows_in_code(h, build_nv_code(29, 1))
    assert hadamard_rank3(h) == 30
    assert octal_encode(b, 60).split() == text.split()


def test_rows_in_code_rejects_bad_row():
    h = build_h_nv(5, 1).array.copy()
    code = build_nv_code(5, 1)
    h[3, 4] = -h[3, 4]
    assert not rows_in_code(SignMatrix.from_array(h), code)
    with pytest.raises(ValueError):
        rows_in_code(build_h_nv(5, 1), build_nv_code(13, 1))


@settings(max_examples=17, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_octal_roundtrip_random_rows(seed):
    # 17 examples x 60 rows > 10^3 random rows
    rng = np.random.default_rng(seed)
    b = rng.integers(0, 2, (60, 60)).astype(np.uint8)
    text = octal_encode(b)
    assert len(text.split()) == 60 and all(len(r) == 20 for r in text.split())
    assert np.array_equal(octal_decode(text, 60), b)
    assert octal_encode(octal_decode(text, 60)) == text
