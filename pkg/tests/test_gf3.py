import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ternary_hadamard.constructions import build_nv_code, build_pless_symmetry
from ternary_hadamard.gf3 import (Gf3Matrix, Gf3Vector, TernaryCode, all_codewords,
                                  dual_code, format_code, is_self_dual, minimum_weight_small,
                                  parse_code, parse_matrix_text, rank3, rref, standard_form,
                                  weight_distribution_small)

vec_values = st.integers(1, 70).flatmap(lambda n: st.lists(st.integers(0, 2), min_size=n, max_size=n))


def small_matrix(max_rows=6, max_cols=8):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda s: st.lists(st.lists(st.integers(0, 2), min_size=s[1], max_size=s[1]),
                           min_size=s[0], max_size=s[0]))


def brute_rank(a):
    """log_3 of the number of distinct GF(3) combinations of the rows."""
    a = np.asarray(a, dtype=np.int64) % 3
    words = {tuple((np.array(m) @ a) % 3) for m in itertools.product(range(3), repeat=len(a))}
    return round(np.log(len(words)) / np.log(3))


def test_plane_ops_match_mod3_oracle_10k():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        n = int(rng.integers(1, 130))
        x = rng.integers(0, 3, n)
        y = rng.integers(0, 3, n)
        c = int(rng.integers(0, 3))
        u, v = Gf3Vector.from_values(x), Gf3Vector.from_values(y)
        assert (u + v).values() == list((x + y) % 3)
        assert (u - v).values() == list((x - y) % 3)
        assert (-u).values() == list((-x) % 3)
        assert u.scale(c).values() == list((c * x) % 3)
        assert u.dot(v) == int(x @ y) % 3
        assert u.weight == int(np.count_nonzero(x))
        assert u.lo & u.hi == 0


@given(vec_values)
def test_vector_roundtrip_and_invariants(vals):
    v = Gf3Vector.from_values(vals)
    assert v.values() == vals
    assert v.lo & v.hi == 0
    assert v.weight == sum(1 for x in vals if x)
    assert (v + (-v)).is_zero()


def test_rref_examples():
    r, rank, piv = rref(Gf3Matrix.identity(3))
    assert rank == 3 and np.array_equal(r.to_array(), np.eye(3))
    r, rank, piv = rref(Gf3Matrix.from_rows([[1, 2], [2, 1]]))
    assert rank == 1 and r.to_array().tolist() == [[1, 2], [0, 0]]
    r, rank, _ = rref(Gf3Matrix.from_array(np.zeros((2, 3), dtype=int)))
    assert rank == 0 and not r.to_array().any()


@settings(max_examples=200, deadline=None)
@given(small_matrix())
def test_rref_idempotent_and_rank_matches_oracle(rows):
    m = Gf3Matrix.from_rows(rows)
    r, rank, piv = rref(m)
    r2, rank2, piv2 = rref(r)
    assert np.array_equal(r.to_array(), r2.to_array()) and rank == rank2
    assert rank == brute_rank(rows)
    assert rank == rank3(np.array(rows).T)
    for i, c in enumerate(piv):
        col = r.to_array()[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1


def test_rank3_examples():
    assert rank3(np.eye(4, dtype=int)) == 4
    assert rank3(np.ones((5, 5), dtype=int)) == 1
    assert rank3(np.array([[3, 6], [9, -3]])) == 0


def test_dual_examples():
    assert dual_code(TernaryCode.full(4)).k == 0
    d = dual_code(TernaryCode.from_generator([[1, 1, 1]]))
    assert d.k == 2 and d.contains([1, 2, 0])
    nv = build_nv_code(5, 1)
    assert np.array_equal(dual_code(nv).generator.to_array(), nv.generator.to_array())


@settings(max_examples=100, deadline=None)
@given(small_matrix(5, 7))
def test_double_dual(rows):
    c = TernaryCode.from_generator(rows)
    dd = dual_code(dual_code(c))
    assert dd.n == c.n and dd.k == c.k
    assert np.array_equal(dd.generator.to_array(), c.generator.to_array())
    assert dual_code(c).k == c.n - c.k


def test_self_dual_examples():
    assert is_self_dual(build_nv_code(5, 1))
    assert is_self_dual(build_nv_code(13, 1))
    assert not is_self_dual(TernaryCode.from_generator([[1, 0, 0, 0], [0, 1, 0, 0]]))


def test_self_dual_generator_rows_orthogonal():
    for c in (build_nv_code(5, 1), build_nv_code(13, -1), build_pless_symmetry(11)):
        g = c.generator.to_array().astype(int)
        assert not ((g @ g.T) % 3).any()


def test_standard_form():
    c = TernaryCode.from_generator([[1, 0, 2, 1], [0, 1, 1, 1]])
    g, perm = standard_form(c)
    assert list(perm) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        standard_form(Gf3Matrix.from_rows([[0, 1, 1], [0, 0, 0]]))
    nv = build_nv_code(5, 1)
    g, perm = standard_form(nv)
    a = g.to_array()
    assert np.array_equal(a[:, :6], np.eye(6))
    back = np.empty_like(a)
    back[:, list(perm)] = a
    assert all(nv.contains(r) for r in back) and rank3(back) == 6


def test_weight_distribution_examples():
    wd = weight_distribution_small(build_nv_code(5, 1))
    # extended ternary Golay code
    assert wd == {0: 1, 6: 264, 9: 440, 12: 24}
    assert weight_distribution_small(TernaryCode.zero(5)) == {0: 1}
    wd24 = weight_distribution_small(build_pless_symmetry(11))
    assert wd24[24] == 48 and sum(wd24.values()) == 3 ** 12
    assert min(w for w in wd24 if w) == 9
    with pytest.raises(ValueError):
        weight_distribution_small(TernaryCode.full(21))


@settings(max_examples=60, deadline=None)
@given(small_matrix(5, 9))
def test_weight_distribution_matches_enumeration(rows):
    c = TernaryCode.from_generator(rows)
    words = all_codewords(c)
    counts = np.bincount(np.count_nonzero(words, axis=1), minlength=c.n + 1)
    wd = weight_distribution_small(c)
    assert wd == {w: int(x) for w, x in enumerate(counts) if x}
    assert len({tuple(w) for w in words}) == 3 ** c.k


def test_text_format_roundtrip():
    c = build_nv_code(5, -1)
    name, c2 = parse_code(format_code(c, "NV(5,-1)"))
    assert name == "NV(5,-1)"
    assert np.array_equal(c.generator.to_array(), c2.generator.to_array())
    hdr, a = parse_matrix_text("# name: x\n+-0\n- + +\n")
    assert hdr == {"name": "x"} and a.tolist() == [[1, -1, 0], [-1, 1, 1]]
    with pytest.raises(ValueError):
        parse_matrix_text("12a\n")
    assert minimum_weight_small(c) == 6
