import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aswcartier.asw import MinimalProfile, sample_minimal_cover
from aswcartier.basis import NonStandardForm, coordinates, enumerate_basis
from aswcartier.cartier import (CMMatrix, DiffNF, cartier_diff, cartier_diff_expand_first,
                                cartier_manin, find_center, normalize_diff, oracle_check,
                                rank_and_anumber, rank_mod, series_oracle)
from aswcartier.gf import make_field
from aswcartier.ratfunc import RatFunc

from conftest import cover, expr, ratfuncs

F3 = make_field(3)
ONE = RatFunc.const(F3, 1)

profiles = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
                     st.integers(0, 2)).filter(lambda t: t[0] + t[1] > 0)


def _series_equal(c, a, b, N=12):
    cc, emb, center, y1c, y2c = find_center(c)
    assert cc is c
    return (series_oracle(c, a, center, N, y1c, y2c) == series_oracle(c, b, center, N, y1c, y2c))


def test_normalize_single_relation(one_point_d1):
    got = normalize_diff({(0, 3): ONE}, one_point_d1)
    assert got == DiffNF({(0, 1): ONE, (0, 0): expr("x")})


def test_normalize_higher_powers_agree_in_series():
    c = cover("x", "x^-1", k=2)
    one = RatFunc.const(c.field, 1)
    for raw in ({(0, 5): one}, {(3, 0): one}, {(4, 7): expr("x + x^-1", k=2)}):
        nf = normalize_diff(raw, c)
        assert all(a2 < 3 and a1 < 3 for a2, a1 in nf)
        assert _series_equal(c, raw, nf)


def test_cartier_examples(one_point_d1):
    c = one_point_d1
    assert cartier_diff({(0, 2): ONE}, c) == DiffNF({(0, 0): ONE})
    assert cartier_diff({(0, 1): ONE}, c) == DiffNF()
    assert cartier_diff({(0, 0): ONE}, c) == DiffNF()


def test_table_one_matrix(one_point_d1):
    M = cartier_manin(one_point_d1)
    labels = [b.label(F3) for b in M.basis]
    rows = dict(zip(labels, M.rows))
    for zero in ("dx", "x*dx", "y1*dx"):
        assert not any(rows[zero])
    assert rows["y1^2*dx"] == [1, 0, 0, 0, 0, 0]
    assert rows["y2*dx"] == [0, 0, 2, 0, 0, 0]
    assert rows["y2*y1*dx"] == [0, 0, 0, 1, 0, 0]
    assert rank_and_anumber(M) == (3, 3)


def test_d2_matrix(one_point_d2):
    M = cartier_manin(one_point_d2)
    assert M.g == 16
    assert rank_and_anumber(M) == (9, 7)


def test_identity_rank():
    F = make_field(5)
    M = CMMatrix(F, list(range(4)), [[int(i == j) for j in range(4)] for i in range(4)])
    assert rank_and_anumber(M) == (4, 0)


def test_rank_mod_extension_field():
    F = make_field(3, 2)
    t = F.from_coeffs([0, 1])
    rows = [[1, t], [t, F.mul(t, t)], [0, 1]]
    assert rank_mod(F, rows) == 2
    assert rank_mod(F, rows[:2]) == 1


def test_matrix_serialisation(one_point_d1):
    M = cartier_manin(one_point_d1)
    obj = json.loads(json.dumps(M.to_json()))
    assert len(obj["basis"]) == 6 and obj["rows"][3][0] == [1]
    assert M.to_csv().splitlines()[3] == "1,0,0,0,0,0"
    assert M.array().shape == (6, 6)


def test_non_standard_cover_refused(example_cover):
    with pytest.raises(NonStandardForm):
        cartier_manin(example_cover)


def test_oracle_examples(one_point_d1):
    c = one_point_d1
    cc, _, center, y1c, y2c = find_center(c)
    s = series_oracle(cc, {(0, 0): ONE}, center, 5, y1c, y2c)
    assert s == [1, 0, 0, 0, 0]
    N = 2 * 6 + 4
    assert oracle_check(c, {(0, 1): ONE}, DiffNF(), N)
    assert oracle_check(c, {(0, 2): ONE}, {(0, 0): ONE}, N)
    assert not oracle_check(c, {(0, 2): ONE}, DiffNF(), N)


@given(profiles, st.integers(0, 2**32), st.data())
def test_semilinearity_and_additivity(counts, seed, data):
    c = sample_minimal_cover(3, None, MinimalProfile.from_counts(*counts), seed)
    F = c.field
    basis = enumerate_basis(c)
    w1 = DiffNF.from_basis(data.draw(st.sampled_from(basis)), F)
    w2 = DiffNF.from_basis(data.draw(st.sampled_from(basis)), F, 2)
    s = data.draw(ratfuncs(F, max_terms=3, max_order=2))
    assert cartier_diff(w1.mul_function(s.frobenius()), c) == cartier_diff(w1, c).mul_function(s)
    assert cartier_diff(w1 + w2, c) == cartier_diff(w1, c) + cartier_diff(w2, c)


@given(profiles, st.integers(0, 2**32))
def test_routes_agree_and_images_are_regular(counts, seed):
    c = sample_minimal_cover(3, None, MinimalProfile.from_counts(*counts), seed)
    basis = enumerate_basis(c)
    fast = cartier_manin(c, basis)
    slow = cartier_manin(c, basis, method="generic")
    assert fast.rows == slow.rows
    rng = np.random.default_rng(seed)
    for i in rng.choice(len(basis), size=min(3, len(basis)), replace=False):
        w = DiffNF.from_basis(basis[int(i)], c.field)
        img = cartier_diff(w, c)
        assert cartier_diff_expand_first(w, c) == img
        _, rest = coordinates(img, basis)
        assert not rest


@pytest.mark.parametrize("seed", range(4))
def test_oracle_on_sampled_covers(seed):
    c = sample_minimal_cover(3, None, MinimalProfile.from_counts(1, 1 - seed % 2, seed % 2, 1), seed)
    basis = enumerate_basis(c)
    M = cartier_manin(c, basis)
    N = 2 * M.g + 4
    rng = np.random.default_rng(seed)
    for i in rng.choice(len(basis), size=3, replace=False):
        w = DiffNF.from_basis(basis[int(i)], c.field)
        assert oracle_check(c, w, cartier_diff(w, c), N)


def test_p5_matrix_closes():
    F = make_field(5)
    c = sample_minimal_cover(5, F, MinimalProfile(5, (2,), (1,)), 3)
    M = cartier_manin(c)
    assert M.g == len(M.basis)
    assert cartier_manin(c, method="generic").rows == M.rows
