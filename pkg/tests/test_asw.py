from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aswcartier.asw import (BranchingDatum, CoverSpec, FieldTooSmall, MinimalProfile,
                            NotACover, ProfileInfeasible, WittVec2, asw_reduce, bc_bounds,
                            bc_bounds_intermediate, carry_coefficients,
                            conductors_from_pole_degrees, fp_anumber_minimal, g1_poly,
                            genus, intermediate_jump, is_minimal, sample_minimal_as_cover,
                            sample_minimal_cover, validate_datum, witt_add2, witt_wp2)
from aswcartier.gf import make_field
from aswcartier.parse import parse_ratfunc_expr
from aswcartier.ratfunc import INF, RatFunc

from conftest import cover, expr, ratfuncs

F3 = make_field(3)


def W(f, h="", F=F3):
    return WittVec2(parse_ratfunc_expr(f, F), parse_ratfunc_expr(h, F) if h else RatFunc(F))


# --- ghost-component oracle ----------------------------------------------------
# Laurent polynomials over Z as {exponent: int}; the ghost map (a0, a1) ->
# (a0, a0^p + p a1) is additive, which pins down the second Witt coordinate.

def _lmul(a, b):
    out = Counter()
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] += x * y
    return dict(out)


def _lpow(a, n):
    out = {0: 1}
    for _ in range(n):
        out = _lmul(out, a)
    return out


def _ladd(*polys, signs=None):
    out = Counter()
    for s, poly in zip(signs or [1] * len(polys), polys):
        for i, x in poly.items():
            out[i] += s * x
    return dict(out)


def ghost_sum(a0, a1, b0, b1, p):
    s0 = _ladd(a0, b0)
    num = _ladd(_lpow(a0, p), _lpow(b0, p), _lpow(s0, p), signs=[1, 1, -1])
    assert all(v % p == 0 for v in num.values())
    s1 = _ladd(a1, b1, {i: v // p for i, v in num.items()})
    return s0, s1


def to_ratfunc(F, poly):
    terms = []
    for e, v in poly.items():
        terms.append((INF, e, F.scalar(v)) if e >= 0 else (0, -e, F.scalar(v)))
    return RatFunc.from_terms(F, terms)


laurent = st.dictionaries(st.integers(-4, 4), st.integers(0, 6), max_size=4)


@given(st.sampled_from([3, 5, 7]), laurent, laurent, laurent, laurent)
def test_witt_addition_matches_ghost_oracle(p, a0, a1, b0, b1):
    F = make_field(p)
    a0, a1, b0, b1 = ({e: v % p for e, v in d.items()} for d in (a0, a1, b0, b1))
    s0, s1 = ghost_sum(a0, a1, b0, b1, p)
    got = witt_add2(WittVec2(to_ratfunc(F, a0), to_ratfunc(F, a1)),
                    WittVec2(to_ratfunc(F, b0), to_ratfunc(F, b1)))
    assert got.f1 == to_ratfunc(F, s0)
    assert got.f2 == to_ratfunc(F, s1)


def test_carry_coefficients():
    assert carry_coefficients(3) == [1, 1]
    assert carry_coefficients(5) == [1, 2, 2, 1]


def test_witt_addition_examples():
    assert witt_add2(W("x"), W("0", "x^-1")) == W("x", "x^-1")
    assert witt_add2(W("x"), W("x")) == W("2*x", "x^3")
    a = W("x + x^-2", "x^5")
    assert (a + (-a)) == WittVec2.zero(F3)


def test_wp_examples():
    assert witt_wp2(WittVec2.zero(F3)) == WittVec2.zero(F3)
    assert witt_wp2(W("x")) == W("x^3 - x", "x^7 - x^5")


def _witt(F, draw):
    return WittVec2(draw(ratfuncs(F, max_terms=3, max_order=3)),
                    draw(ratfuncs(F, max_terms=3, max_order=3)))


@given(st.sampled_from([(3, 1), (3, 2), (5, 1)]), st.data())
def test_witt_group_laws(pk, data):
    F = make_field(*pk)
    a, b, c = (_witt(F, data.draw) for _ in range(3))
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert witt_wp2(a + b) == witt_wp2(a) + witt_wp2(b)


def test_g1_poly():
    assert g1_poly(3) == {7: 2, 5: 1}
    assert g1_poly(5) == {21: 4, 17: 2, 13: 3, 9: 1}
    for p in (3, 5, 7):
        assert all(e % p == i % p and e % p for i, e in
                   enumerate(sorted(g1_poly(p), reverse=True), start=1))


def test_reduce_examples():
    red, wit = asw_reduce(W("x"))
    assert red == W("x") and wit == WittVec2.zero(F3)
    red, wit = asw_reduce(W("x^3"))
    assert red.f1 == expr("x") and red.is_reduced()
    assert red + witt_wp2(wit) == W("x^3")
    ex = W("1/x + x", "x^-5 - (x-1)^-1")
    assert asw_reduce(ex)[0] == ex


def test_reduce_errors():
    with pytest.raises(NotACover):
        asw_reduce(W("x^3 - x"))
    with pytest.raises(FieldTooSmall):
        asw_reduce(W("x + 1"))
    # trace-zero constants are absorbed
    F = make_field(3, 2)
    c = next(a for a in F.elements() if a and F.trace(a) == 0)
    w = WittVec2(RatFunc.x(F) + RatFunc.const(F, c), RatFunc(F))
    assert asw_reduce(w)[0].f1 == RatFunc.x(F)


@given(st.sampled_from([(3, 1), (3, 2), (5, 1)]), st.data())
def test_reduce_witness_and_class_invariance(pk, data):
    F = make_field(*pk)
    w = _witt(F, data.draw)
    if w.f1.is_zero():
        return
    try:
        red, wit = asw_reduce(w)
    except (NotACover, FieldTooSmall):
        return
    assert red.is_reduced()
    assert red + witt_wp2(wit) == w
    shift = WittVec2(data.draw(ratfuncs(F, max_terms=2, max_order=2, const=False)),
                     data.draw(ratfuncs(F, max_terms=2, max_order=2, const=False)))
    red2, _ = asw_reduce(w + witt_wp2(shift))
    c1, c2 = CoverSpec(red.f1, red.f2), CoverSpec(red2.f1, red2.f2)
    assert c1.branching_datum() == c2.branching_datum()


def test_conductors():
    assert conductors_from_pole_degrees([1, 0], 3) == [2, 4]
    assert conductors_from_pole_degrees([0, 1], 3) == [0, 2]
    assert conductors_from_pole_degrees([1, 5], 3) == [2, 6]


def test_example_datum(example_cover):
    assert example_cover.branching_datum().as_dict() == {0: [2, 6], 1: [0, 2], INF: [2, 4]}


def test_datum_of_simple_covers():
    assert cover("x").branching_datum().as_dict() == {INF: [2, 4]}
    assert cover("x", "(x-1)^-1").branching_datum().as_dict() == {INF: [2, 4], 1: [0, 2]}


def test_validate_datum():
    assert validate_datum([[2, 6], [0, 2], [2, 4]], 3)[0]
    assert not validate_datum([[4]], 3)[0]
    assert not validate_datum([[2, 3]], 3)[0]


def test_is_minimal(example_cover):
    assert is_minimal([[2, 4]], 3)
    assert not is_minimal(example_cover.branching_datum(), 3)
    assert is_minimal([[0, 3]], 3)


def test_genus_values(example_cover):
    assert genus([[2, 4]], 3) == 6
    assert genus([[3, 7]], 3) == 16
    assert genus(example_cover.branching_datum(), 3) == 32
    assert genus([[2, 4]], 3, level=1) == 0
    assert genus([[3, 7]], 3, level=1) == 1


def test_intermediate_jump():
    assert intermediate_jump((1, 3), 3) == 7
    assert intermediate_jump((2, 6), 3) == 14
    assert intermediate_jump((4,), 3) == 4
    for p in (3, 5, 7):
        for m in range(1, 7):
            assert intermediate_jump((m, p * m), p) == m * (p * p - p + 1)


def test_fp_anumber():
    assert fp_anumber_minimal([[2]], 3) == 0
    assert fp_anumber_minimal([[3]], 3) == 1
    assert fp_anumber_minimal([[5]], 5) == 4


def test_bc_bounds():
    assert bc_bounds(7, 3) == (3, 5)
    assert bc_bounds(21, 5)[0] == 20
    assert bc_bounds(14, 3, 1) == (6, 11)
    assert bc_bounds_intermediate([[2, 4]], 3, 0)[0] == 3


def test_sampler_examples():
    c = sample_minimal_cover(3, None, MinimalProfile.from_counts(1, 0, 0, 0), seed=1)
    assert c.branching_datum().as_dict() == {INF: [2, 4]}
    with pytest.raises(ProfileInfeasible):
        MinimalProfile.from_counts(0, 0, 1, 0)
    c = sample_minimal_cover(3, make_field(3, 2), MinimalProfile.from_counts(1, 1, 1, 1), seed=5)
    rows = sorted(e for _, e in c.branching_datum().rows)
    assert rows == [(0, 2), (0, 3), (2, 4), (3, 7)]


def test_sampler_field_too_small():
    with pytest.raises(FieldTooSmall):
        sample_minimal_cover(3, F3, MinimalProfile.from_counts(3, 0, 2, 0), seed=0)


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
       st.integers(0, 2**32))
def test_sampler_properties(n1, n2, n3, n4, seed):
    if n1 + n2 == 0:
        return
    prof = MinimalProfile.from_counts(n1, n2, n3, n4)
    c = sample_minimal_cover(3, None, prof, seed)
    datum = c.branching_datum()
    assert c.f.is_reduced() and c.h.is_reduced()
    assert is_minimal(datum, 3) and validate_datum(datum, 3)[0]
    assert sorted(e for _, e in datum.rows) == sorted(prof.datum_rows())
    assert genus(datum, 3) >= 0
    assert sample_minimal_cover(3, None, prof, seed).to_json() == c.to_json()


@given(st.sampled_from([3, 5, 7]), st.integers(0, 2**32))
def test_as_sampler(p, seed):
    divs = [d for d in range(1, p) if (p - 1) % d == 0]
    orders = [divs[seed % len(divs)], divs[(seed // 7) % len(divs)]]
    c = sample_minimal_as_cover(p, None, orders, seed)
    assert c.n == 1
    assert sorted(e[0] - 1 for _, e in c.branching_datum().rows) == sorted(orders)


def test_cover_json_round_trip(example_cover):
    again = CoverSpec.from_json(example_cover.to_json())
    assert again.f == example_cover.f and again.h == example_cover.h
    datum = example_cover.branching_datum()
    assert BranchingDatum.from_json(3, datum.to_json(), F3) == datum


def test_cover_rejects_unreduced():
    with pytest.raises(ValueError):
        CoverSpec(expr("x^3 + x"))
