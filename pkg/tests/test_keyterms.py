from functools import lru_cache

import pytest

from aswcartier.asw import MinimalProfile, sample_minimal_cover
from aswcartier.basis import BasisElement, enumerate_basis
from aswcartier.cartier import DiffNF, cartier_diff, cartier_manin, rank_and_anumber
from aswcartier.gf import make_field
from aswcartier.keyterms import (NotBranchPoint, NotMinimalPoint, alpha_beta, coefficient_in,
                                 key_coefficient, key_term, point_params, prec_compare,
                                 rank_lower_bound, same_key_term_criterion)
from aswcartier.ratfunc import INF

from conftest import cover, seeded_trials

F3 = make_field(3)


@lru_cache(maxsize=None)
def analysed():
    out = []
    for prof, c in seeded_trials():
        M = cartier_manin(c)
        out.append((prof, c, M, rank_lower_bound(c, M)))
    return out


def test_point_params(one_point_d1):
    pp = point_params(one_point_d1, INF)
    assert (pp.kind, pp.order, pp.ratio, pp.eps, pp.u) == ("InB1", 1, 2, -1, 1)
    pp = point_params(cover("x", "(x-1)^-2"), 1)
    assert (pp.kind, pp.order, pp.ratio, pp.eps) == ("InB2Only", 2, 1, 1)
    with pytest.raises(NotBranchPoint):
        point_params(one_point_d1, 0)
    with pytest.raises(NotMinimalPoint):
        point_params(cover("x^4", "", p=7), INF)


def test_alpha_beta():
    assert alpha_beta(point_params(cover("x"), INF), 0) == (0, 2)
    finite = point_params(cover("x + x^-2"), 0)
    assert alpha_beta(finite, 4) == (1, 0)
    assert alpha_beta(finite, 1) == (0, 0)


def test_key_terms_d1(one_point_d1):
    pp = point_params(one_point_d1, INF)
    got = {}
    for w in enumerate_basis(one_point_d1):
        k = key_term(w, pp)
        got[w.label(F3)] = k.label(F3) if k else None
    assert got == {"dx": None, "x*dx": None, "y1*dx": None,
                   "y1^2*dx": "dx", "y2*dx": "y1*dx", "y2*y1*dx": "y1^2*dx"}


def test_key_terms_d2(one_point_d2):
    pp = point_params(one_point_d2, INF)
    basis = {w.label(F3): w for w in enumerate_basis(one_point_d2)}
    assert key_term(basis["y2*dx"], pp).label(F3) == "y1^2*dx"
    assert key_term(basis["y1^2*x^2*dx"], pp).label(F3) == "y1^2*dx"
    assert key_term(basis["x*dx"], pp) is None


def test_key_coefficients_table_one(one_point_d1):
    pp = point_params(one_point_d1, INF)
    basis = {w.label(F3): w for w in enumerate_basis(one_point_d1)}
    coeffs = [key_coefficient(basis[n], pp, F3) for n in ("y1^2*dx", "y2*dx", "y2*y1*dx")]
    assert coeffs == [1, F3.neg(1), 1]


def test_literal_closed_form_misses_multinomial(one_point_d2):
    # y2^2 dx: the key term comes from 2*y2*(carry) so the closed form needs a factor a2 = 2
    pp = point_params(one_point_d2, INF)
    w = BasisElement(INF, 2, 0, 0)
    kappa = key_term(w, pp)
    img = cartier_diff(DiffNF.from_basis(w, F3), one_point_d2)
    assert coefficient_in(img, kappa) == key_coefficient(w, pp, F3)
    assert key_coefficient(w, pp, F3, literal=True) != key_coefficient(w, pp, F3)


def test_prec_compare(one_point_d2):
    pps = {INF: point_params(one_point_d2, INF)}
    basis = {w.label(F3): w for w in enumerate_basis(one_point_d2)}
    assert prec_compare(basis["dx"], basis["y1*dx"], pps, F3) == "less"
    assert prec_compare(basis["y1*dx"], basis["dx"], pps, F3) == "greater"
    assert prec_compare(basis["y2*dx"], basis["y1^2*x^2*dx"], pps, F3) == "incomparable"
    assert prec_compare(basis["dx"], basis["dx"], pps, F3) == "incomparable"


def test_key_term_counts(one_point_d1, one_point_d2):
    assert rank_lower_bound(one_point_d1).bound == 3
    rep = rank_lower_bound(one_point_d2)
    assert rep.bound == 9 and rep.hypothesis_ok
    assert rank_and_anumber(cartier_manin(one_point_d2))[0] == 9


@pytest.mark.parametrize("counts", [(1, 0, 0, 0), (2, 0, 0, 0), (0, 1, 0, 0), (1, 1, 1, 0),
                                    (1, 0, 2, 1), (0, 2, 0, 2), (3, 0, 1, 1)])
def test_key_term_count_formula(counts):
    c = sample_minimal_cover(3, None, MinimalProfile.from_counts(*counts), seed=sum(counts))
    n1, n2, n3, n4 = counts
    assert rank_lower_bound(c).bound == 11 * n1 + 17 * n2 + 6 * n3 + 6 * n4 - 8


def test_report_json(one_point_d1):
    obj = rank_lower_bound(one_point_d1).to_json()
    assert obj["K"] == 3 and obj["H"] == 3 and obj["hypothesis_ok"]
    assert [r["c"] for r in obj["records"] if r["c"] is not None] == [[1], [2], [1]]


# --- properties over the seeded trial covers --------------------------------------

def test_extracted_coefficient_matches_closed_form():
    for _, c, M, rep in analysed():
        F = c.field
        for r in rep.records:
            if r.kappa is None:
                continue
            pp = rep.params[r.omega.point]
            img = cartier_diff(DiffNF.from_basis(r.omega, F), c)
            got = coefficient_in(img, r.kappa)
            assert got != 0
            if pp.in_b1:
                assert got == key_coefficient(r.omega, pp, F)


def test_key_term_absent_from_earlier_images():
    for _, c, M, rep in analysed():
        F = c.field
        col = {(b.point, b.a2, b.a1, b.v): i for i, b in enumerate(M.basis)}
        for r in rep.records:
            if r.kappa is None:
                continue
            i = col[(r.kappa.point, r.kappa.a2, r.kappa.a1, r.kappa.v)]
            for j, w2 in enumerate(M.basis):
                if prec_compare(w2, r.omega, rep.params, F) == "less":
                    assert M.rows[j][i] == 0


def test_incomparable_iff_same_key_term():
    for _, c, M, rep in analysed():
        F = c.field
        H = [r for r in rep.records if r.kappa is not None]
        for a in H:
            for b in H:
                same = a.kappa == b.kappa
                assert (prec_compare(a.omega, b.omega, rep.params, F) == "incomparable") == same


def test_same_key_term_equations():
    for _, c, M, rep in analysed():
        H = [r for r in rep.records if r.kappa is not None]
        for a in H:
            for b in H:
                if a.omega.point != b.omega.point:
                    continue
                pp = rep.params[a.omega.point]
                assert same_key_term_criterion(a.omega, b.omega, pp) == (a.kappa == b.kappa)


def test_rank_equals_key_term_count():
    for prof, c, M, rep in analysed():
        n1, n2, n3, n4 = prof.counts()
        rank, a = rank_and_anumber(M)
        assert rep.hypothesis_ok
        assert rank == rep.bound == 11 * n1 + 17 * n2 + 6 * n3 + 6 * n4 - 8
        assert a == 3 * n1 + 7 * n2 + 3 * n4
