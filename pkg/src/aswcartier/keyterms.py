"""Key terms of basis differentials under the Cartier operator.

For a basis differential omega at a branch point P, the key term is one basis
monomial that provably occurs in C(omega) with a computable coefficient c_omega.
Distinct key terms with nonzero coefficients give a triangular minor of the
Cartier-Manin matrix, hence rank(C) >= #K.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Mapping

from .asw import CoverSpec
from .basis import BasisElement
from .cartier import CMMatrix, DiffNF, cartier_diff, cartier_manin
from .gf import FieldDesc
from .ratfunc import INF, point_key

__all__ = [
    "KeyTermRecord",
    "KeyTermReport",
    "NotBranchPoint",
    "NotMinimalPoint",
    "PointParams",
    "alpha_beta",
    "coefficient_in",
    "key_coefficient",
    "key_term",
    "point_params",
    "prec_compare",
    "precedes",
    "rank_lower_bound",
    "same_key_term_criterion",
]

IN_B1 = "InB1"
IN_B2_ONLY = "InB2Only"


class NotBranchPoint(ValueError):
    code = "not_branch_point"


class NotMinimalPoint(ValueError):
    code = "not_minimal"


@dataclass(frozen=True)
class PointParams:
    point: object
    kind: str
    order: int  # d_P for B1 points, e_P (pole order of h) otherwise
    ratio: int  # gamma_P = (p-1)/d_P or delta_P = (p-1)/e_P
    eps: int
    u: int  # leading coefficient of f_P (0 off B1)
    p: int

    @property
    def in_b1(self) -> bool:
        return self.kind == IN_B1


def point_params(c: CoverSpec, P) -> PointParams:
    p = c.p
    d, e = c.f.pole_order(P), c.h.pole_order(P)
    eps = -1 if P is INF else 1
    if d:
        if (p - 1) % d:
            raise NotMinimalPoint(f"pole order {d} of f does not divide p-1")
        return PointParams(P, IN_B1, d, (p - 1) // d, eps, c.f.leading_coefficient(P), p)
    if e:
        if (p - 1) % e:
            raise NotMinimalPoint(f"pole order {e} of h does not divide p-1")
        return PointParams(P, IN_B2_ONLY, e, (p - 1) // e, eps, 0, p)
    raise NotBranchPoint(f"{P!r} is not a pole of f or h")


def alpha_beta(pp: PointParams, v: int) -> tuple[int, int]:
    t = pp.ratio * (v - pp.eps) if pp.in_b1 else pp.ratio * (v - 1)
    a = t // pp.p
    return a, t - pp.p * a


def key_term(w: BasisElement, pp: PointParams) -> BasisElement | None:
    p = pp.p
    alpha, beta = alpha_beta(pp, w.v)
    if pp.in_b1:
        if beta > w.a1 + p * w.a2:
            return None
        v = w.v - pp.order * alpha
        if w.a1 >= beta:
            return BasisElement(w.point, w.a2, w.a1 - beta, v)
        return BasisElement(w.point, w.a2 - 1, w.a1 - beta + p, v)
    if beta > w.a2:
        return None
    return BasisElement(w.point, w.a2 - beta, w.a1, w.v - pp.order * alpha)


def coefficient_in(diff: Mapping[tuple, object], b: BasisElement) -> int:
    r = diff.get((b.a2, b.a1))
    if r is None:
        return 0
    for P, o, c in r.terms():
        if P == b.point and o == b.v:
            return c
    return 0


def key_coefficient(w: BasisElement, pp: PointParams, F: FieldDesc,
                    cover: CoverSpec | None = None, literal: bool = False) -> int:
    """c_omega: closed form at poles of f, read off C(omega) at poles of h only.

    When a1 < beta the key term comes from the j = a2 - 1, l = 1 summand of the
    y_2-expansion, whose multinomial coefficient is a2.  The published closed
    form omits that factor (harmless for a2 = 1); ``literal=True`` reproduces it.
    """
    p = pp.p
    alpha, beta = alpha_beta(pp, w.v)
    kappa = key_term(w, pp)
    if kappa is None:
        raise ValueError(f"{w.label(F)} has no key term")
    if not pp.in_b1:
        if cover is None:
            raise ValueError("a cover is needed to extract c_omega at a pole of h")
        return coefficient_in(cartier_diff(DiffNF.from_basis(w, F), cover), kappa)
    factor = F.pow(F.pth_root(pp.u), beta)
    if w.a1 >= beta:
        n = (-1) ** beta * comb(w.a1, beta)
    else:
        n = sum((-1) ** (beta + i + 1) * (comb(p, i) // p) * comb(w.a1 + i, beta)
                for i in range(beta - w.a1, p - w.a1))
        if not literal:
            n *= w.a2
    return F.mul(F.scalar(n), factor)


def precedes(w1: BasisElement, w2: BasisElement, pps: Mapping, F: FieldDesc) -> bool:
    """True when w1 strictly precedes w2 in the key-term order."""
    Q, b2, b1, w = w1.point, w1.a2, w1.a1, w1.v
    P, a2, a1, v = w2.point, w2.a2, w2.a1, w2.v
    p = F.p
    s1, s2 = b1 + p * b2, a1 + p * a2
    if Q != P:
        if s1 < s2:
            return True
        return s1 == s2 and point_key(F, Q) < point_key(F, P)
    pp = pps[P]
    if pp.in_b1:
        d = pp.order
        l1, l2 = w + d * s1, v + d * s2
        if l1 != l2:
            return l1 < l2
        return w - d * alpha_beta(pp, w)[0] > v - d * alpha_beta(pp, v)[0]
    e = pp.order
    l1, l2 = w + e * b2, v + e * a2
    if l1 != l2:
        return l1 < l2
    if b1 != a1:
        return b1 < a1
    return w - e * alpha_beta(pp, w)[0] > v - e * alpha_beta(pp, v)[0]


def prec_compare(w1: BasisElement, w2: BasisElement, pps: Mapping, F: FieldDesc) -> str:
    if precedes(w1, w2, pps, F):
        return "less"
    if precedes(w2, w1, pps, F):
        return "greater"
    return "incomparable"


def same_key_term_criterion(w1: BasisElement, w2: BasisElement, pp: PointParams) -> bool:
    """The equation system characterising equal key terms at one point."""
    if w1.point != w2.point:
        return False
    p = pp.p
    a, b = w1, w2
    if pp.in_b1:
        d = pp.order
        return (a.v + d * (a.a1 + p * a.a2) == b.v + d * (b.a1 + p * b.a2)
                and a.v - d * alpha_beta(pp, a.v)[0] == b.v - d * alpha_beta(pp, b.v)[0])
    e = pp.order
    return (a.v + e * a.a2 == b.v + e * b.a2 and a.a1 == b.a1
            and a.v - e * alpha_beta(pp, a.v)[0] == b.v - e * alpha_beta(pp, b.v)[0])


@dataclass
class KeyTermRecord:
    omega: BasisElement
    alpha: int
    beta: int
    kappa: BasisElement | None
    c: int | None

    def to_json(self, F: FieldDesc) -> dict:
        return {"omega": self.omega.to_json(F), "label": self.omega.label(F),
                "alpha": self.alpha, "beta": self.beta,
                "kappa": self.kappa.to_json(F) if self.kappa else None,
                "kappa_label": self.kappa.label(F) if self.kappa else None,
                "c": F.elem_to_json(self.c) if self.c is not None else None}


@dataclass
class KeyTermReport:
    field: FieldDesc
    records: list
    params: dict
    hypothesis_ok: bool
    conditional: bool = False
    K: list = dc_field(default_factory=list)

    @property
    def H(self) -> list:
        return [r.omega for r in self.records if r.kappa is not None]

    @property
    def bound(self) -> int:
        return len(self.K)

    def to_json(self) -> dict:
        F = self.field
        return {"records": [r.to_json(F) for r in self.records],
                "H": len(self.H), "K": len(self.K), "bound": self.bound,
                "hypothesis_ok": self.hypothesis_ok, "conditional": self.conditional}


def rank_lower_bound(c: CoverSpec, matrix: CMMatrix | None = None) -> KeyTermReport:
    """Key terms of every basis element and the bound rank(C) >= #K.

    Coefficients at poles of h are read from the Cartier-Manin matrix.
    """
    F = c.field
    if matrix is None:
        matrix = cartier_manin(c)
    basis = matrix.basis
    pos = {(b.point, b.a2, b.a1, b.v): i for i, b in enumerate(basis)}
    pps = {P: point_params(c, P) for P in {b.point for b in basis}}
    records = []
    good: dict = {}
    for j, b in enumerate(basis):
        pp = pps[b.point]
        alpha, beta = alpha_beta(pp, b.v)
        kappa = key_term(b, pp)
        coef = None
        if kappa is not None:
            if pp.in_b1:
                coef = key_coefficient(b, pp, F)
            else:
                i = pos.get((kappa.point, kappa.a2, kappa.a1, kappa.v))
                coef = matrix.rows[j][i] if i is not None else 0
            k = (kappa.point, kappa.a2, kappa.a1, kappa.v)
            good[k] = good.get(k, False) or coef != 0
        records.append(KeyTermRecord(b, alpha, beta, kappa, coef))
    K = sorted({r.kappa for r in records if r.kappa is not None}, key=lambda b: b.key(F))
    ok = all(good.values())
    return KeyTermReport(F, records, pps, ok, not ok, K)
