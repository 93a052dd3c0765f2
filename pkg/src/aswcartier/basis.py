"""Explicit monomial basis of regular differentials on Y_1 or Y_2.

Each element is y_2^a2 y_1^a1 x_P^v dx attached to a branch point P, with
x_inf = x and x_P = 1/(x - P).  The point at infinity must be a pole of f.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .asw import BranchingDatum, CoverSpec, g1_poly, genus
from .gf import FieldDesc
from .ratfunc import INF, RatFunc, point_from_json, point_key, point_to_json

__all__ = [
    "BasisElement",
    "GenusMismatch",
    "InfinityUnbranched",
    "MaddenParams",
    "NonStandardForm",
    "basis_index",
    "check_regular",
    "is_regular",
    "coordinates",
    "enumerate_basis",
    "enumerate_basis_minimal",
    "madden_params",
    "recombine",
]


class GenusMismatch(RuntimeError):
    code = "genus_mismatch"


class InfinityUnbranched(ValueError):
    code = "infinity_unbranched"


class NonStandardForm(ValueError):
    """y_2 has a larger pole than the conductor allows, so the monomials are not regular."""

    code = "non_standard_form"


@dataclass(frozen=True)
class MaddenParams:
    """Per-row weights: N(j) = e_j - 1, E(j) the local ramification exponent,
    lam(j) the weight of a_j in the pole-order inequality."""

    N: tuple
    E: tuple
    lam: tuple

    @property
    def d(self) -> int:
        return sum(self.lam)

    def A(self, exps: Sequence[int]) -> int:
        return sum(a * l for a, l in zip(exps, self.lam))

    @property
    def top_exponent(self) -> int:
        return self.E[-1]


def madden_params(row: Sequence[int], p: int) -> MaddenParams:
    """Weights of one datum row.

    lam(j) = p^(n-j) * (p^(E_j - 1) N_j - (p-1) sum_{l<j} p^(l+E_j-j-1) N_l).
    The p^(n-j) factor and the shifted exponent normalise the weights so that
    the count of basis monomials equals the genus; for a minimal row [d+1,pd+1]
    this gives (p d, d(p^2-p+1)).
    """
    n = len(row)
    N = tuple(e - 1 if e > 0 else 0 for e in row)
    first = next((j for j, e in enumerate(row) if e), None)
    E, lam = [], []
    for j in range(n):
        if first is None or j < first:
            E.append(0)
            lam.append(0)
            continue
        Ej = j - first + 1
        inner = p ** (Ej - 1) * N[j]
        for l in range(j):
            if N[l]:
                inner -= (p - 1) * p ** (l + Ej - j - 1) * N[l]
        E.append(Ej)
        lam.append(p ** (n - 1 - j) * inner)
    return MaddenParams(N, tuple(E), tuple(lam))


@dataclass(frozen=True, order=False)
class BasisElement:
    point: object
    a2: int
    a1: int
    v: int

    def key(self, F: FieldDesc) -> tuple:
        return (point_key(F, self.point), self.a2, self.a1, self.v)

    def to_json(self, F: FieldDesc) -> dict:
        return {"point": point_to_json(F, self.point), "a2": self.a2,
                "a1": self.a1, "v": self.v}

    @classmethod
    def from_json(cls, F: FieldDesc, obj) -> "BasisElement":
        return cls(point_from_json(F, obj["point"]), int(obj["a2"]),
                   int(obj["a1"]), int(obj["v"]))

    def label(self, F: FieldDesc | None = None) -> str:
        parts = []
        for name, e in (("y2", self.a2), ("y1", self.a1)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        if self.point is INF:
            base = "x"
        else:
            base = "xP" if F is None else f"x_{F.format(self.point)}"
        if self.v == 1:
            parts.append(base)
        elif self.v:
            parts.append(f"{base}^{self.v}")
        return "*".join(parts + ["dx"])

    def __str__(self) -> str:
        return self.label()


def _sorted(F: FieldDesc, elems) -> list[BasisElement]:
    return sorted(elems, key=lambda b: b.key(F))


def _check_infinity(datum: BranchingDatum) -> None:
    rows = dict(datum.rows)
    if INF not in rows or not rows[INF][0]:
        raise InfinityUnbranched("the basis formulas need infinity to be a pole of f")


def enumerate_basis(c: CoverSpec, check: bool = True) -> list[BasisElement]:
    """Basis from the general weighted inequalities (any valid datum, n <= 2)."""
    datum = c.branching_datum()
    _check_infinity(datum)
    p, n = c.p, c.n
    out = []
    for P, row in datum.rows:
        mp = madden_params(row, p)
        top = p ** (n if P is INF else mp.top_exponent)
        for a2 in range(p if n == 2 else 1):
            for a1 in range(p):
                exps = (a1, a2)[:n]
                room = (p - 1) * mp.d - mp.A(exps)
                if P is INF:
                    vmax = (room - top - 1) // top
                    out.extend(BasisElement(P, a2, a1, v) for v in range(0, vmax + 1))
                else:
                    vmax = (room + top - 1) // top
                    out.extend(BasisElement(P, a2, a1, v) for v in range(1, vmax + 1))
    out = _sorted(c.field, out)
    if check:
        g = genus(datum, p)
        if len(out) != g:
            raise GenusMismatch(f"{len(out)} basis elements for genus {g}")
    return out


def _orders_at(c: CoverSpec, Q, row) -> tuple[int, int, int]:
    """Orders of y_1, y_2 and dx at the point of Y_2 over a pole Q of f."""
    p = c.p
    r = p * p
    u1, u2 = row[0] - 1, row[1] - 1
    vy1 = -p * c.d[Q]
    # the top y_1-power of the carry polynomial competes with the pole of h
    vy2 = -max(p * c.e[Q], max(g1_poly(p)) * c.d[Q])
    l2 = u1 + p * (u2 - u1)
    delta = (r - 1) * (u1 + 1) + (p - 1) * (l2 - u1)
    return vy1, vy2, delta - 2 * r if Q is INF else delta


def is_regular(c: CoverSpec, basis: Sequence[BasisElement]) -> bool:
    try:
        check_regular(c, basis)
    except NonStandardForm:
        return False
    return True


def check_regular(c: CoverSpec, basis: Sequence[BasisElement]) -> None:
    """Raise NonStandardForm unless every monomial is regular over the poles of f.

    Away from the poles of f the generators are in standard form, so these
    are the only places where the monomial basis can fail.
    """
    if c.n != 2:
        return
    p, r = c.p, c.p ** 2
    orders = {Q: _orders_at(c, Q, row) for Q, row in c.branching_datum().rows if c.d.get(Q)}
    for b in basis:
        for Q, (vy1, vy2, vdx) in orders.items():
            w = -r if Q == b.point else (r if Q is INF else 0)
            if b.a2 * vy2 + b.a1 * vy1 + b.v * w + vdx < 0:
                raise NonStandardForm(
                    f"{b.label(c.field)} has a pole over {Q!r}: the pole of h there is too large "
                    "for the monomial basis")


def enumerate_basis_minimal(c: CoverSpec) -> list[BasisElement]:
    """Basis of a minimal Z/p^2-cover from the specialised pole-order bounds."""
    datum = c.branching_datum()
    _check_infinity(datum)
    if c.n != 2:
        raise ValueError("specialised bounds are stated for Z/p^2-covers")
    p = c.p
    out = []
    for P, _ in datum.rows:
        dP, eP = c.d.get(P, 0), c.e.get(P, 0)
        for a2 in range(p):
            for a1 in range(p):
                if dP:
                    room = p * dP * (p - 1 - a1) + dP * (p * p - p + 1) * (p - 1 - a2)
                    if P is INF:
                        vs = range(0, (room - p * p - 1) // (p * p) + 1)
                    else:
                        vs = range(1, (room + p * p - 1) // (p * p) + 1)
                else:
                    vs = range(1, (eP * (p - 1 - a2) + p - 1) // p + 1)
                out.extend(BasisElement(P, a2, a1, v) for v in vs)
    return _sorted(c.field, out)


def basis_index(basis: Sequence[BasisElement]) -> dict:
    return {(b.point, b.a2, b.a1, b.v): i for i, b in enumerate(basis)}


def coordinates(omega: Mapping[tuple, RatFunc], basis: Sequence[BasisElement],
                index: dict | None = None) -> tuple[list[int], bool]:
    """Coefficient vector of a normal-form differential and a remainder flag.

    ``omega`` maps (a2, a1) to the rational coefficient of y_2^a2 y_1^a1 dx.
    """
    idx = index if index is not None else basis_index(basis)
    vec = [0] * len(basis)
    rest = False
    for (a2, a1), r in omega.items():
        for P, o, c in r.terms():
            i = idx.get((P, a2, a1, o))
            if i is None:
                rest = True
            else:
                vec[i] = c
    return vec, rest


def recombine(vec: Sequence[int], basis: Sequence[BasisElement], F: FieldDesc) -> dict:
    """Inverse of :func:`coordinates`: {(a2, a1): RatFunc}."""
    terms: dict[tuple, list] = {}
    for c, b in zip(vec, basis):
        if c:
            terms.setdefault((b.a2, b.a1), []).append((b.point, b.v, c))
    return {k: RatFunc.from_terms(F, t) for k, t in terms.items()}
