"""Length-2 Witt vectors over F_q(x) and Z/p^2-covers of the projective line.

The cover attached to a reduced Witt vector (f, h) is the tower

    Y_1 : y_1^p - y_1 = f,
    Y_2 : y_2^p - y_2 = g(y_1) + h,

with g the carry polynomial of :func:`g1_poly`.  This module also holds the
purely combinatorial side: branching data, validity, minimality, genera, and
the a-number formulas used as cross-checks for Z/p-subcovers.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, factorial, floor
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldDesc, NoSolution, make_field
from .ratfunc import INF, RatFunc, point_from_json, point_key, point_to_json

__all__ = [
    "BranchingDatum",
    "CoverSpec",
    "FieldTooSmall",
    "MinimalProfile",
    "NonIntegralGenus",
    "NotACover",
    "NotMinimal",
    "ProfileInfeasible",
    "WittVec2",
    "asw_reduce",
    "bc_bounds",
    "bc_bounds_intermediate",
    "branching_datum",
    "carry_coefficients",
    "conductors_from_pole_degrees",
    "fp_anumber_minimal",
    "g1_poly",
    "genus",
    "intermediate_jump",
    "is_minimal",
    "sample_minimal_as_cover",
    "sample_minimal_cover",
    "smallest_field_for",
    "validate_datum",
    "witt_add2",
    "witt_wp2",
]


class NotACover(ValueError):
    code = "not_a_cover"


class FieldTooSmall(ValueError):
    code = "field_too_small"


class ProfileInfeasible(ValueError):
    code = "profile_infeasible"


class NonIntegralGenus(ValueError):
    code = "non_integral_genus"


class NotMinimal(ValueError):
    code = "not_minimal"


# --- Witt vectors of length 2 ----------------------------------------------

def carry_coefficients(p: int) -> list[int]:
    """[C(p,i)/p mod p for i = 1..p-1]."""
    return [(comb(p, i) // p) % p for i in range(1, p)]


@dataclass(frozen=True)
class WittVec2:
    f1: RatFunc
    f2: RatFunc

    @property
    def field(self) -> FieldDesc:
        return self.f1.field

    @classmethod
    def zero(cls, F: FieldDesc) -> "WittVec2":
        return cls(RatFunc(F), RatFunc(F))

    def __add__(self, other: "WittVec2") -> "WittVec2":
        return witt_add2(self, other)

    def __neg__(self) -> "WittVec2":
        # for odd p the carry of (a1,a2) + (-a1,-a2) vanishes
        return WittVec2(-self.f1, -self.f2)

    def __sub__(self, other: "WittVec2") -> "WittVec2":
        return witt_add2(self, -other)

    def frobenius(self) -> "WittVec2":
        return WittVec2(self.f1.frobenius(), self.f2.frobenius())

    def is_reduced(self) -> bool:
        return self.f1.is_reduced() and self.f2.is_reduced()

    def to_json(self) -> dict:
        return {"f": self.f1.to_json(), "h": self.f2.to_json()}


def witt_add2(a: WittVec2, b: WittVec2) -> WittVec2:
    """Sum in W_2(F_q(x))."""
    F = a.field
    first = a.f1 + b.f1
    second = a.f2 + b.f2
    if a.f1.is_zero() or b.f1.is_zero():
        return WittVec2(first, second)
    p = F.p
    carry = RatFunc(F)
    apow = [RatFunc.const(F, 1)]
    bpow = [RatFunc.const(F, 1)]
    for _ in range(p - 1):
        apow.append(apow[-1] * a.f1)
        bpow.append(bpow[-1] * b.f1)
    for i, c in enumerate(carry_coefficients(p), start=1):
        if c:
            carry = carry + (apow[i] * bpow[p - i]).scale(F.scalar(c))
    return WittVec2(first, second - carry)


def witt_wp2(w: WittVec2) -> WittVec2:
    """The Artin-Schreier-Witt map F - id."""
    return witt_add2(w.frobenius(), -w)


def _top_pdivisible_term(r: RatFunc):
    """Highest-order PF term whose order is divisible by p (constants included)."""
    p = r.field.p
    best = None
    for P, o, c in r.terms():
        if o % p == 0:
            if best is None or o > best[1]:
                best = (P, o, c)
    return best


def asw_reduce(w: WittVec2) -> tuple[WittVec2, WittVec2]:
    """Reduced representative of the class of w and a witness.

    Returns ``(r, z)`` with ``w = r + wp(z)``.  Constants are removed by
    solving y^p - y = c in the base field; when that has no root the class
    needs a larger field and :class:`FieldTooSmall` is raised.
    """
    F = w.field
    cur = w
    witness = WittVec2.zero(F)
    for coord in (1, 2):
        while True:
            target = cur.f1 if coord == 1 else cur.f2
            term = _top_pdivisible_term(target)
            if term is None:
                break
            P, o, c = term
            if o == 0:
                try:
                    s = RatFunc.const(F, F.solve_artin_schreier(c))
                except NoSolution as exc:
                    raise FieldTooSmall(
                        f"constant {F.format(c)} is not of the form y^p - y in {F!r}") from exc
            else:
                s = RatFunc.monomial(F, P, o // F.p, F.pth_root(c))
            z = WittVec2(s, RatFunc(F)) if coord == 1 else WittVec2(RatFunc(F), s)
            cur = cur - witt_wp2(z)
            witness = witness + z
    if cur.f1.is_zero():
        raise NotACover("first coordinate is in the image of F - id")
    return cur, witness


def g1_poly(p: int) -> dict[int, int]:
    """g(y) = sum_i (-1)^i (p-1)!/(i!(p-i)!) y^(p(p-i)+i), as {exponent: coeff mod p}."""
    out = {}
    for i in range(1, p):
        c = ((-1) ** i * factorial(p - 1) // (factorial(i) * factorial(p - i))) % p
        if c:
            out[p * (p - i) + i] = c
    return out


# --- branching data ---------------------------------------------------------

def conductors_from_pole_degrees(degrees: Sequence[int], p: int) -> list[int]:
    """Conductors e_1..e_n at one point from the pole degrees of f_1..f_n.

    u_i = max_{l <= i} p^(i-l) deg(f_l); a level with u_i = 0 is unbranched.
    """
    out = []
    for i in range(len(degrees)):
        u = max(p ** (i - l) * degrees[l] for l in range(i + 1))
        out.append(u + 1 if u > 0 else 0)
    return out


@dataclass(frozen=True)
class BranchingDatum:
    """Rows (point, conductors) in canonical point order."""

    p: int
    rows: tuple
    field: FieldDesc | None = dc_field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.rows[0][1]) if self.rows else 0

    def matrix(self) -> list[list[int]]:
        return [list(e) for _, e in self.rows]

    def as_dict(self) -> dict:
        return {P: list(e) for P, e in self.rows}

    def row(self, P) -> tuple[int, ...]:
        for Q, e in self.rows:
            if Q == P:
                return e
        raise KeyError(P)

    def points(self) -> list:
        return [P for P, _ in self.rows]

    def truncate(self, level: int) -> "BranchingDatum":
        rows = tuple((P, e[:level]) for P, e in self.rows if any(e[:level]))
        return BranchingDatum(self.p, rows, self.field)

    def to_json(self) -> list:
        F = self.field
        return [{"point": point_to_json(F, P) if F else P, "e": list(e)}
                for P, e in self.rows]

    @classmethod
    def from_json(cls, p: int, obj, F: FieldDesc | None = None) -> "BranchingDatum":
        rows = []
        for r in obj:
            P = point_from_json(F, r["point"]) if F else r["point"]
            rows.append((P, tuple(int(e) for e in r["e"])))
        if F:
            rows.sort(key=lambda t: point_key(F, t[0]))
        return cls(p, tuple(rows), F)

    @classmethod
    def from_matrix(cls, p: int, matrix: Iterable[Sequence[int]]) -> "BranchingDatum":
        return cls(p, tuple((i, tuple(r)) for i, r in enumerate(matrix)))


def _rows_of(m) -> list[tuple[int, ...]]:
    if isinstance(m, BranchingDatum):
        return [tuple(e) for _, e in m.rows]
    return [tuple(r) for r in m]


def validate_datum(m, p: int) -> tuple[bool, list[str]]:
    """Check the three conditions characterising branching data."""
    bad = []
    for idx, row in enumerate(_rows_of(m)):
        first = next((j for j, e in enumerate(row) if e), None)
        if first is None:
            bad.append(f"row {idx}: unbranched at every level")
            continue
        if any(row[j] for j in range(first)) or any(e == 0 for e in row[first:]):
            bad.append(f"row {idx}: zero conductor after a branched level")
            continue
        if row[first] % p == 1 or row[first] < 2:
            bad.append(f"row {idx}: first conductor {row[first]} is 1 mod p")
        for j in range(first + 1, len(row)):
            low = p * row[j - 1] - p + 1
            if row[j] < low:
                bad.append(f"row {idx}: e[{j + 1}]={row[j]} < {low}")
            elif row[j] > low and row[j] % p == 1:
                bad.append(f"row {idx}: e[{j + 1}]={row[j]} exceeds minimum but is 1 mod p")
    return (not bad, bad)


def is_minimal(m, p: int) -> bool:
    for row in _rows_of(m):
        first = next((j for j, e in enumerate(row) if e), None)
        if first is None:
            return False
        base = row[first] - 1
        if base <= 0 or (p - 1) % base:
            return False
        for l in range(first + 1, len(row)):
            if row[l] - 1 != p ** (l - first) * base:
                return False
    return True


def genus(m, p: int, level: int | None = None) -> int:
    """Genus of Y_level via the different: 2g - 2 = -2 p^i + sum_l E_l (p^l - p^(l-1)).

    E_l is the sum of the level-l conductors over all branch points; the
    weight p^l - p^(l-1) is indexed by the level, not by the branch point.
    """
    rows = _rows_of(m)
    n = len(rows[0]) if rows else 0
    i = n if level is None else level
    total = 0
    for l in range(1, i + 1):
        total += sum(r[l - 1] for r in rows) * (p**l - p ** (l - 1))
    twice = 2 - 2 * p**i + total
    if twice % 2 or twice < 0:
        raise NonIntegralGenus(f"2g = {twice} for datum {rows}")
    return twice // 2


def intermediate_jump(m: Sequence[int], p: int) -> int:
    """Upper jump of the top Artin-Schreier layer above a totally ramified point."""
    n = len(m)
    return p ** (n - 1) * m[-1] - sum((p - 1) * p ** (i - 1) * m[i - 1] for i in range(1, n))


def fp_anumber_minimal(m, p: int) -> int:
    """a-number of a Z/p-cover of P^1 whose jumps all divide p - 1."""
    total = 0
    for row in _rows_of(m):
        d = row[0] - 1
        if d <= 0 or (p - 1) % d:
            raise NotMinimal(f"jump {d} does not divide p-1={p - 1}")
        if d % 2 == 0:
            total += (p - 1) * d // 4
        else:
            total += (p - 1) * (d * d - 1) // 4
    return total


def _bc_lower_one(d: int, p: int) -> int:
    j = (p + 1) // 2
    s = 0
    for i in range(j, p):
        a = Fraction(i * d, p)
        s += floor(a) - floor(a - (1 - Fraction(1, p)) * Fraction(j * d, p))
    return s


def _bc_upper_one(d: int, p: int) -> int:
    return sum(i * d // p - (p - i) * (i * d // p**2) for i in range(1, p))


def bc_bounds(d, p: int, a_base: int = 0) -> tuple[int, int]:
    """Bounds on the a-number of a Z/p-cover with jumps d (int or list)."""
    ds = [d] if isinstance(d, int) else list(d)
    lower = sum(_bc_lower_one(x, p) for x in ds)
    upper = p * a_base + sum(_bc_upper_one(x, p) for x in ds)
    return lower, upper


def bc_bounds_intermediate(m, p: int, a_y1: int) -> tuple[int, int]:
    """Bounds for Y_2 viewed as a Z/p-cover of Y_1.

    A point branched at both levels has one point above it with jump
    m~ = p*u_2 - (p-1)*u_1; a point branched only at the top level splits into
    p points of Y_1, each with the jump of h.
    """
    jumps = []
    for row in _rows_of(m):
        e1, e2 = row[0], row[1]
        if e1:
            jumps.append(intermediate_jump([e1 - 1, e2 - 1], p))
        else:
            jumps.extend([e2 - 1] * p)
    return bc_bounds(jumps, p, a_y1)


# --- covers -----------------------------------------------------------------

class CoverSpec:
    """The cover defined by a reduced Witt vector (f, h); h = 0 when n = 1."""

    def __init__(self, f: RatFunc, h: RatFunc | None = None, n: int = 2):
        F = f.field
        if h is None:
            h = RatFunc(F)
        if n not in (1, 2):
            raise ValueError("only n = 1 or n = 2 are supported")
        if n == 1 and not h.is_zero():
            raise ValueError("n = 1 covers have no second coordinate")
        if f.is_zero():
            raise NotACover("f = 0 defines no cover")
        if not (f.is_reduced() and h.is_reduced()):
            raise ValueError("Witt vector is not reduced; use CoverSpec.from_witt")
        self.field = F
        self.p = F.p
        self.n = n
        self.f = f
        self.h = h
        self.B1 = f.poles()
        pts = set(self.B1) | set(h.poles())
        self.B2 = sorted(pts, key=lambda P: point_key(F, P))
        self.d = {P: f.pole_order(P) for P in self.B2}
        self.e = {P: h.pole_order(P) for P in self.B2}

    @classmethod
    def from_witt(cls, f: RatFunc, h: RatFunc | None = None, n: int = 2) -> "CoverSpec":
        F = f.field
        w = WittVec2(f, h if h is not None else RatFunc(F))
        red, _ = asw_reduce(w)
        return cls(red.f1, red.f2 if n == 2 else None, n)

    @property
    def witt(self) -> WittVec2:
        return WittVec2(self.f, self.h)

    def points(self) -> list:
        return list(self.B2)

    def in_B1(self, P) -> bool:
        return self.d.get(P, 0) > 0

    def branching_datum(self) -> BranchingDatum:
        return branching_datum(self)

    def subcover(self) -> "CoverSpec":
        return CoverSpec(self.f, None, 1)

    def to_json(self) -> dict:
        return {"p": self.p, "field": self.field.to_json(), "n": self.n,
                "f": self.f.to_json(), "h": self.h.to_json()}

    @classmethod
    def from_json(cls, obj) -> "CoverSpec":
        fd = obj.get("field") or {"p": obj["p"], "k": 1}
        F = make_field(int(fd.get("p", obj["p"])), int(fd.get("k", 1)), fd.get("modulus"))
        if F.p != obj["p"]:
            raise ValueError("field characteristic differs from p")
        f = RatFunc.from_json(F, obj["f"])
        h = RatFunc.from_json(F, obj["h"]) if obj.get("h") else RatFunc(F)
        n = int(obj.get("n", 2))
        return cls.from_witt(f, h, n)

    def __repr__(self) -> str:
        return f"CoverSpec(p={self.p}, f={self.f}, h={self.h})"


def branching_datum(c: CoverSpec) -> BranchingDatum:
    rows = []
    for P in c.B2:
        degs = [c.d[P], c.e[P]][: c.n]
        e = conductors_from_pole_degrees(degs, c.p)
        if any(e):
            rows.append((P, tuple(e)))
    return BranchingDatum(c.p, tuple(rows), c.field)


# --- sampling minimal covers ------------------------------------------------

@dataclass(frozen=True)
class MinimalProfile:
    """Jumps of a minimal Z/p^2-cover: f-pole orders d (first one sits at
    infinity) and h-pole orders e at points where Y_1 is unramified."""

    p: int
    f_orders: tuple
    h_orders: tuple = ()

    @classmethod
    def from_counts(cls, n1: int, n2: int, n3: int, n4: int, p: int = 3,
                    infinity_order: int | None = None) -> "MinimalProfile":
        """p = 3 profile with n1 rows [2,4], n2 rows [3,7], n3 rows [0,2], n4 rows [0,3]."""
        if p != 3:
            raise ValueError("counts profile is defined for p = 3")
        if min(n1, n2, n3, n4) < 0:
            raise ProfileInfeasible("negative counts")
        if n1 + n2 < 1:
            raise ProfileInfeasible("f needs at least one pole (n1 + n2 >= 1)")
        ds = [1] * n1 + [2] * n2
        if infinity_order is None:
            infinity_order = 1 if n1 else 2
        ds.remove(infinity_order)
        return cls(3, tuple([infinity_order] + ds), tuple([1] * n3 + [2] * n4))

    def counts(self) -> tuple[int, int, int, int]:
        return (self.f_orders.count(1), self.f_orders.count(2),
                self.h_orders.count(1), self.h_orders.count(2))

    def datum_rows(self) -> list[tuple[int, int]]:
        p = self.p
        return ([(d + 1, p * d + 1) for d in self.f_orders]
                + [(0, e + 1) for e in self.h_orders])

    def n_points(self) -> int:
        return len(self.f_orders) + len(self.h_orders)


def smallest_field_for(p: int, n_finite: int, margin: int = 1, kmax: int = 6) -> FieldDesc:
    for k in range(1, kmax + 1):
        if p**k >= n_finite + margin:
            return make_field(p, k)
    raise FieldTooSmall(f"need {n_finite + margin} points, more than p^{kmax}")


def _random_poly_part(F: FieldDesc, rng, orders: Iterable[int], lead_order: int,
                      lead: int | None = None) -> dict[int, int]:
    out = {}
    for j in orders:
        out[j] = F.random_element(rng)
    out[lead_order] = lead if lead is not None else F.random_element(rng, nonzero=True)
    return out


def sample_minimal_cover(p: int, F: FieldDesc | None, profile: MinimalProfile,
                         seed: int, max_retries: int = 16) -> CoverSpec:
    """A random reduced cover realising ``profile`` with infinity in B_1 and u_inf = 1."""
    if profile.p != p:
        raise ProfileInfeasible("profile prime differs from p")
    if not profile.f_orders:
        raise ProfileInfeasible("no pole of f requested")
    for d in profile.f_orders:
        if d <= 0 or (p - 1) % d:
            raise ProfileInfeasible(f"f-pole order {d} does not divide p-1")
    for e in profile.h_orders:
        if e <= 0 or (p - 1) % e:
            raise ProfileInfeasible(f"h-pole order {e} does not divide p-1")
    n_finite = profile.n_points() - 1
    if F is None:
        F = smallest_field_for(p, n_finite)
    if F.p != p:
        raise ValueError("field characteristic differs from p")
    if F.q < n_finite:
        raise FieldTooSmall(f"{profile.n_points()} branch points do not fit in P^1(F_{F.q})")
    rng = np.random.default_rng(seed)
    want = sorted(profile.datum_rows())
    for _ in range(max_retries):
        finite = [int(a) for a in rng.choice(F.q, size=n_finite, replace=False)]
        pts = [INF] + finite
        b1 = pts[: len(profile.f_orders)]
        fresh = pts[len(profile.f_orders):]
        fterms, hterms = [], []
        for P, d in zip(b1, profile.f_orders):
            lead = 1 if P is INF else None
            for j, c in _random_poly_part(F, rng, range(1, d), d, lead).items():
                fterms.append((P, j, c))
            for j in range(1, p * d):
                if j % p:
                    hterms.append((P, j, F.random_element(rng)))
        for P, e in zip(fresh, profile.h_orders):
            for j, c in _random_poly_part(F, rng, range(1, e), e).items():
                hterms.append((P, j, c))
        f = RatFunc.from_terms(F, fterms)
        cover = CoverSpec(f, RatFunc.from_terms(F, hterms), 2)
        if not _monomials_regular(cover):
            # keep only the orders where the carry term dominates h
            top = max(g1_poly(p))
            dmap = dict(zip(b1, profile.f_orders))
            hterms = [(P, j, c) for P, j, c in hterms if P not in dmap or p * j < top * dmap[P]]
            cover = CoverSpec(f, RatFunc.from_terms(F, hterms), 2)
        got = sorted(tuple(e) for _, e in branching_datum(cover).rows)
        if got == want:
            return cover
    raise ProfileInfeasible("could not realise the profile within the retry budget")


def _monomials_regular(c: CoverSpec) -> bool:
    from .basis import enumerate_basis, is_regular

    return is_regular(c, enumerate_basis(c, check=False))


def sample_minimal_as_cover(p: int, F: FieldDesc | None, f_orders: Sequence[int],
                            seed: int) -> CoverSpec:
    """A random Z/p-cover (n = 1) with the given pole orders, infinity first."""
    for d in f_orders:
        if d <= 0 or (p - 1) % d:
            raise ProfileInfeasible(f"pole order {d} does not divide p-1")
    n_finite = len(f_orders) - 1
    if F is None:
        F = smallest_field_for(p, n_finite)
    if F.q < n_finite:
        raise FieldTooSmall("not enough rational points")
    rng = np.random.default_rng(seed)
    finite = [int(a) for a in rng.choice(F.q, size=n_finite, replace=False)]
    terms = []
    for P, d in zip([INF] + finite, f_orders):
        lead = 1 if P is INF else None
        for j, c in _random_poly_part(F, rng, range(1, d), d, lead).items():
            terms.append((P, j, c))
    return CoverSpec(RatFunc.from_terms(F, terms), None, 1)
