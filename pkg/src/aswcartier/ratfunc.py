"""Rational functions on P^1 over F_q whose poles are all F_q-rational.

A :class:`RatFunc` is stored directly in partial-fraction normal form::

    r = sum_m c_m x^m  +  sum_a sum_j c_{a,j} (x - a)^(-j)

so equality, pole orders, reducedness and the Cartier operator are plain
bookkeeping.  Products are computed from local Laurent expansions at the
poles: the principal part of ``A*B`` at a point only depends on finitely many
terms of the two expansions there.

Points are the sentinel :data:`INF` or an integer field code.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

from .gf import FieldDesc

__all__ = [
    "INF",
    "PoleAtCenter",
    "RatFunc",
    "expansion_at",
    "point_from_json",
    "point_key",
    "point_to_json",
    "series_mul",
]


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class PoleAtCenter(ValueError):
    code = "pole_at_center"


def point_key(F: FieldDesc, P) -> tuple:
    """Sort key: infinity first, then finite points by coefficient vector."""
    if P is INF:
        return (0,)
    return (1, tuple(F.coeffs(P)))


def point_to_json(F: FieldDesc, P):
    return "inf" if P is INF else F.coeffs(P)


def point_from_json(F: FieldDesc, obj):
    if obj == "inf" or obj is None:
        return INF
    return F.elem_from_json(obj)


def _trim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


# --- truncated power series helpers (plain lists of codes) -----------------

def series_mul(F: FieldDesc, a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First n coefficients of the product of two power series."""
    a = list(a[:n])
    b = list(b[:n])
    prod = list(F.poly_mul(_trim(a), _trim(b)))[:n]
    return prod + [0] * (n - len(prod))


def _div_linear(F: FieldDesc, s: list[int], d: int, c: int = 1) -> list[int]:
    """Series quotient s / (d + c*t), same length as s (d != 0)."""
    inv_d = F.inv(d)
    out = [0] * len(s)
    prev = 0
    for m, sm in enumerate(s):
        prev = F.mul(F.sub(sm, F.mul(c, prev)), inv_d)
        out[m] = prev
    return out


def expansion_at(r: "RatFunc", Q, hi: int) -> tuple[int, list[int]]:
    """Laurent expansion of r at Q up to (excluding) exponent ``hi``.

    Returns ``(lo, coeffs)`` with coeffs[i] the coefficient of t^(lo+i), where
    t = x - Q for finite Q and t = 1/x at infinity, and lo = -pole order.
    """
    F = r.field
    lo = -r.pole_order(Q)
    n = hi - lo
    if n <= 0:
        return lo, []
    out = [0] * n
    if Q is INF:
        for m, c in enumerate(r.poly):
            if c and -m - lo < n:
                out[-m - lo] = c
        for b, cs in r.parts:
            # sum_j c_j w^j with w = s/(1 - b s), by Horner; w shifts by one
            L = hi - 1  # exponents 1..hi-1 reachable
            if L <= 0:
                continue
            acc = [0] * L  # coefficients of s^1..s^L
            for cj in reversed(cs):
                # acc <- (acc + c_j) * w ; acc is stored as exponents >= 1
                shifted = [cj] + acc[:-1]  # (acc + c_j) then times s
                acc = _div_linear(F, shifted, 1, F.neg(b))
            for e in range(1, hi):
                if e - lo < n:
                    out[e - lo] = F.add(out[e - lo], acc[e - 1])
        return lo, out
    # finite point
    for j, c in enumerate(r.principal(Q), start=1):
        out[-j - lo] = c
    if hi <= 0:
        return lo, out
    taylor = [0] * hi
    for c in reversed(r.poly):
        # taylor <- taylor * (Q + t) + c
        nxt = [0] * hi
        for i, tc in enumerate(taylor):
            if tc:
                nxt[i] = F.add(nxt[i], F.mul(tc, Q))
                if i + 1 < hi:
                    nxt[i + 1] = F.add(nxt[i + 1], tc)
        nxt[0] = F.add(nxt[0], c)
        taylor = nxt
    for b, cs in r.parts:
        if b == Q:
            continue
        delta = F.sub(Q, b)
        acc = [0] * hi
        for cj in reversed(cs):
            acc[0] = F.add(acc[0], cj)
            acc = _div_linear(F, acc, delta)
        taylor = [F.add(u, v) for u, v in zip(taylor, acc)]
    for i in range(hi):
        out[i - lo] = F.add(out[i - lo], taylor[i])
    return lo, out


class RatFunc:
    """Immutable rational function in partial-fraction normal form.

    ``poly`` holds the coefficients of 1, x, x^2, ...; ``parts`` is a tuple of
    ``(a, (c_1, ..., c_n))`` sorted by :func:`point_key`, meaning
    ``sum_j c_j (x - a)^(-j)`` with ``c_n != 0``.
    """

    __slots__ = ("field", "poly", "parts", "_hash")

    def __init__(self, field: FieldDesc, poly: Iterable[int] = (),
                 parts: Mapping[int, Sequence[int]] | Iterable | None = None):
        self.field = field
        self.poly = _trim(list(poly))
        items = parts.items() if isinstance(parts, Mapping) else (parts or ())
        clean = []
        for a, cs in items:
            cs = _trim(list(cs))
            if cs:
                clean.append((a, cs))
        clean.sort(key=lambda t: point_key(field, t[0]))
        self.parts = tuple(clean)
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, F: FieldDesc) -> "RatFunc":
        return cls(F)

    @classmethod
    def const(cls, F: FieldDesc, c: int) -> "RatFunc":
        return cls(F, (c,))

    @classmethod
    def x(cls, F: FieldDesc) -> "RatFunc":
        return cls(F, (0, 1))

    @classmethod
    def monomial(cls, F: FieldDesc, P, order: int, coeff: int = 1) -> "RatFunc":
        """coeff * x_P^order, with x_inf = x and x_P = 1/(x - P)."""
        if P is INF:
            return cls(F, [0] * order + [coeff])
        if order == 0:
            return cls(F, (coeff,))
        return cls(F, (), {P: [0] * (order - 1) + [coeff]})

    @classmethod
    def from_poly(cls, F: FieldDesc, coeffs: Sequence[int]) -> "RatFunc":
        return cls(F, coeffs)

    @classmethod
    def from_num_den(cls, F: FieldDesc, num: Sequence[int],
                     den: Mapping[int, int]) -> "RatFunc":
        """num / prod (x - a)^m, reduced automatically."""
        r = cls(F, num)
        for a, m in den.items():
            if m:
                r = r * cls.monomial(F, a, m)
        return r

    @classmethod
    def from_terms(cls, F: FieldDesc, terms: Iterable[tuple]) -> "RatFunc":
        """Sum of (point, order, coeff) triples."""
        poly: dict[int, int] = {}
        parts: dict[int, dict[int, int]] = {}
        for P, order, c in terms:
            if P is INF:
                poly[order] = F.add(poly.get(order, 0), c)
            elif order == 0:
                poly[0] = F.add(poly.get(0, 0), c)
            else:
                d = parts.setdefault(P, {})
                d[order] = F.add(d.get(order, 0), c)
        plist = [0] * (max(poly) + 1 if poly else 0)
        for m, c in poly.items():
            plist[m] = c
        pp = {}
        for a, d in parts.items():
            lst = [0] * max(d)
            for j, c in d.items():
                lst[j - 1] = c
            pp[a] = lst
        return cls(F, plist, pp)

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.poly and not self.parts

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return not self.parts

    def principal(self, a) -> tuple[int, ...]:
        for b, cs in self.parts:
            if b == a:
                return cs
        return ()

    def poles(self) -> list:
        """Poles in canonical order (infinity first)."""
        out = [INF] if len(self.poly) > 1 else []
        return out + [a for a, _ in self.parts]

    def pole_order(self, P) -> int:
        if P is INF:
            return max(len(self.poly) - 1, 0)
        return len(self.principal(P))

    def constant_term(self) -> int:
        return self.poly[0] if self.poly else 0

    def leading_coefficient(self, P) -> int:
        """Coefficient of x_P^(pole order); 0 when r is regular at P."""
        if P is INF:
            return self.poly[-1] if len(self.poly) > 1 else 0
        cs = self.principal(P)
        return cs[-1] if cs else 0

    def terms(self) -> Iterator[tuple]:
        """All non-zero PF terms as (point, order, coeff); constants at INF."""
        for m, c in enumerate(self.poly):
            if c:
                yield (INF, m, c)
        for a, cs in self.parts:
            for j, c in enumerate(cs, start=1):
                if c:
                    yield (a, j, c)

    def pf(self) -> tuple[tuple[int, ...], dict]:
        """(polynomial part, {point: [c_1..c_n]})."""
        return self.poly, {a: list(cs) for a, cs in self.parts}

    @property
    def numerator(self) -> tuple[int, ...]:
        F = self.field
        den = self.denominator
        num = list(self.poly)
        num = list(F.poly_mul(num, _den_poly(F, den))) if num else []
        for a, cs in self.parts:
            others = {b: m for b, m in den.items() if b != a}
            rest = _den_poly(F, others)
            n = len(cs)
            for j, c in enumerate(cs, start=1):
                if c:
                    term = F.poly_mul((c,), F.poly_mul(rest, _lin_pow(F, a, n - j)))
                    num = _poly_add(F, num, term)
        return _trim(list(num))

    @property
    def denominator(self) -> dict[int, int]:
        return {a: len(cs) for a, cs in self.parts}

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "RatFunc") -> None:
        if other.field is not self.field:
            raise ValueError("rational functions over different fields")

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            self._check(other)
            return other
        if isinstance(other, int):
            return RatFunc(self.field, (self.field.scalar(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        poly = _poly_add(F, self.poly, other.poly)
        parts = {a: list(cs) for a, cs in self.parts}
        for a, cs in other.parts:
            if a in parts:
                parts[a] = _poly_add(F, parts[a], cs)
            else:
                parts[a] = list(cs)
        return RatFunc(F, poly, parts)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return RatFunc(F, [F.neg(c) for c in self.poly],
                       {a: [F.neg(c) for c in cs] for a, cs in self.parts})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "RatFunc":
        """Multiply by a field scalar."""
        F = self.field
        if c == 0:
            return RatFunc(F)
        return RatFunc(F, [F.mul(c, v) for v in self.poly],
                       {a: [F.mul(c, v) for v in cs] for a, cs in self.parts})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        if self.is_zero() or other.is_zero():
            return RatFunc(F)
        if not self.parts and not other.parts:
            return RatFunc(F, F.poly_mul(self.poly, other.poly))
        if len(self.poly) <= 1 and not self.parts:
            return other.scale(self.constant_term())
        if len(other.poly) <= 1 and not other.parts:
            return self.scale(other.constant_term())
        points = {a for a, _ in self.parts} | {a for a, _ in other.parts}
        parts = {}
        for Q in points:
            oa, ob = self.pole_order(Q), other.pole_order(Q)
            lo_a, ea = expansion_at(self, Q, ob)
            lo_b, eb = expansion_at(other, Q, oa)
            # both expansions start at their own -order; product starts at -(oa+ob)
            n = oa + ob
            prod = series_mul(F, ea, eb, n)
            parts[Q] = list(reversed(prod))  # exponent -n..-1 -> c_n..c_1
        da, db = self.pole_order(INF), other.pole_order(INF)
        lo_a, ea = expansion_at(self, INF, db + 1)
        lo_b, eb = expansion_at(other, INF, da + 1)
        n = da + db + 1
        prod = series_mul(F, ea, eb, n)
        # prod[i] is the coefficient of s^(i - da - db), i.e. of x^(da + db - i)
        poly = list(reversed(prod))
        return RatFunc(F, poly, parts)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers")
        result = RatFunc.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self) -> "RatFunc":
        """r^p, computed termwise: (sum c_i m_i)^p = sum c_i^p m_i^p."""
        F, p = self.field, self.field.p
        poly = [0] * ((len(self.poly) - 1) * p + 1) if self.poly else []
        for m, c in enumerate(self.poly):
            if c:
                poly[m * p] = F.frob(c)
        parts = {}
        for a, cs in self.parts:
            lst = [0] * (len(cs) * p)
            for j, c in enumerate(cs, start=1):
                if c:
                    lst[j * p - 1] = F.frob(c)
            parts[a] = lst
        return RatFunc(F, poly, parts)

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc(self.field, (self.field.scalar(other),))
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.field is other.field and self.poly == other.poly
                and self.parts == other.parts)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.field), self.poly, self.parts))
        return self._hash

    # -- calculus and the Cartier operator ----------------------------------

    def derivative(self) -> "RatFunc":
        F = self.field
        poly = [F.mul(F.scalar(m), c) for m, c in enumerate(self.poly)][1:]
        parts = {}
        for a, cs in self.parts:
            lst = [0] * (len(cs) + 1)
            for j, c in enumerate(cs, start=1):
                lst[j] = F.mul(F.scalar(-j), c)
            parts[a] = lst
        return RatFunc(F, poly, parts)

    def cartier(self) -> "RatFunc":
        """r' with C(r dx) = r' dx."""
        F, p = self.field, self.field.p
        poly = []
        for m, c in enumerate(self.poly):
            if c and (m + 1) % p == 0:
                k = (m + 1) // p - 1
                poly += [0] * (k + 1 - len(poly))
                poly[k] = F.pth_root(c)
        parts = {}
        for a, cs in self.parts:
            lst = []
            for j, c in enumerate(cs, start=1):
                if c and j % p == 1:
                    k = (j - 1) // p + 1
                    lst += [0] * (k - len(lst))
                    lst[k - 1] = F.pth_root(c)
            if lst:
                parts[a] = lst
        return RatFunc(F, poly, parts)

    def is_reduced(self) -> bool:
        p = self.field.p
        if self.constant_term():
            return False
        if any(c and m % p == 0 for m, c in enumerate(self.poly) if m):
            return False
        return not any(c and j % p == 0
                       for _, cs in self.parts for j, c in enumerate(cs, start=1))

    def laurent_expand(self, c: int, N: int) -> list[int]:
        """First N Taylor coefficients at the finite point c."""
        if self.pole_order(c):
            raise PoleAtCenter(f"{self} has a pole at {self.field.format(c)}")
        return expansion_at(self, c, N)[1]

    def evaluate(self, c: int) -> int:
        return self.laurent_expand(c, 1)[0]

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        F = self.field
        return {"terms": [{"point": point_to_json(F, P), "order": o,
                           "coeff": F.coeffs(c)} for P, o, c in self.terms()]}

    @classmethod
    def from_json(cls, F: FieldDesc, obj) -> "RatFunc":
        terms = []
        for t in obj["terms"]:
            P = point_from_json(F, t["point"])
            order = int(t["order"])
            if order < 0 or (P is not INF and order == 0):
                raise ValueError(f"bad PF term order {order} at {t['point']!r}")
            terms.append((P, order, F.elem_from_json(t["coeff"])))
        return cls.from_terms(F, terms)

    def __str__(self) -> str:
        F = self.field
        if self.is_zero():
            return "0"
        pieces = []
        for P, o, c in self.terms():
            cs = _fmt_scalar(F, c)
            if P is INF:
                if o == 0:
                    pieces.append(cs)
                    continue
                base = "x" if o == 1 else f"x^{o}"
            else:
                base = "x" if P == 0 else f"(x-{_fmt_scalar(F, P)})"
                base += f"^-{o}"
            pieces.append(base if c == 1 else f"{cs}*{base}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def _fmt_scalar(F: FieldDesc, c: int) -> str:
    return str(c) if F.k == 1 else "[" + ",".join(map(str, F.coeffs(c))) + "]"


def _poly_add(F: FieldDesc, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        if c:
            out[i] = F.add(out[i], c)
    return out


def _lin_pow(F: FieldDesc, a: int, m: int) -> tuple[int, ...]:
    """(x - a)^m as a coefficient tuple."""
    out: tuple[int, ...] = (1,)
    lin = (F.neg(a), 1)
    for _ in range(m):
        out = F.poly_mul(out, lin)
    return out


def _den_poly(F: FieldDesc, den: Mapping[int, int]) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for a, m in den.items():
        out = F.poly_mul(out, _lin_pow(F, a, m))
    return out
