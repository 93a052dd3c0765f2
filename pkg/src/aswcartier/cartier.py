"""The Cartier operator on differentials of Y_2 and the Cartier-Manin matrix.

A differential in normal form is sum r_{a2,a1}(x) y_2^a2 y_1^a1 dx with
0 <= a1, a2 < p.  Writing y_2 = y_2^p - g(y_1) - h and y_1 = y_1^p - f pulls
the p-th powers out of the operator, so that

    C(y_2^a2 y_1^a1 r dx) = sum_{j,c} y_2^j y_1^c C(Phi_{j,c}(f, h) r dx)

with universal polynomials Phi over F_p depending only on (p, a2, a1).
:func:`phi_table` computes them; the rest is Cartier on k(x) dx.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

import numpy as np

from .asw import CoverSpec, g1_poly
from .basis import (BasisElement, basis_index, check_regular, coordinates, enumerate_basis,
                    recombine)
from .gf import FieldDesc, make_field
from .ratfunc import INF, RatFunc, expansion_at, point_key, series_mul

__all__ = [
    "BadCenter",
    "CMMatrix",
    "DiffNF",
    "NoASRoot",
    "NotRegularImage",
    "cartier_diff",
    "cartier_diff_expand_first",
    "cartier_manin",
    "extend_scalars",
    "find_center",
    "normalize_diff",
    "oracle_check",
    "phi_table",
    "rank_and_anumber",
    "rank_mod",
    "series_oracle",
]


class NotRegularImage(RuntimeError):
    code = "not_regular_image"


class BadCenter(ValueError):
    code = "bad_center"


class NoASRoot(ValueError):
    code = "no_as_root"


# --- universal polynomials --------------------------------------------------

@lru_cache(maxsize=None)
def _y1_reduction(p: int, A: int) -> tuple:
    """y_1^A modulo y_1^p - y_1 - F, as p dicts {F-exponent: coeff}."""
    if A < p:
        out = [dict() for _ in range(p)]
        out[A] = {0: 1}
        return tuple(out)
    prev = _y1_reduction(p, A - 1)
    out = [dict() for _ in range(p)]
    for c in range(p - 1):
        out[c + 1] = dict(prev[c])
    for e, v in prev[p - 1].items():
        # y_1^p = y_1 + F
        out[1][e] = (out[1].get(e, 0) + v) % p
        out[0][e + 1] = (out[0].get(e + 1, 0) + v) % p
    return tuple({e: v for e, v in d.items() if v} for d in out)


@lru_cache(maxsize=None)
def _g_powers(p: int, l: int) -> dict:
    g = g1_poly(p)
    out = {0: 1}
    for _ in range(l):
        nxt: dict[int, int] = {}
        for a, u in out.items():
            for b, w in g.items():
                nxt[a + b] = (nxt.get(a + b, 0) + u * w) % p
        out = {k: v for k, v in nxt.items() if v}
    return out


@lru_cache(maxsize=None)
def phi_table(p: int, a2: int, a1: int) -> dict:
    """{(j, c): {(E, i): coeff}} with C(y2^a2 y1^a1 r dx) = sum y2^j y1^c C(sum coeff f^E h^i r dx)."""
    acc: dict[tuple, dict[tuple, int]] = {}

    def put(j, c, E, i, v):
        d = acc.setdefault((j, c), {})
        d[(E, i)] = (d.get((E, i), 0) + v) % p

    for j in range(a2 + 1):
        for l in range(a2 - j + 1):
            i = a2 - j - l
            mult = factorial(a2) // (factorial(j) * factorial(l) * factorial(i))
            sign = (-1) ** (a2 - j) * mult % p
            if not sign:
                continue
            for A, cg in _g_powers(p, l).items():
                red = _y1_reduction(p, A + a1)
                for cc, poly in enumerate(red):
                    for E, cr in poly.items():
                        base = sign * cg * cr
                        for m in range(cc + 1):
                            v = base * comb(cc, m) * (-1) ** m
                            if v % p:
                                put(j, cc - m, E + m, i, v)
    return {k: {m: v for m, v in d.items() if v}
            for k, d in sorted(acc.items()) if any(d.values())}


# --- normal-form differentials ------------------------------------------------

class DiffNF(dict):
    """{(a2, a1): RatFunc} for sum r y_2^a2 y_1^a1 dx; zero entries are dropped."""

    def __init__(self, items=()):
        super().__init__()
        for k, r in dict(items).items():
            if r is not None and not r.is_zero():
                self[k] = r

    @classmethod
    def from_basis(cls, b: BasisElement, F: FieldDesc, coeff: int = 1) -> "DiffNF":
        return cls({(b.a2, b.a1): RatFunc.monomial(F, b.point, b.v, coeff)})

    def __add__(self, other: "DiffNF") -> "DiffNF":
        out = dict(self)
        for k, r in other.items():
            out[k] = out[k] + r if k in out else r
        return DiffNF(out)

    def __sub__(self, other: "DiffNF") -> "DiffNF":
        return self + DiffNF({k: -r for k, r in other.items()})

    def mul_function(self, s: RatFunc) -> "DiffNF":
        return DiffNF({k: r * s for k, r in self.items()})

    def scale(self, c: int) -> "DiffNF":
        return DiffNF({k: r.scale(c) for k, r in self.items()})

    def __eq__(self, other) -> bool:
        return dict.__eq__(DiffNF(self), DiffNF(other))

    __hash__ = None

    def to_json(self) -> list:
        return [{"a2": k[0], "a1": k[1], "r": r.to_json()} for k, r in sorted(self.items())]


def _powers(r: RatFunc, n: int, cache: dict) -> RatFunc:
    if n not in cache:
        cache[n] = RatFunc.const(r.field, 1) if n == 0 else _powers(r, n - 1, cache) * r
    return cache[n]


def _poly_in(F: FieldDesc, coeffs: Mapping[int, int], base: RatFunc, cache: dict) -> RatFunc:
    out = RatFunc(F)
    for e, c in coeffs.items():
        out = out + _powers(base, e, cache).scale(F.scalar(c))
    return out


def normalize_diff(raw: Mapping[tuple, RatFunc], c: CoverSpec) -> DiffNF:
    """Reduce arbitrary exponents with y_1^p = y_1 + f and y_2^p = y_2 + g(y_1) + h."""
    F, p = c.field, c.p
    work: dict[tuple, RatFunc] = {}
    for k, r in raw.items():
        if not r.is_zero():
            work[k] = work[k] + r if k in work else r
    g = g1_poly(p)
    while True:
        big = [k for k in work if k[0] >= p]
        if not big:
            break
        e2, e1 = max(big)
        r = work.pop((e2, e1))
        adds = [((e2 - p + 1, e1), r), ((e2 - p, e1), r * c.h)]
        adds += [((e2 - p, e1 + a), r.scale(F.scalar(v))) for a, v in g.items()]
        for k, s in adds:
            if not s.is_zero():
                work[k] = work[k] + s if k in work else s
    out: dict[tuple, RatFunc] = {}
    fcache: dict = {}
    for (e2, e1), r in work.items():
        for cc, poly in enumerate(_y1_reduction(p, e1)):
            if poly:
                s = _poly_in(F, poly, c.f, fcache) * r
                out[(e2, cc)] = out[(e2, cc)] + s if (e2, cc) in out else s
    return DiffNF(out)


def cartier_diff(omega: Mapping[tuple, RatFunc], c: CoverSpec) -> DiffNF:
    """Exact C(omega) via the universal polynomials (reduce y_1 before the y_1-step)."""
    F, p = c.field, c.p
    fc: dict = {}
    hc: dict = {}
    prod: dict = {}
    out: dict[tuple, RatFunc] = {}
    for (a2, a1), r in omega.items():
        for jc, poly in phi_table(p, a2, a1).items():
            s = RatFunc(F)
            for (E, i), v in poly.items():
                if (E, i) not in prod:
                    prod[(E, i)] = _powers(c.f, E, fc) * _powers(c.h, i, hc)
                s = s + prod[(E, i)].scale(F.scalar(v))
            img = (s * r).cartier()
            if not img.is_zero():
                out[jc] = out[jc] + img if jc in out else img
    return DiffNF(out)


def cartier_diff_expand_first(omega: Mapping[tuple, RatFunc], c: CoverSpec) -> DiffNF:
    """C(omega) by applying the y_1-step to unreduced powers and reducing afterwards.

    Independent of :func:`phi_table`; used to cross-check it.
    """
    F, p = c.field, c.p
    fc: dict = {}
    hc: dict = {}
    raw: dict[tuple, RatFunc] = {}
    for (a2, a1), r in omega.items():
        for j in range(a2 + 1):
            for l in range(a2 - j + 1):
                i = a2 - j - l
                mult = factorial(a2) // (factorial(j) * factorial(l) * factorial(i))
                sign = (-1) ** (a2 - j) * mult % p
                if not sign:
                    continue
                base = _powers(c.h, i, hc) * r
                for A, cg in _g_powers(p, l).items():
                    A += a1
                    for m in range(A + 1):
                        v = sign * cg * comb(A, m) * (-1) ** m % p
                        if not v:
                            continue
                        img = (_powers(c.f, m, fc) * base).cartier()
                        if img.is_zero():
                            continue
                        key = (j, A - m)
                        img = img.scale(F.scalar(v))
                        raw[key] = raw[key] + img if key in raw else img
    return normalize_diff(raw, c)


# --- Cartier-Manin matrix ---------------------------------------------------

@dataclass
class CMMatrix:
    """Row j holds the coordinates of C(basis[j])."""

    field: FieldDesc
    basis: list
    rows: list

    @property
    def g(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        F = self.field
        return {"basis": [b.to_json(F) for b in self.basis],
                "rows": [[F.elem_to_json(a) for a in row] for row in self.rows]}

    def to_csv(self) -> str:
        return "".join(",".join(str(a) for a in row) + "\n" for row in self.rows)

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.g)


def rank_mod(F: FieldDesc, rows) -> int:
    """Rank over F_q by row reduction on integer-coded entries."""
    M = np.array(rows, dtype=np.int64)
    if M.size == 0:
        return 0
    nr, nc = M.shape
    r = 0
    for col in range(nc):
        piv = next((i for i in range(r, nr) if M[i, col]), None)
        if piv is None:
            continue
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = F.vec_scale(F.inv(int(M[r, col])), M[r])
        below = np.nonzero(M[r + 1:, col])[0] + r + 1
        for i in below:
            M[i] = F.vec_sub(M[i], F.vec_scale(int(M[i, col]), M[r]))
        r += 1
        if r == nr:
            break
    return r


def rank_and_anumber(M: CMMatrix) -> tuple[int, int]:
    rk = rank_mod(M.field, M.rows)
    return rk, M.g - rk


class _Frame:
    """Local data at the branch points used to apply C to basis monomials.

    For Q in B_2 (infinity included) it caches Laurent expansions of
    Phi_{j,c}(f, h) and of x_P^v; C(Phi * x_P^v dx) is then read off from the
    principal parts (polynomial part at infinity) of their products.
    """

    def __init__(self, c: CoverSpec, basis: Sequence[BasisElement]):
        F, p = c.field, c.p
        self.c, self.F, self.p = c, F, p
        self.basis = list(basis)
        self.index = basis_index(self.basis)
        pts = set(c.B2) | {INF}
        self.pts = sorted(pts, key=lambda P: point_key(F, P))
        self.vmax = {Q: 0 for Q in self.pts}
        shapes = set()
        for b in self.basis:
            self.vmax[b.point] = max(self.vmax[b.point], b.v)
            shapes.add((b.a2, b.a1))
        self.tables = {s: phi_table(p, *s) for s in shapes}
        monos = {m for t in self.tables.values() for poly in t.values() for m in poly}
        self.M, self.T, self.L = {}, {}, {}
        for Q in self.pts:
            dQ, eQ = c.f.pole_order(Q), c.h.pole_order(Q)
            self.M[Q] = max((E * dQ + i * eQ for E, i in monos), default=0)
            self.T[Q] = self.vmax[Q] + 1 if Q is INF else self.vmax[Q]
            self.L[Q] = self.M[Q] + self.T[Q]
        self._fpow: dict = {}
        self._hpow: dict = {}
        self._mono: dict = {}
        self._S: dict = {}
        self._X: dict = {}

    # truncated products of series with equal relative length
    def _mul(self, a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
        F = self.F
        if F.k == 1:
            return np.convolve(a[:n], b[:n])[:n] % F.p
        out = np.zeros(n, dtype=np.int64)
        prod = F._poly_mul_digits(a[:n].tolist(), b[:n].tolist())[:n]
        out[: len(prod)] = prod
        return out

    def _base(self, r: RatFunc, Q) -> np.ndarray:
        lo = -r.pole_order(Q)
        _, cs = expansion_at(r, Q, lo + self.L[Q])
        return np.array(cs, dtype=np.int64)

    def _pow(self, store: dict, r: RatFunc, Q, e: int) -> np.ndarray:
        key = (Q, e)
        if key not in store:
            if e == 0:
                one = np.zeros(self.L[Q], dtype=np.int64)
                one[0] = 1
                store[key] = one
            elif e == 1:
                store[key] = self._base(r, Q)
            else:
                store[key] = self._mul(self._pow(store, r, Q, e - 1),
                                       self._pow(store, r, Q, 1), self.L[Q])
        return store[key]

    def _monomial(self, Q, E: int, i: int) -> np.ndarray:
        key = (Q, E, i)
        if key not in self._mono:
            a = self._pow(self._fpow, self.c.f, Q, E)
            b = self._pow(self._hpow, self.c.h, Q, i)
            self._mono[key] = self._mul(a, b, self.L[Q]) if E and i else (a if i == 0 else b)
        return self._mono[key]

    def _window(self, shape, jc, Q) -> np.ndarray:
        """Phi_{jc}(f, h) at Q on exponents [-M_Q, T_Q)."""
        key = (shape, jc, Q)
        if key not in self._S:
            F = self.F
            M, W = self.M[Q], self.M[Q] + self.T[Q]
            dQ, eQ = self.c.f.pole_order(Q), self.c.h.pole_order(Q)
            acc = np.zeros(W, dtype=np.int64)
            for (E, i), v in self.tables[shape][jc].items():
                off = M - (E * dQ + i * eQ)
                mono = self._monomial(Q, E, i)[: W - off]
                part = np.zeros(W, dtype=np.int64)
                part[off:] = F.vec_scale(F.scalar(v), mono)
                acc = F.vec_add(acc, part)
            self._S[key] = acc
        return self._S[key]

    def _xpow(self, P, Q, v: int) -> np.ndarray:
        """x_P^v at Q != P as a power series of length M_Q + 1."""
        key = (P, Q, v)
        if key not in self._X:
            F = self.F
            n = self.M[Q] + 1
            if v == 0:
                out = np.zeros(n, dtype=np.int64)
                out[0] = 1
            elif v == 1:
                if P is INF:
                    base = [Q, 1]
                elif Q is INF:
                    base = [0] + [F.pow(P, i) for i in range(n - 1)]
                else:
                    delta = F.sub(Q, P)
                    inv = F.inv(delta)
                    base = [F.mul(F.pow(F.neg(inv), i), inv) for i in range(n)]
                out = np.zeros(n, dtype=np.int64)
                base = base[:n]
                out[: len(base)] = base
            else:
                out = self._mul(self._xpow(P, Q, v - 1), self._xpow(P, Q, 1), n)
            self._X[key] = out
        return self._X[key]

    def image_terms(self, b: BasisElement) -> dict:
        """{(Q, j, c, w): coeff} for C(b) in PF form."""
        F, p = self.F, self.p
        P, v = b.point, b.v
        out: dict = {}

        def emit(Q, jc, w, coef):
            if coef:
                k = (Q, jc[0], jc[1], w)
                out[k] = F.add(out.get(k, 0), F.pth_root(int(coef)))

        shape = (b.a2, b.a1)
        for jc in self.tables[shape]:
            for Q in self.pts:
                arr = self._window(shape, jc, Q)
                M = self.M[Q]
                if Q == P:
                    if Q is INF:
                        # coefficient of s^e times x^v sits at x^(v-e)
                        for e in range(-M, min(v, self.T[Q] - 1) + 1):
                            m = v - e
                            if m % p == p - 1:
                                emit(Q, jc, (m + 1) // p - 1, arr[e + M])
                    else:
                        for e in range(-M, min(v - 1, self.T[Q] - 1) + 1):
                            J = v - e
                            if J % p == 1:
                                emit(Q, jc, (J - 1) // p + 1, arr[e + M])
                    continue
                if M == 0 and Q is not INF:
                    continue
                X = self._xpow(P, Q, v)
                if Q is INF:
                    prod = self._mul(arr[: M + 1], X, M + 1)
                    for i in range(M + 1):
                        m = M - i
                        if m % p == p - 1:
                            emit(Q, jc, (m + 1) // p - 1, prod[i])
                else:
                    prod = self._mul(arr[:M], X[:M], M)
                    for i in range(M):
                        J = M - i
                        if J % p == 1:
                            emit(Q, jc, (J - 1) // p + 1, prod[i])
        return {k: c for k, c in out.items() if c}

    def row(self, b: BasisElement) -> list[int]:
        vec = [0] * len(self.basis)
        for k, coef in self.image_terms(b).items():
            i = self.index.get(k)
            if i is None:
                raise NotRegularImage(f"C({b.label(self.F)}) has term {k} outside the basis")
            vec[i] = coef
        return vec


def cartier_manin(c: CoverSpec, basis: Sequence[BasisElement] | None = None,
                  method: str = "frame") -> CMMatrix:
    """Matrix of C on the basis; ``method='generic'`` uses exact RatFunc arithmetic."""
    if basis is None:
        basis = enumerate_basis(c)
    check_regular(c, basis)
    F = c.field
    if method == "frame":
        fr = _Frame(c, basis)
        rows = [fr.row(b) for b in basis]
    elif method == "generic":
        idx = basis_index(basis)
        rows = []
        for b in basis:
            vec, rest = coordinates(cartier_diff(DiffNF.from_basis(b, F), c), basis, idx)
            if rest:
                raise NotRegularImage(f"C({b.label(F)}) is not in the span of the basis")
            rows.append(vec)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CMMatrix(F, list(basis), rows)


# --- power-series oracle ----------------------------------------------------

def _embedding(F: FieldDesc, m: int):
    big = make_field(F.p, F.k * m)
    if F.k == 1:
        return big, (lambda a: a)
    step = (big.q - 1) // (F.q - 1)
    mod = F.modulus
    z = None
    for j in range(F.q - 1):
        cand = big.pow(big.generator, step * j)
        acc = 0
        for co in reversed(mod):
            acc = big.add(big.mul(acc, cand), big.scalar(co))
        if acc == 0:
            z = cand
            break
    if z is None:  # pragma: no cover - cannot happen for irreducible moduli
        raise RuntimeError("no root of the modulus in the extension")
    zp = [big.pow(z, i) for i in range(F.k)]

    def emb(a: int) -> int:
        out = 0
        for ci, w in zip(F.coeffs(a), zp):
            if ci:
                out = big.add(out, big.mul(big.scalar(ci), w))
        return out

    return big, emb


def _map_ratfunc(r: RatFunc, big: FieldDesc, emb) -> RatFunc:
    return RatFunc.from_terms(big, [(P if P is INF else emb(P), o, emb(c)) for P, o, c in r.terms()])


def extend_scalars(c: CoverSpec, m: int):
    """(cover over F_{q^m}, embedding of F_q)."""
    big, emb = _embedding(c.field, m)
    f = _map_ratfunc(c.f, big, emb)
    h = _map_ratfunc(c.h, big, emb)
    return CoverSpec(f, h if c.n == 2 else None, c.n), emb


def _map_diff(omega: Mapping[tuple, RatFunc], big: FieldDesc, emb) -> DiffNF:
    return DiffNF({k: _map_ratfunc(r, big, emb) for k, r in omega.items()})


def _eval_g(F: FieldDesc, y: int) -> int:
    out = 0
    for e, co in g1_poly(F.p).items():
        out = F.add(out, F.mul(F.scalar(co), F.pow(y, e)))
    return out


def _center_roots(c: CoverSpec, a: int):
    F = c.field
    if any(P is not INF and P == a for P in c.B2):
        return None
    fa = c.f.evaluate(a)
    if F.trace(fa):
        return None
    ha = c.h.evaluate(a)
    for y1 in F.roots_of_artin_schreier(fa):
        if c.n == 1:
            return y1, 0
        t = F.add(_eval_g(F, y1), ha)
        if F.trace(t) == 0:
            return y1, F.solve_artin_schreier(t)
    return None


def find_center(c: CoverSpec, max_degree: int = 6):
    """(cover, embedding, center, y1(center), y2(center)), extending scalars if needed."""
    for m in range(1, max_degree // c.field.k + 1):
        cc, emb = (c, (lambda a: a)) if m == 1 else extend_scalars(c, m)
        for a in cc.field.elements():
            roots = _center_roots(cc, a)
            if roots:
                return cc, emb, a, roots[0], roots[1]
    raise NoASRoot("no unramified rational center in any extension tried")


def _frob_series(F: FieldDesc, s: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, a in enumerate(s):
        if F.p * i >= n:
            break
        out[F.p * i] = F.frob(a)
    return out


def _lift(F: FieldDesc, seed: int, rhs: Sequence[int], n: int) -> list[int]:
    """Series y with y^p - y = rhs and y(0) = seed."""
    y = [seed] + [0] * (n - 1)
    prec = 1
    while True:
        fy = _frob_series(F, y, n)
        nxt = [F.sub(a, b) for a, b in zip(fy, rhs)]
        if nxt == y and prec >= n:
            return y
        y = nxt
        prec *= F.p


def _local_series(c: CoverSpec, center: int, y1c: int, y2c: int, n: int):
    F, p = c.field, c.p
    if c.f.pole_order(center) or c.h.pole_order(center):
        raise BadCenter("center is a branch point")
    fs = c.f.laurent_expand(center, n)
    if F.sub(F.frob(y1c), y1c) != fs[0]:
        raise NoASRoot("y1 seed does not solve y^p - y = f(center)")
    Y1 = _lift(F, y1c, fs, n)
    if c.n == 1:
        return Y1, None
    hs = c.h.laurent_expand(center, n)
    gs = [0] * n
    pw = [1] + [0] * (n - 1)
    powers = {0: pw}
    top = max(g1_poly(p))
    for e in range(1, top + 1):
        powers[e] = series_mul(F, powers[e - 1], Y1, n)
    for e, co in g1_poly(p).items():
        gs = [F.add(a, F.mul(F.scalar(co), b)) for a, b in zip(gs, powers[e])]
    rhs = [F.add(a, b) for a, b in zip(gs, hs)]
    if F.sub(F.frob(y2c), y2c) != rhs[0]:
        raise NoASRoot("y2 seed does not solve the second equation at the center")
    Y2 = _lift(F, y2c, rhs, n)
    return Y1, Y2


def series_oracle(c: CoverSpec, omega: Mapping[tuple, RatFunc], center: int, N: int,
                  y1c: int | None = None, y2c: int | None = None) -> list[int]:
    """First N coefficients of omega / dt in t = x - center on a chosen branch."""
    F = c.field
    if y1c is None or y2c is None:
        roots = _center_roots(c, center)
        if roots is None:
            raise NoASRoot("center has no rational point of Y_2 above it")
        y1c, y2c = roots
    Y1, Y2 = _local_series(c, center, y1c, y2c, N)
    one = [1] + [0] * (N - 1)
    p1 = {0: one}
    p2 = {0: one}
    out = [0] * N
    for (a2, a1), r in omega.items():
        for e in range(1, a1 + 1):
            p1.setdefault(e, series_mul(F, p1[e - 1], Y1, N))
        for e in range(1, a2 + 1):
            p2.setdefault(e, series_mul(F, p2[e - 1], Y2, N))
        term = series_mul(F, p2[a2], p1[a1], N)
        term = series_mul(F, term, r.laurent_expand(center, N), N)
        out = [F.add(u, w) for u, w in zip(out, term)]
    return out


def oracle_check(c: CoverSpec, omega: Mapping[tuple, RatFunc],
                 image: Mapping[tuple, RatFunc], N: int) -> bool:
    """Compare the decimated series of omega with the series of the claimed C(omega)."""
    cc, emb, a, y1c, y2c = find_center(c)
    F, p = cc.field, cc.p
    if cc is not c:
        omega = _map_diff(omega, F, emb)
        image = _map_diff(image, F, emb)
    big = series_oracle(cc, omega, a, p * (N + 1), y1c, y2c)
    dec = [F.pth_root(big[p * i + p - 1]) for i in range(N)]
    return dec == series_oracle(cc, image, a, N, y1c, y2c)
