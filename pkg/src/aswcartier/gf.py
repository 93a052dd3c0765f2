"""Finite fields F_{p^k} for odd p.

Elements are plain Python ints in ``range(q)``: the element
``c_0 + c_1 t + ... + c_{k-1} t^{k-1}`` is encoded as ``sum(c_i * p**i)``.
In the prime field this is just the residue.  All arithmetic goes through a
:class:`FieldDesc`, which owns exponent/logarithm tables built once per
``(p, modulus)`` and is immutable afterwards.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CANONICAL_MODULI",
    "DivisionByZero",
    "FieldDesc",
    "GFError",
    "NoSolution",
    "NotIrreducible",
    "NotMonic",
    "NotPrime",
    "make_field",
]


class GFError(ValueError):
    code = "field_error"


class NotPrime(GFError):
    code = "not_prime"


class NotMonic(GFError):
    code = "not_monic"


class NotIrreducible(GFError):
    code = "not_irreducible"


class NoSolution(GFError):
    code = "no_solution"


class DivisionByZero(ZeroDivisionError):
    code = "division_by_zero"


# Least primitive monic modulus (coefficients of t^0..t^k, constant term
# first, ordered by the integer sum c_i p^i of the low coefficients).
# Degree 1 uses t itself: F_p needs no reduction.
CANONICAL_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 1): (0, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 1): (0, 1),
    (5, 2): (2, 1, 1),
    (5, 3): (2, 3, 0, 1),
    (5, 4): (2, 2, 1, 0, 1),
    (5, 5): (2, 4, 0, 0, 0, 1),
    (5, 6): (2, 1, 0, 0, 0, 0, 1),
    (7, 1): (0, 1),
    (7, 2): (3, 1, 1),
    (7, 3): (2, 3, 0, 1),
    (7, 4): (5, 3, 1, 0, 1),
    (7, 5): (4, 1, 0, 0, 0, 1),
    (7, 6): (5, 1, 3, 0, 0, 0, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- dense polynomials over Z/p, lists with constant term first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _zp_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _zp_mulmod(a, b, m, p) -> list[int]:
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] += x * y
    return _zp_mod(res, m, p)


def _zp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _zp_mod(a, b, p)
    return a


def _zp_is_irreducible(m: Sequence[int], p: int) -> bool:
    """Ben-Or test: no factor of degree <= k/2 divides m."""
    k = len(m) - 1
    if k == 1:
        return True
    t = [0, 1]
    power = t[:]
    for _ in range(1, k // 2 + 1):
        # power <- power^p mod m
        r, base, e = [1], power, p
        while e:
            if e & 1:
                r = _zp_mulmod(r, base, m, p)
            base = _zp_mulmod(base, base, m, p)
            e >>= 1
        power = r
        diff = power + [0] * max(0, 2 - len(power))
        diff[1] -= 1
        if len(_zp_gcd(list(m), diff, p)) > 1:
            return False
    return True


class FieldDesc:
    """The finite field F_p[t]/(modulus).

    Construct through :func:`make_field`, which validates the input and
    caches descriptors, so two calls with the same arguments return the same
    object.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p**k
        self._pow_p = [p**i for i in range(k)]
        self._build_tables()

    # -- construction -------------------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        da, db = self.coeffs(a), self.coeffs(b)
        return self.from_coeffs(_zp_mulmod(da, db, self.modulus, self.p))

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        if self.k == 1:
            g = next(x for x in range(1, p) if all(
                pow(x, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)))
        else:
            g = None
            for cand in range(2, q):
                ok = True
                for r in _prime_factors(q - 1):
                    if self._raw_pow(cand, (q - 1) // r) == 1:
                        ok = False
                        break
                if ok:
                    g = cand
                    break
        self.generator = g
        n = q - 1
        exp = [0] * (2 * n)
        log = [0] * q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = (x * g) % p if self.k == 1 else self._raw_mul(x, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log
        digits = np.zeros((q, self.k), dtype=np.int64)
        for a in range(q):
            digits[a] = self.coeffs(a)
        self._digits = digits
        self._weights = np.array(self._pow_p, dtype=np.int64)
        # x -> x^p and its inverse x -> x^(p^(k-1))
        frob = [0] * q
        for a in range(1, q):
            frob[a] = exp[(log[a] * p) % n]
        self._frob = frob
        root = [0] * q
        for a in range(q):
            root[frob[a]] = a
        self._root = root
        if self.k == 1:
            self._neg = [(-a) % p for a in range(q)]
        else:
            self._neg = [self.from_coeffs([(-c) % p for c in self.coeffs(a)])
                         for a in range(q)]
            # Zech logarithms: g^zech[i] = 1 + g^i (None when 1 + g^i = 0)
            zech: list[int | None] = [None] * n
            for i in range(n):
                s = self._raw_add(exp[i], 1)
                zech[i] = None if s == 0 else log[s]
            self._zech = zech
        self._np_exp = np.array(exp + [0], dtype=np.int64)
        self._np_log = np.array(log, dtype=np.int64)

    def _raw_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    def _raw_add(self, a: int, b: int) -> int:
        p = self.p
        out, w = 0, 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    # -- representation -----------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        """Coefficient vector (t^0 first) of an element."""
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, c: Iterable[int]) -> int:
        c = list(c)
        if len(c) > self.k:
            c = _zp_mod(c, self.modulus, self.p)
        return sum((x % self.p) * w for x, w in zip(c, self._pow_p))

    def __call__(self, value) -> int:
        """Coerce an int (image of Z) or a coefficient list into the field."""
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        return int(value) % self.p

    def elements(self) -> range:
        return range(self.q)

    def is_prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        if self.k == 1:
            return f"FieldDesc(F_{self.p})"
        return f"FieldDesc(F_{self.p}^{self.k}, modulus={list(self.modulus)})"

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def elem_to_json(self, a: int) -> list[int]:
        return self.coeffs(a)

    def elem_from_json(self, c) -> int:
        if isinstance(c, int):
            return self(c)
        if len(c) != self.k or any(not 0 <= x < self.p for x in c):
            raise GFError(f"bad field element {c!r} for {self!r}")
        return self.from_coeffs(c)

    def format(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        return "[" + ",".join(map(str, self.coeffs(a))) + "]"

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        if z is None:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero in " + repr(self))
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def scalar(self, n: int) -> int:
        """Image of the integer n."""
        return n % self.p

    def frob(self, a: int) -> int:
        """a -> a^p."""
        return self._frob[a]

    def pth_root(self, a: int) -> int:
        """Inverse Frobenius, a -> a^(p^(k-1))."""
        return self._root[a]

    def trace(self, a: int) -> int:
        """Absolute trace to F_p; returned as an element of the prime field."""
        t, x = 0, a
        for _ in range(self.k):
            t = self.add(t, x)
            x = self._frob[x]
        return t

    def solve_artin_schreier(self, c: int) -> int:
        """Least y (by integer code) with y^p - y = c.

        Raises :class:`NoSolution` when the trace of c is non-zero.
        """
        if self.trace(c) != 0:
            raise NoSolution(f"y^p - y = {self.format(c)} has no root in {self!r}")
        for y in range(self.q):
            if self.sub(self._frob[y], y) == c:
                return y
        raise AssertionError("trace-zero element without Artin-Schreier root")

    def roots_of_artin_schreier(self, c: int) -> list[int]:
        return [y for y in range(self.q) if self.sub(self._frob[y], y) == c]

    # -- vectorised helpers (numpy arrays of element codes) -----------------

    def to_digits(self, codes) -> np.ndarray:
        return self._digits[np.asarray(codes, dtype=np.int64)]

    def from_digits(self, digits: np.ndarray) -> np.ndarray:
        return (digits % self.p) @ self._weights

    def vec_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a + b) % self.p
        return self.from_digits(self._digits[a] + self._digits[b])

    def vec_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a - b) % self.p
        return self.from_digits(self._digits[a] - self._digits[b])

    def vec_scale(self, c: int, v: np.ndarray) -> np.ndarray:
        if c == 0:
            return np.zeros_like(v)
        if self.k == 1:
            return (v * c) % self.p
        out = self._np_exp[self._np_log[v] + self._log[c]]
        return np.where(v == 0, 0, out)

    def vec_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a * b) % self.p
        out = self._np_exp[self._np_log[a] + self._np_log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    # -- polynomial multiplication over F_q ---------------------------------

    def poly_mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        """Product of dense coefficient sequences (constant term first).

        Inputs are assumed trimmed; the output is trimmed.
        """
        if not a or not b:
            return ()
        if len(a) * len(b) <= 64:
            return self._poly_mul_school(a, b)
        if self.k == 1:
            A = np.asarray(a, dtype=np.int64)
            B = np.asarray(b, dtype=np.int64)
            if len(a) * (self.p - 1) ** 2 < 2**62 // max(len(b), 1):
                c = np.convolve(A, B) % self.p
            else:  # pragma: no cover - only for absurd sizes
                return self._poly_mul_school(a, b)
            out = c.tolist()
        else:
            out = self._poly_mul_digits(a, b)
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def _poly_mul_school(self, a, b) -> tuple[int, ...]:
        res = [0] * (len(a) + len(b) - 1)
        if self.k == 1:
            p = self.p
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        res[i + j] += x * y
            res = [c % p for c in res]
        else:
            exp, log, add = self._exp, self._log, self.add
            lb = [(j, log[y]) for j, y in enumerate(b) if y]
            for i, x in enumerate(a):
                if x:
                    lx = log[x]
                    for j, ly in lb:
                        res[i + j] = add(res[i + j], exp[lx + ly])
        while res and res[-1] == 0:
            res.pop()
        return tuple(res)

    def _poly_mul_digits(self, a, b) -> list[int]:
        k, p = self.k, self.p
        A = self._digits[np.asarray(a, dtype=np.int64)]
        B = self._digits[np.asarray(b, dtype=np.int64)]
        n = len(a) + len(b) - 1
        acc = np.zeros((n, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                acc[:, i + j] += np.convolve(A[:, i], B[:, j])
        acc %= p
        m = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            col = acc[:, d].copy()
            if not col.any():
                continue
            for s in range(k):
                if m[s]:
                    acc[:, d - k + s] -= col * m[s]
            acc[:, d] = 0
        return ((acc[:, :k] % p) @ self._weights).tolist()

    # -- sampling -----------------------------------------------------------

    def random_element(self, rng, nonzero: bool = False) -> int:
        if nonzero:
            return int(rng.integers(1, self.q))
        return int(rng.integers(0, self.q))


@lru_cache(maxsize=None)
def _make_field(p: int, k: int, modulus: tuple[int, ...]) -> FieldDesc:
    return FieldDesc(p, k, modulus)


def make_field(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldDesc:
    """Validated field descriptor for F_{p^k}.

    ``modulus`` lists the coefficients of t^0..t^k.  When omitted the
    canonical modulus from :data:`CANONICAL_MODULI` is used (or, outside that
    table, the least primitive monic polynomial of degree k).
    """
    if not isinstance(p, int) or not _is_prime(p) or p == 2:
        raise NotPrime(f"p={p!r} is not an odd prime")
    if k < 1:
        raise GFError(f"extension degree must be >= 1, got {k}")
    if modulus is None:
        modulus = CANONICAL_MODULI.get((p, k)) or _least_primitive(p, k)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != k + 1:
        raise GFError(f"modulus must have {k + 1} coefficients, got {len(modulus)}")
    if modulus[-1] != 1:
        raise NotMonic(f"modulus {list(modulus)} is not monic")
    if not _zp_is_irreducible(modulus, p):
        raise NotIrreducible(f"modulus {list(modulus)} is reducible over F_{p}")
    return _make_field(p, k, modulus)


def _least_primitive(p: int, k: int) -> tuple[int, ...]:
    q = p**k
    for code in range(1, p**k):
        low = [(code // p**i) % p for i in range(k)]
        m = tuple(low + [1])
        if m[0] == 0 or not _zp_is_irreducible(m, p):
            continue
        F = _make_field(p, k, m)
        # t is the element with code p (k > 1)
        t = p if k > 1 else (-m[0]) % p
        if all(F.pow(t, (q - 1) // r) != 1 for r in _prime_factors(q - 1)):
            return m
    raise AssertionError("no primitive polynomial found")
