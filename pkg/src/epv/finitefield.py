"""Finite fields GF(p^e) for the small orders used by the plane constructions.

Elements are residues of polynomials over GF(p) modulo a fixed monic
irreducible polynomial.  Coefficient tuples are stored least-degree first.
Each element also has an integer code ``sum(c_i * p**i)`` in ``[0, q)``,
which the geometry code uses to index precomputed operation tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BadArgs, DivisionByZero, NotPrimePower

Poly = tuple[int, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def is_prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``n == p**e`` and p prime, or None."""
    if n < 2:
        return None
    p = next(d for d in itertools.count(2) if n % d == 0)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return (p, e) if n == 1 else None


def smallest_prime_power_at_least(k: int) -> tuple[int, int]:
    """Least prime power ``q >= k`` and the offset ``ell = q - k``."""
    if k < 2:
        raise BadArgs(f"k must be >= 2, got {k}")
    q = k
    while is_prime_power(q) is None:
        q += 1
    return q, q - k


# -- polynomials over GF(p), least-degree first -----------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Poly, m: Poly, p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    r = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(r) - 1 >= dm:
        c = r[-1]
        shift = len(r) - 1 - dm
        for i, mc in enumerate(m):
            r[shift + i] = (r[shift + i] - c * mc) % p
        _trim(r)
    return r


def _monic_polys(p: int, d: int):
    for low in itertools.product(range(p), repeat=d):
        yield tuple(low) + (1,)


def is_irreducible(poly: Poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1 or poly[-1] != 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(poly, f, p):
                return False
    return True


@lru_cache(maxsize=None)
def _smallest_irreducible(p: int, e: int) -> Poly:
    for cand in _monic_polys(p, e):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {e} over GF({p})")


# -- field objects -----------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    coefficients: Poly

    def code(self, p: int) -> int:
        return sum(c * p**i for i, c in enumerate(self.coefficients))


@dataclass(frozen=True)
class FieldSpec:
    p: int
    e: int
    q: int
    modulus: Poly

    def element(self, value: int | Poly) -> FieldElement:
        """Build an element from its integer code or a coefficient sequence."""
        if isinstance(value, int):
            if not 0 <= value < self.q:
                raise BadArgs(f"code {value} out of range for GF({self.q})")
            coeffs = []
            for _ in range(self.e):
                value, c = divmod(value, self.p)
                coeffs.append(c)
            return FieldElement(tuple(coeffs))
        coeffs = [c % self.p for c in value]
        if len(coeffs) > self.e:
            coeffs = _poly_mod(tuple(coeffs), self.modulus, self.p)
        coeffs += [0] * (self.e - len(coeffs))
        return FieldElement(tuple(coeffs))

    def elements(self) -> list[FieldElement]:
        return [self.element(i) for i in range(self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement((0,) * self.e)

    @property
    def one(self) -> FieldElement:
        return FieldElement((1,) + (0,) * (self.e - 1))

    def _check(self, a: FieldElement) -> None:
        if len(a.coefficients) != self.e or any(not 0 <= c < self.p for c in a.coefficients):
            raise BadArgs(f"{a} is not an element of GF({self.q})")

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a)
        self._check(b)
        return FieldElement(tuple((x + y) % self.p for x, y in zip(a.coefficients, b.coefficients)))

    def neg(self, a: FieldElement) -> FieldElement:
        self._check(a)
        return FieldElement(tuple(-x % self.p for x in a.coefficients))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a)
        self._check(b)
        if self.e == 1:
            return FieldElement(((a.coefficients[0] * b.coefficients[0]) % self.p,))
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(a.coefficients):
            if x:
                for j, y in enumerate(b.coefficients):
                    prod[i + j] += x * y
        return self.element(_poly_mod(tuple(prod), self.modulus, self.p))

    def inv(self, a: FieldElement) -> FieldElement:
        self._check(a)
        if not any(a.coefficients):
            raise DivisionByZero(f"inverse of zero in GF({self.q})")
        if self.e == 1:
            return FieldElement((pow(a.coefficients[0], -1, self.p),))
        # a^(q-2) by square-and-multiply
        result, base, n = self.one, a, self.q - 2
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result


def field_create(q: int) -> FieldSpec:
    pe = is_prime_power(q)
    if pe is None:
        raise NotPrimePower(f"{q} is not a prime power")
    p, e = pe
    return FieldSpec(p=p, e=e, q=q, modulus=_smallest_irreducible(p, e))


def field_arith(spec: FieldSpec, op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    """Dispatch ``op`` in {add, mul, neg, inv}; unary ops ignore ``b``."""
    if op == "add":
        return spec.add(a, b)
    if op == "mul":
        return spec.mul(a, b)
    if op == "neg":
        return spec.neg(a)
    if op == "inv":
        return spec.inv(a)
    raise BadArgs(f"unknown field operation {op!r}")


@dataclass(frozen=True)
class FieldTables:
    """Operation tables over integer codes, shape ``(q, q)`` / ``(q,)``.

    ``inv[0]`` is -1.
    """

    q: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray


@lru_cache(maxsize=None)
def field_tables(q: int) -> FieldTables:
    spec = field_create(q)
    els = spec.elements()
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            add[i, j] = spec.add(a, b).code(spec.p)
            mul[i, j] = spec.mul(a, b).code(spec.p)
    neg = np.array([spec.neg(a).code(spec.p) for a in els], dtype=np.int64)
    inv = np.array([-1] + [spec.inv(a).code(spec.p) for a in els[1:]], dtype=np.int64)
    for t in (add, mul, neg, inv):
        t.setflags(write=False)
    return FieldTables(q, add, mul, neg, inv)
