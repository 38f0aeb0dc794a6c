"""Finite fields F_q = F_l[u]/(h), used as residue fields.

Polynomials over F_l follow the library convention: coefficient lists from
the constant term upward.  Irreducibility and factorization are delegated to
sympy's ``galoistools`` (which uses the opposite ordering internally).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_irreducible_p


def _to_sympy(coeffs: Sequence[int], p: int) -> list:
    out = [ZZ(c % p) for c in reversed(coeffs)]
    while out and out[0] == 0:
        out.pop(0)
    return out


def _from_sympy(coeffs) -> list[int]:
    return [int(c) for c in reversed(coeffs)]


def is_irreducible_mod(coeffs: Sequence[int], p: int) -> bool:
    poly = _to_sympy(coeffs, p)
    if len(poly) <= 1:
        return False
    return bool(gf_irreducible_p(poly, p, ZZ))


def factor_mod(coeffs: Sequence[int], p: int) -> list[list[int]]:
    """Monic irreducible factors (with repetition) of a polynomial mod p, sorted."""
    _, factors = gf_factor(_to_sympy(coeffs, p), p, ZZ)
    out = []
    for fac, mult in factors:
        out.extend([_from_sympy(fac)] * mult)
    return sorted(out, key=lambda c: (len(c), list(reversed(c))))


def poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], m: int) -> list[int]:
    """Product of two polynomials modulo a monic polynomial and the integer m."""
    deg = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, deg - 1, -1):
        c = prod[k] % m
        if c:
            for t in range(deg + 1):
                prod[k - deg + t] -= c * mod[t]
    prod = [c % m for c in prod[:deg]]
    return prod + [0] * (deg - len(prod))


class FiniteField:
    """The field F_p[u]/(modpoly) with ``q = p**degree`` elements."""

    def __init__(self, p: int, modpoly: Sequence[int] = (0, 1)):
        self.p = p
        self.modpoly = tuple(c % p for c in modpoly)
        if self.modpoly[-1] != 1:
            raise ValueError("modulus must be monic")
        self.degree = len(self.modpoly) - 1
        if self.degree > 1 and not is_irreducible_mod(self.modpoly, p):
            raise ValueError("modulus is reducible")
        self.q = p**self.degree

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modpoly) == (other.p, other.modpoly)

    def __hash__(self):
        return hash((self.p, self.modpoly))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def __call__(self, value) -> "FFElement":
        if isinstance(value, FFElement):
            return value
        if isinstance(value, int):
            return FFElement(self, (value % self.p,) + (0,) * (self.degree - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        coeffs = coeffs + (0,) * (self.degree - len(coeffs))
        return FFElement(self, coeffs[: self.degree])

    def zero(self) -> "FFElement":
        return self(0)

    def one(self) -> "FFElement":
        return self(1)

    def from_int(self, n: int) -> "FFElement":
        return self(n)

    def gen(self) -> "FFElement":
        if self.degree == 1:
            return self(-self.modpoly[0])
        return self((0, 1))

    def elements(self) -> Iterator["FFElement"]:
        for coeffs in itertools.product(range(self.p), repeat=self.degree):
            yield FFElement(self, tuple(reversed(coeffs)))

    def frobenius(self, x: "FFElement") -> "FFElement":
        return x**self.p


class FFElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _other(self, other) -> tuple:
        if isinstance(other, FFElement):
            return other.coeffs
        return self.field(other).coeffs

    def __add__(self, other):
        p = self.field.p
        return FFElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        p = self.field.p
        return FFElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, self._other(other))))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return FFElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        f = self.field
        b = self._other(other)
        if f.degree == 1:
            return FFElement(f, ((self.coeffs[0] * b[0]) % f.p,))
        return FFElement(f, tuple(poly_mulmod(self.coeffs, b, f.modpoly, f.p)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "FFElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in finite field")
        f = self.field
        if f.degree == 1:
            return FFElement(f, (pow(self.coeffs[0], -1, f.p),))
        return self ** (f.q - 2)

    def __truediv__(self, other):
        return self * self.field(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == self.field(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def to_int(self) -> int:
        """Base-p encoding, constant coefficient least significant."""
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.coeffs[0])
        return "(" + "+".join(f"{c}u^{i}" for i, c in enumerate(self.coeffs) if c) + ")" if not self.is_zero() else "0"


@lru_cache(maxsize=None)
def prime_field(p: int) -> FiniteField:
    return FiniteField(p)
