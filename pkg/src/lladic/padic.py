"""Fixed-precision l-adic integers.

A :class:`PadicInt` is a residue modulo ``prime**precision``.  A residue of
zero carries no valuation information; asking for its exact valuation raises
:class:`~lladic.errors.PrecisionExhausted` instead of returning ``precision``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .config import default_precision
from .errors import NoSimpleRoot, NotAUnit, PrecisionExhausted


def vl(n: int, prime: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise PrecisionExhausted("valuation of 0")
    v = 0
    while n % prime == 0:
        n //= prime
        v += 1
    return v


@dataclass(frozen=True)
class PadicInt:
    residue: int
    prime: int
    precision: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @classmethod
    def of(cls, value: int, prime: int, precision: int | None = None) -> "PadicInt":
        return cls(value, prime, precision or default_precision())

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def _coerce(self, other) -> int:
        if isinstance(other, PadicInt):
            if other.prime != self.prime:
                raise ValueError("mixing primes")
            return other.residue
        return int(other)

    def _new(self, r: int) -> "PadicInt":
        return PadicInt(r, self.prime, self.precision)

    def __add__(self, other):
        return self._new(self.residue + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self.residue - self._coerce(other))

    def __rsub__(self, other):
        return self._new(self._coerce(other) - self.residue)

    def __mul__(self, other):
        return self._new(self.residue * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.residue)

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        return self._new(pow(self.residue, k, self.modulus))

    def __eq__(self, other):
        if isinstance(other, PadicInt):
            return self.prime == other.prime and (self.residue - other.residue) % min(self.modulus, other.modulus) == 0
        if isinstance(other, int):
            return (self.residue - other) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.prime, self.precision))

    def __int__(self):
        return self.residue

    def is_zero(self) -> bool:
        return self.residue == 0

    def __repr__(self):
        return f"PadicInt({self.residue} mod {self.prime}^{self.precision})"


def val(x: PadicInt, exact: bool = True) -> int:
    """Largest ``v <= precision`` with ``prime**v`` dividing the residue.

    With ``exact=False`` a zero residue returns ``precision`` (a lower bound).
    """
    if x.residue == 0:
        if exact:
            raise PrecisionExhausted(f"residue is 0 mod {x.prime}^{x.precision}")
        return x.precision
    return vl(x.residue, x.prime)


def invert(x: PadicInt) -> PadicInt:
    if x.residue == 0:
        raise PrecisionExhausted("cannot invert zero")
    if x.residue % x.prime == 0:
        raise NotAUnit(f"{x.residue} is divisible by {x.prime}")
    return x._new(pow(x.residue, -1, x.modulus))


def poly_eval(coeffs: Sequence[int], x: int, modulus: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % modulus
    return acc


def poly_deriv(coeffs: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_root(f: Sequence[int], x0: int | PadicInt, prime: int | None = None, precision: int | None = None) -> PadicInt:
    """Lift a simple root of ``f`` modulo ``prime`` to precision ``prime**precision``.

    ``f`` lists integer coefficients from the constant term upward.
    """
    if isinstance(x0, PadicInt):
        prime = prime or x0.prime
        precision = precision or x0.precision
        x0 = x0.residue
    if prime is None:
        raise ValueError("prime required")
    precision = precision or default_precision()
    modulus = prime**precision
    df = poly_deriv(f)
    if poly_eval(f, x0, prime) != 0:
        raise NoSimpleRoot(f"{x0} is not a root of f modulo {prime}")
    if poly_eval(df, x0, prime) == 0:
        raise NoSimpleRoot(f"f'({x0}) is divisible by {prime}")
    x = x0 % prime
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        mod_k = prime**k
        fx = poly_eval(f, x, mod_k)
        dfx = poly_eval(df, x, mod_k)
        x = (x - fx * pow(dfx, -1, mod_k)) % mod_k
    assert poly_eval(f, x, modulus) == 0
    return PadicInt(x, prime, precision)
