"""Local rings over Z_l as a two-layer tower.

``O = U[pi]/(g)`` where ``U = Z_l[u]/(h_u)`` is unramified of degree ``f`` and
``g`` is Eisenstein of degree ``e`` over ``U``.  Elements are stored with
capped relative precision: ``value = pi**shift * sum c[b*f + a] u^a pi^b`` with
integer coordinates modulo ``l**N``.  Coordinates are kept normalized so that
they are not all divisible by ``l``; this keeps ``shift`` close to the true
valuation and lets the same element type represent the fraction field ``K``.

Rings with ``e == 1`` carry no Eisenstein layer and use ``pi = l``.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache
from typing import Sequence

from sympy import cyclotomic_poly, symbols, Poly

from .config import default_precision
from .errors import BadSpec, NoConjugation, NotAUnit, PrecisionExhausted
from .ff import FiniteField, FFElement, factor_mod, is_irreducible_mod, poly_mulmod, prime_field
from .padic import hensel_root

INF = math.inf


def cyclotomic_coeffs(n: int) -> list[int]:
    x = symbols("x")
    return [int(c) for c in reversed(Poly(cyclotomic_poly(n, x), x).all_coeffs())]


def _vl_int(c: int, prime: int, cap: int) -> int:
    if c == 0:
        return cap
    v = 0
    while c % prime == 0 and v < cap:
        c //= prime
        v += 1
    return v


class RingDescriptor:
    """A finite-precision model of O_K with its fraction field K."""

    def __init__(
        self,
        prime: int,
        precision: int,
        unram_poly: Sequence[int],
        eis_poly: Sequence[Sequence[int]] | None = None,
        *,
        kind: str = "custom",
        name: str | None = None,
        base: "RingDescriptor | None" = None,
    ):
        self.prime = prime
        self.precision = precision
        self.modulus = prime**precision
        self.guard = max(2, precision // 4)
        self.unram_poly = tuple(int(c) % self.modulus for c in unram_poly)
        if self.unram_poly[-1] != 1:
            raise BadSpec("unramified polynomial must be monic")
        self.f = len(self.unram_poly) - 1
        if self.f < 1:
            raise BadSpec("unramified polynomial must have positive degree")
        if not is_irreducible_mod(self.unram_poly, prime):
            raise BadSpec(f"{list(unram_poly)} is reducible mod {prime}")
        if eis_poly is None:
            self.eis_poly = None
            self.e = 1
        else:
            coeffs = [self._ucoords(c) for c in eis_poly]
            if coeffs[-1] != self._ucoords([1]):
                raise BadSpec("Eisenstein polynomial must be monic")
            self.e = len(coeffs) - 1
            if self.e < 1:
                raise BadSpec("Eisenstein polynomial must have positive degree")
            vals = [min(_vl_int(c, prime, precision) for c in co) for co in coeffs[:-1]]
            if vals[0] != 1 or any(v < 1 for v in vals[1:]):
                raise BadSpec(f"polynomial is not Eisenstein over U (coefficient valuations {vals})")
            self.eis_poly = tuple(coeffs)
        self.d = self.f * self.e
        self.kind = kind
        self.name = name or f"{kind}({prime})"
        self.base = base
        self.spec: str | None = None
        self.generators: dict[str, RingElement] = {}
        self.uniformizer: RingElement | None = None
        self._conj_images = None
        self._conj_pi_ratio = None
        self._build_tables()

    # ------------------------------------------------------------------ U layer
    def _ucoords(self, c: Sequence[int]) -> tuple[int, ...]:
        c = [int(x) % self.modulus for x in c]
        c = c + [0] * (self.f - len(c))
        if len(c) > self.f:
            c = poly_mulmod(c, [1], self.unram_poly, self.modulus)
        return tuple(c)

    def _umul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        if self.f == 1:
            return ((a[0] * b[0]) % self.modulus,)
        return tuple(poly_mulmod(a, b, self.unram_poly, self.modulus))

    # --------------------------------------------------------------- tables
    def _build_tables(self):
        f, e, M = self.f, self.e, self.modulus
        zero_u = (0,) * f
        # pi^k as lists of U-blocks, k < 2e - 1
        pi_pows = []
        for k in range(2 * e - 1):
            if k < e:
                blocks = [zero_u] * e
                blocks[k] = self._ucoords([1])
            else:
                prev = pi_pows[k - 1]
                top = prev[e - 1]
                blocks = [zero_u] + list(prev[: e - 1])
                for j in range(e):
                    prod = self._umul(top, self.eis_poly[j])
                    blocks[j] = tuple((x - y) % M for x, y in zip(blocks[j], prod))
            pi_pows.append(blocks)
        u_pows = [self._ucoords([0] * a + [1]) for a in range(2 * f - 1)]
        self._mul_table = {}
        for i in range(self.d):
            a1, b1 = i % f, i // f
            for j in range(self.d):
                a2, b2 = j % f, j // f
                up = u_pows[a1 + a2]
                blocks = pi_pows[b1 + b2]
                entries = []
                for b, blk in enumerate(blocks):
                    prod = self._umul(up, blk)
                    for a, c in enumerate(prod):
                        if c:
                            entries.append((b * f + a, c))
                self._mul_table[i, j] = entries
        # multiplication by pi on coordinates
        self._pi_coords = self._unit_vector(f) if e > 1 else None
        if e > 1:
            # pi^e = l * w with w a unit; nu = w^{-1} = l / pi^e
            pe = pi_pows[e] if e < len(pi_pows) else self._pi_e_blocks(pi_pows)
            flat = [c for blk in pe for c in blk]
            assert all(c % self.prime == 0 for c in flat)
            self._w_coords = tuple(c // self.prime for c in flat)
            self._nu_coords = self._unit_inverse_coords(self._w_coords)
            # 1/pi = R / l with R = -eps^{-1} (pi^{e-1} + g_{e-1} pi^{e-2} + ... + g_1)
            g0 = self.eis_poly[0]
            eps = tuple(c // self.prime for c in g0)
            eps_inv = self._unit_inverse_coords(eps + (0,) * (self.d - f))
            s = [0] * self.d
            for j in range(1, e + 1):
                gj = self.eis_poly[j]
                for a, c in enumerate(gj):
                    s[(j - 1) * f + a] += c
            s = tuple(x % M for x in s)
            r = self._mul_coords(s, eps_inv)
            self._pi_inv_num = tuple((-x) % M for x in r)
        else:
            self._w_coords = None
            self._nu_coords = None
            self._pi_inv_num = None
        self._trace_prime = [self._basis_trace(i) for i in range(self.d)]
        self._trace_u = [self._basis_trace_u(i) for i in range(self.d)]
        self._w_pows = {0: self._unit_vector(0)}

    def _pi_e_blocks(self, pi_pows):
        e, f, M = self.e, self.f, self.modulus
        zero_u = (0,) * f
        blocks = [zero_u] * e
        for j in range(e):
            blocks[j] = tuple((-c) % M for c in self.eis_poly[j])
        return blocks

    def _unit_vector(self, i: int) -> tuple[int, ...]:
        v = [0] * self.d
        v[i] = 1
        return tuple(v)

    def _mul_coords(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        M = self.modulus
        if self.d == 1:
            return ((x[0] * y[0]) % M,)
        out = [0] * self.d
        table = self._mul_table
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        p = xi * yj
                        for k, c in table[i, j]:
                            out[k] += p * c
        return tuple(c % M for c in out)

    def _residue_of_coords(self, x: Sequence[int]) -> FFElement:
        return self.residue_field(tuple(c % self.prime for c in x[: self.f]))

    def _unit_inverse_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        if self.d == 1:
            if x[0] % self.prime == 0:
                raise NotAUnit("not a unit")
            return (pow(x[0], -1, self.modulus),)
        r = self._residue_of_coords(x)
        if r.is_zero():
            raise NotAUnit("not a unit")
        y = tuple(r.inverse().coeffs) + (0,) * (self.d - self.f)
        two = [0] * self.d
        two[0] = 2
        for _ in range(2 + int(math.log2(self.precision * self.e + 1)) + 1):
            xy = self._mul_coords(x, y)
            t = tuple((a - b) % self.modulus for a, b in zip(two, xy))
            y_new = self._mul_coords(y, t)
            if y_new == y:
                break
            y = y_new
        check = self._mul_coords(x, y)
        assert check == self._unit_vector(0), "unit inversion failed to converge"
        return y

    def _mul_pi(self, x: Sequence[int]) -> tuple[int, ...]:
        if self.e == 1:
            return tuple((c * self.prime) % self.modulus for c in x)
        return self._mul_coords(x, self._pi_coords)

    def _div_pi(self, x: Sequence[int]) -> tuple[int, ...]:
        """Exact division of integral coordinates of positive valuation by pi."""
        if self.e == 1:
            if any(c % self.prime for c in x):
                raise ArithmeticError("coordinates not divisible by pi")
            return tuple(c // self.prime for c in x)
        t = self._mul_coords(x, self._pi_inv_num)
        if any(c % self.prime for c in t):
            raise ArithmeticError("coordinates not divisible by pi")
        return tuple(c // self.prime for c in t)

    def _w_pow(self, k: int) -> tuple[int, ...]:
        """Coordinates of w**k where pi**e = l * w (k may be negative)."""
        if k not in self._w_pows:
            base = self._w_coords if k > 0 else self._nu_coords
            acc = self._unit_vector(0)
            for _ in range(abs(k)):
                acc = self._mul_coords(acc, base)
            self._w_pows[k] = acc
        return self._w_pows[k]

    def _scale_pi_power(self, x: Sequence[int], k: int) -> tuple[int, ...]:
        """Coordinates of x * pi**k for k >= 0."""
        if k == 0:
            return tuple(x)
        if self.e == 1:
            m = pow(self.prime, k, self.modulus) if k < self.precision else 0
            return tuple((c * m) % self.modulus for c in x)
        q, r = divmod(k, self.e)
        if q:
            m = pow(self.prime, q, self.modulus) if q < self.precision else 0
            x = tuple((c * m) % self.modulus for c in x)
            if any(x):
                x = self._mul_coords(x, self._w_pow(q))
        for _ in range(r):
            x = self._mul_pi(x)
        return x

    def _coord_val(self, x: Sequence[int]) -> float:
        """Valuation of the coordinate vector (in pi units); INF if zero."""
        best = INF
        f, e, p = self.f, self.e, self.prime
        cap = self.precision
        for b in range(e):
            blk = x[b * f : (b + 1) * f]
            v = min(_vl_int(c, p, cap) for c in blk)
            if v < cap:
                best = min(best, e * v + b)
        return best

    def _basis_trace(self, i: int) -> int:
        tr = 0
        for j in range(self.d):
            for k, c in self._mul_table[i, j]:
                if k == j:
                    tr += c
        return tr % self.modulus

    def _basis_trace_u(self, i: int) -> tuple[int, ...]:
        f = self.f
        acc = [0] * f
        for b in range(self.e):
            j = b * f
            prod = [0] * self.d
            for k, c in self._mul_table[i, j]:
                prod[k] += c
            for a in range(f):
                acc[a] += prod[b * f + a]
        return tuple(c % self.modulus for c in acc)

    # --------------------------------------------------------------- public
    @property
    def residue_field(self) -> FiniteField:
        if not hasattr(self, "_residue_field"):
            if self.f == 1:
                self._residue_field = prime_field(self.prime)
            else:
                self._residue_field = FiniteField(self.prime, [c % self.prime for c in self.unram_poly])
        return self._residue_field

    @property
    def has_conj(self) -> bool:
        return self._conj_images is not None

    def element(self, coords: Sequence[int], shift: int = 0) -> "RingElement":
        coords = tuple(int(c) % self.modulus for c in coords)
        if len(coords) < self.d:
            coords = coords + (0,) * (self.d - len(coords))
        return RingElement._make(self, coords, shift)

    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.d, 0)

    def one(self) -> "RingElement":
        return RingElement(self, self._unit_vector(0), 0)

    def from_int(self, n: int) -> "RingElement":
        return self.element([n])

    def from_fraction(self, num: int, den: int) -> "RingElement":
        return self.from_int(num) / self.from_int(den)

    @property
    def pi(self) -> "RingElement":
        if self.e == 1:
            return RingElement(self, self._unit_vector(0), 1)
        return RingElement(self, self._pi_coords, 0)

    def pi_power(self, k: int) -> "RingElement":
        return RingElement._make(self, self.pi.coeffs, self.pi.shift) ** k if k else self.one()

    @property
    def u(self) -> "RingElement":
        if self.f == 1:
            return self.element([-self.unram_poly[0]])
        return self.element(self._unit_vector(1))

    def from_u_coords(self, coords: Sequence[int], shift_l: int = 0) -> "RingElement":
        """Element of U (given by u-coordinates) times l**shift_l."""
        x = self.element(self._ucoords(coords))
        if shift_l:
            x = x * self.from_int(self.prime) ** shift_l
        return x

    def lift(self, r: FFElement) -> "RingElement":
        return self.element(tuple(r.coeffs))

    def trace(self, x: "RingElement", over: str = "prime") -> "RingElement":
        return trace_to_base(x, over)

    def random_integral(self, rng: random.Random, digits: int | None = None) -> "RingElement":
        m = self.prime ** (digits or self.precision)
        return self.element([rng.randrange(m) for _ in range(self.d)])

    def random_unit(self, rng: random.Random) -> "RingElement":
        while True:
            x = self.random_integral(rng)
            if x.valuation() == 0:
                return x

    def _set_conj(self, u_image: "RingElement", pi_image: "RingElement"):
        f, e = self.f, self.e
        images = []
        for i in range(self.d):
            a, b = i % f, i // f
            images.append(u_image**a * pi_image**b)
        self._conj_images = images
        self._conj_pi_ratio = pi_image / self.pi

    def describe(self) -> dict:
        return {
            "name": self.name,
            "spec": self.spec,
            "kind": self.kind,
            "prime": self.prime,
            "precision": self.precision,
            "f": self.f,
            "e": self.e,
            "absolute_e": self.absolute_e,
            "unramified_poly": [str(c) for c in self.unram_poly],
            "eisenstein_poly": None if self.eis_poly is None else [[str(c) for c in co] for co in self.eis_poly],
            "has_conj": self.has_conj,
        }

    @property
    def absolute_e(self) -> int:
        return self.e

    def __repr__(self):
        return f"<Ring {self.name} l={self.prime} f={self.f} e={self.e} N={self.precision}>"


class RingElement:
    """An element of K = Frac(O) with capped relative precision."""

    __slots__ = ("ring", "coeffs", "shift")

    def __init__(self, ring: RingDescriptor, coeffs: tuple, shift: int):
        self.ring = ring
        self.coeffs = coeffs
        self.shift = shift

    @staticmethod
    def _make(ring: RingDescriptor, coeffs: tuple, shift: int) -> "RingElement":
        p = ring.prime
        if ring.d == 1:
            c = coeffs[0]
            if c == 0:
                return RingElement(ring, coeffs, 0)
            if c % p:
                return RingElement(ring, coeffs, shift)
            m = 0
            while c % p == 0:
                c //= p
                m += 1
            if m >= ring.precision - ring.guard:
                return RingElement(ring, (0,), 0)
            return RingElement(ring, (c,), shift + m)
        if not any(coeffs):
            return RingElement(ring, coeffs, 0)
        if any(c % p for c in coeffs):
            return RingElement(ring, coeffs, shift)
        m = min(_vl_int(c, p, ring.precision) for c in coeffs if c)
        if m >= ring.precision - ring.guard:
            return RingElement(ring, (0,) * ring.d, 0)
        div = p**m
        coeffs = tuple(c // div for c in coeffs)
        if ring.e > 1:
            coeffs = ring._mul_coords(coeffs, ring._w_pow(-m) if m else ring._unit_vector(0))
            # l^m = pi^{me} * w^{-m}
        return RingElement(ring, coeffs, shift + m * ring.e)

    # ------------------------------------------------------------- helpers
    def _check(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise ValueError(f"ring mismatch: {self.ring.name} vs {other.ring.name}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> float:
        """Valuation in uniformizer units; ``math.inf`` for zero."""
        if self.is_zero():
            return INF
        return self.shift + self.ring._coord_val(self.coeffs)

    def val(self) -> int:
        v = self.valuation()
        if v == INF:
            raise PrecisionExhausted("element is indistinguishable from zero")
        return int(v)

    # ----------------------------------------------------------- arithmetic
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        ring = self.ring
        a, b = (self, other) if self.shift <= other.shift else (other, self)
        bc = ring._scale_pi_power(b.coeffs, b.shift - a.shift)
        M = ring.modulus
        return RingElement._make(ring, tuple((x + y) % M for x, y in zip(a.coeffs, bc)), a.shift)

    __radd__ = __add__

    def __neg__(self):
        M = self.ring.modulus
        return RingElement(self.ring, tuple((-c) % M for c in self.coeffs), self.shift)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return self.ring.zero()
        ring = self.ring
        return RingElement._make(ring, ring._mul_coords(self.coeffs, other.coeffs), self.shift + other.shift)

    __rmul__ = __mul__

    def unit_part(self) -> tuple["RingElement", int]:
        """Return (w, v) with self = pi**v * w and w a unit."""
        if self.is_zero():
            raise PrecisionExhausted("zero has no unit part")
        ring = self.ring
        t = int(ring._coord_val(self.coeffs))
        c = self.coeffs
        for _ in range(t):
            c = ring._div_pi(c)
        return RingElement(ring, c, 0), self.shift + t

    def inverse(self) -> "RingElement":
        w, v = self.unit_part()
        inv = self.ring._unit_inverse_coords(w.coeffs)
        return RingElement(self.ring, inv, -v)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (RingElement, int)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        raise TypeError("RingElement is not hashable; compare with ==")

    # ------------------------------------------------------- integrality
    def is_integral(self) -> bool:
        return self.valuation() >= 0

    def split_ell(self) -> tuple[int, tuple[int, ...]]:
        """Return (q, c) with self = l**q * (element with shift-0 coordinates c)."""
        ring = self.ring
        if self.is_zero():
            return 0, self.coeffs
        q = self.shift // ring.e
        r = self.shift - q * ring.e
        c = ring._scale_pi_power(self.coeffs, r)
        if ring.e > 1 and q:
            c = ring._mul_coords(c, ring._w_pow(q))
        return q, c

    def integral_coords(self) -> tuple[int, ...]:
        """Shift-0 coordinates of an integral element."""
        if self.is_zero():
            return self.coeffs
        if self.shift >= 0:
            return self.ring._scale_pi_power(self.coeffs, self.shift)
        if self.valuation() < 0:
            raise ValueError("element is not integral")
        c = self.coeffs
        for _ in range(-self.shift):
            c = self.ring._div_pi(c)
        return c

    def residue(self) -> FFElement:
        if self.valuation() < 0:
            raise ValueError("residue of a non-integral element")
        if self.valuation() > 0:
            return self.ring.residue_field.zero()
        return self.ring._residue_of_coords(self.integral_coords())

    def mod_pi_power(self, k: int) -> "RingElement":
        """Canonical representative of this integral element modulo pi**k."""
        ring = self.ring
        if k <= 0:
            return ring.zero()
        c = self.integral_coords()
        out = []
        for idx, x in enumerate(c):
            b = idx // ring.f
            m = -(-(k - b) // ring.e)
            out.append(x % ring.prime**m if m > 0 else 0)
        return ring.element(out)

    def conjugate(self) -> "RingElement":
        ring = self.ring
        if ring._conj_images is None:
            raise NoConjugation(f"{ring.name} has no conjugation")
        M = ring.modulus
        acc = [0] * ring.d
        for i, c in enumerate(self.coeffs):
            if c:
                img = ring._conj_images[i]
                q, ic = img.split_ell()
                assert q == 0
                for k, y in enumerate(ic):
                    acc[k] += c * y
        base = ring.element(acc)
        if self.shift:
            base = base * ring.pi**self.shift * ring._conj_pi_ratio**self.shift
        return base

    def __repr__(self):
        if self.is_zero():
            return "0"
        return f"pi^{self.shift}*{list(self.coeffs)}" if self.shift else f"{list(self.coeffs)}"


# ---------------------------------------------------------------- operations
def val_ext(x: RingElement) -> int:
    return x.val()


def conjugate(x: RingElement) -> RingElement:
    return x.conjugate()


def trace_to_base(x: RingElement, over: str = "prime") -> RingElement:
    """Trace of multiplication by x, down to Z_l ("prime") or to U ("unramified")."""
    ring = x.ring
    q, c = x.split_ell()
    M = ring.modulus
    if over == "prime":
        sub = prime_subring(ring)
        tr = sum(ci * ti for ci, ti in zip(c, ring._trace_prime)) % M
        return sub.from_int(tr) * sub.from_int(ring.prime) ** q
    if over == "unramified":
        sub = unramified_subring(ring)
        acc = [0] * ring.f
        for ci, tu in zip(c, ring._trace_u):
            if ci:
                for a in range(ring.f):
                    acc[a] += ci * tu[a]
        return sub.element([v % M for v in acc]) * sub.from_int(ring.prime) ** q
    raise ValueError(f"unknown trace level {over!r}")


def prime_subring(ring: RingDescriptor) -> RingDescriptor:
    return base_ring(ring.prime, ring.precision)


def unramified_subring(ring: RingDescriptor) -> RingDescriptor:
    if ring.e == 1:
        return ring
    if ring.base is not None and ring.base.e == 1:
        return ring.base
    return RingDescriptor(ring.prime, ring.precision, ring.unram_poly, kind="unramified", name=f"U({ring.name})")


def embed(x: RingElement, ring: RingDescriptor) -> RingElement:
    """Map an element of an unramified subring into a ring built over it."""
    src = x.ring
    if src is ring:
        return x
    if src.e != 1 or src.unram_poly != ring.unram_poly:
        if not (src.f == 1 and ring.f >= 1 and src.unram_poly == (0, 1)):
            raise ValueError(f"cannot embed {src.name} into {ring.name}")
    if x.is_zero():
        return ring.zero()
    coords = x.coeffs[: src.f]
    y = ring.from_u_coords(coords) if src.f == ring.f else ring.from_int(coords[0])
    return y * ring.from_int(ring.prime) ** x.shift


# ---------------------------------------------------------------- constructors
def _newton_root(poly: Sequence[int], start: RingElement) -> RingElement:
    ring = start.ring
    dpoly = [i * c for i, c in enumerate(poly)][1:]

    def ev(cs, x):
        acc = ring.zero()
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    x = start
    for _ in range(int(math.log2(ring.precision * ring.e + 1)) + 3):
        fx = ev(poly, x)
        if fx.is_zero():
            break
        x = x - fx / ev(dpoly, x)
    if not ev(poly, x).is_zero():
        raise BadSpec("Newton iteration did not converge")
    return x


@lru_cache(maxsize=None)
def base_ring(prime: int, precision: int | None = None) -> RingDescriptor:
    precision = precision or default_precision()
    if prime < 2 or any(prime % q == 0 for q in range(2, int(prime**0.5) + 1)):
        raise BadSpec(f"{prime} is not prime")
    ring = RingDescriptor(prime, precision, (0, 1), kind="base", name=f"Z{prime}")
    ring.spec = f"Q{prime}"
    return ring


@lru_cache(maxsize=None)
def unramified_ring(prime: int, n: int, precision: int | None = None) -> RingDescriptor:
    """Z_l[zeta_n] for l not dividing n."""
    precision = precision or default_precision()
    base_ring(prime, precision)
    if n < 1 or n % prime == 0:
        raise BadSpec(f"l = {prime} divides n = {n}")
    phi = cyclotomic_coeffs(n)
    factors = factor_mod(phi, prime)
    h = factors[0]
    name = f"Z{prime}[zeta{n}]"
    if len(h) == 2:
        ring = RingDescriptor(prime, precision, (0, 1), kind="unramified", name=name)
        root = min((-fac[0]) % prime for fac in factors)
        z = hensel_root(phi, root, prime, precision)
        ring.generators[f"zeta{n}"] = ring.from_int(z.residue)
        ring.generators["zeta"] = ring.generators[f"zeta{n}"]
    else:
        ring = RingDescriptor(prime, precision, h, kind="unramified", name=name)
        z = _newton_root(phi, ring.u)
        ring.generators[f"zeta{n}"] = z
        ring.generators["zeta"] = z
        if ring.f == 2:
            frob = _newton_root(list(ring.unram_poly), ring.u**prime)
            ring._set_conj(frob, ring.pi)
    ring.spec = f"unr({prime},{n})"
    return ring


@lru_cache(maxsize=None)
def cyclotomic_ring(base: RingDescriptor) -> RingDescriptor:
    """O_K[zeta_l] over an unramified base, with pi = zeta_l - 1 internally."""
    if base.e != 1:
        raise BadSpec("cyclotomic layer requires an unramified base")
    ell = base.prime
    phi = cyclotomic_coeffs(ell)
    # Phi_l(x + 1)
    shifted = [0] * len(phi)
    for k, c in enumerate(phi):
        for j in range(k + 1):
            shifted[j] += c * math.comb(k, j)
    ring = RingDescriptor(ell, base.precision, base.unram_poly, [[c] for c in shifted],
                          kind="cyclotomic", name=f"{base.name}[zeta{ell}]", base=base)
    zeta = ring.one() + ring.pi
    zinv = zeta ** (ell - 1)
    ring._set_conj(ring.u, zinv - ring.one())
    ring.generators.update({k: embed(v, ring) for k, v in base.generators.items()})
    ring.generators[f"zeta{ell}"] = zeta
    ring.generators["zeta_ell"] = zeta
    ring.generators["theta"] = zeta + zinv
    ring.uniformizer = zeta - zinv
    ring.generators["eta"] = ring.uniformizer
    ring.spec = f"cyc({base.spec})"
    return ring


def real_cyclotomic_poly(ell: int) -> list[int]:
    """Minimal polynomial of zeta + zeta^{-1}, from Phi_l by the x + 1/x substitution."""
    m = (ell - 1) // 2
    laurent = {k - m: c for k, c in enumerate(cyclotomic_coeffs(ell))}
    q = [0] * (m + 1)
    for k in range(m, -1, -1):
        c = laurent.get(k, 0)
        if c == 0:
            continue
        q[k] = c
        for j in range(k + 1):
            laurent[k - 2 * j] = laurent.get(k - 2 * j, 0) - c * math.comb(k, j)
    assert all(v == 0 for v in laurent.values())
    return q


@lru_cache(maxsize=None)
def real_cyclotomic_ring(base: RingDescriptor) -> RingDescriptor:
    """O_K[zeta_l + zeta_l^{-1}] with uniformizer 2 - (zeta + zeta^{-1})."""
    if base.e != 1:
        raise BadSpec("real cyclotomic layer requires an unramified base")
    ell = base.prime
    if ell == 2:
        raise BadSpec("l must be odd")
    q = real_cyclotomic_poly(ell)
    m = len(q) - 1
    # g(w) = (-1)^m Q(2 - w)
    g = [0] * (m + 1)
    for k, c in enumerate(q):
        for j in range(k + 1):
            g[j] += c * math.comb(k, j) * 2 ** (k - j) * (-1) ** j
    sign = (-1) ** m
    g = [sign * c for c in g]
    ring = RingDescriptor(ell, base.precision, base.unram_poly, [[c] for c in g],
                          kind="real_cyclotomic", name=f"{base.name}[theta{ell}]", base=base)
    ring.generators.update({k: embed(v, ring) for k, v in base.generators.items()})
    ring.generators["theta"] = ring.from_int(2) - ring.pi
    ring.uniformizer = ring.pi
    ring.spec = f"real({base.spec})"
    return ring


def make_ring(spec: str, precision: int | None = None) -> RingDescriptor:
    """Parse a ring spec: ``Q5``, ``unr(7,4)``, ``cyc(Q5)``, ``real(Q5)``, ``cyc(unr(7,4))``."""
    spec = spec.replace(" ", "")
    try:
        if spec.startswith("cyc(") and spec.endswith(")"):
            return cyclotomic_ring(make_ring(spec[4:-1], precision))
        if spec.startswith("real(") and spec.endswith(")"):
            return real_cyclotomic_ring(make_ring(spec[5:-1], precision))
        if spec.startswith("unr(") and spec.endswith(")"):
            ell, n = (int(t) for t in spec[4:-1].split(","))
            return unramified_ring(ell, n, precision or default_precision())
        if spec[0] in "QZ":
            return base_ring(int(spec[1:]), precision or default_precision())
    except ValueError as exc:
        raise BadSpec(f"cannot parse ring spec {spec!r}") from exc
    raise BadSpec(f"cannot parse ring spec {spec!r}")
