"""Lattices over O_K and bilinear forms on K^n.

A :class:`Lattice` is stored as ``pi**(-denom) * span(H)`` where ``H`` is the
column Hermite normal form: upper triangular, diagonal ``pi**k_i``, entries
above the diagonal reduced to canonical residues modulo the diagonal entry of
their row.  ``denom`` is minus the least valuation occurring in the lattice,
so two lattices are equal exactly when their ``(denom, H)`` pairs agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from . import linalg as la
from .errors import DegenerateForm, PrecisionExhausted, ValuesNotIntegral
from .localring import RingDescriptor, RingElement

SYMMETRIES = ("alternating", "symmetric", "hermitian", "skew-hermitian")


class SNFResult(NamedTuple):
    exponents: list
    left: list
    right: list


def _pi_pow(ring: RingDescriptor, k: int) -> RingElement:
    return ring.pi**k


def snf(m: Sequence[Sequence[RingElement]], ring: RingDescriptor, transforms: bool = True) -> SNFResult:
    """Smith form ``left @ m @ right = diag(pi**d_1, ..., pi**d_r, 0...)``.

    Pivots have minimal valuation, ties broken row-major.  The exponent list
    has one entry per nonzero invariant factor; a result shorter than
    ``min(rows, cols)`` signals rank deficiency at working precision.
    """
    a = [list(r) for r in m]
    nr, nc = la.shape(a)
    if any(x.valuation() < 0 for r in a for x in r):
        raise ValuesNotIntegral("Smith form requires integral entries")
    left = la.identity(ring, nr) if transforms else None
    right = la.identity(ring, nc) if transforms else None
    exps = []
    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = a[i][j].valuation()
                if v != math.inf and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        k, pi_, pj = best
        if k > ring.precision * ring.e - ring.guard * ring.e:
            raise PrecisionExhausted(f"pivot valuation {k} exceeds the reliable range")
        a[t], a[pi_] = a[pi_], a[t]
        if transforms:
            left[t], left[pi_] = left[pi_], left[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        if transforms:
            for row in right:
                row[t], row[pj] = row[pj], row[t]
        # scale pivot row to make the pivot exactly pi^k
        unit = a[t][t] / _pi_pow(ring, int(k))
        uinv = unit.inverse()
        a[t] = [x * uinv for x in a[t]]
        if transforms:
            left[t] = [x * uinv for x in left[t]]
        piv = a[t][t]
        pinv = piv.inverse()
        for i in range(t + 1, nr):
            if not a[i][t].is_zero():
                q = a[i][t] * pinv
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if transforms:
                    left[i] = [x - q * y for x, y in zip(left[i], left[t])]
        for j in range(t + 1, nc):
            if not a[t][j].is_zero():
                q = a[t][j] * pinv
                for row in a:
                    row[j] = row[j] - q * row[t]
                if transforms:
                    for row in right:
                        row[j] = row[j] - q * row[t]
        exps.append(int(k))
    return SNFResult(exps, left, right)


def elementary_divisors(m, ring) -> list:
    return snf(m, ring, transforms=False).exponents


def _hnf(gens: list, ring: RingDescriptor, n: int) -> list:
    """Column HNF of integral generator columns (list of length-n vectors)."""
    cols = [list(c) for c in gens if not all(x.is_zero() for x in c)]
    out = [None] * n
    for i in range(n - 1, -1, -1):
        best = None
        for idx, c in enumerate(cols):
            v = c[i].valuation()
            if v != math.inf and (best is None or v < best[0]):
                best = (v, idx)
        if best is None:
            raise DegenerateForm("generators do not span a full-rank lattice")
        k, idx = best
        piv = cols.pop(idx)
        inv = piv[i].inverse()
        for c in cols:
            if not c[i].is_zero():
                q = c[i] * inv
                for r in range(i + 1):
                    c[r] = c[r] - q * piv[r]
                c[i] = ring.zero()
        unit = piv[i] / _pi_pow(ring, int(k))
        uinv = unit.inverse()
        piv = [x * uinv for x in piv[: i + 1]] + [ring.zero()] * (n - i - 1)
        piv[i] = _pi_pow(ring, int(k))
        out[i] = piv
    # canonical off-diagonal entries
    for j in range(n):
        col = out[j]
        for r in range(j - 1, -1, -1):
            x = col[r]
            if x.is_zero():
                continue
            kr = int(out[r][r].valuation())
            c = x.mod_pi_power(kr)
            q = (x - c) / out[r][r]
            if not q.is_zero():
                for s in range(r):
                    col[s] = col[s] - q * out[r][s]
            col[r] = c
    return la.from_columns(out)


class Lattice:
    """Full-rank O_K-lattice in K^n."""

    __slots__ = ("ring", "n", "denom", "hnf")

    def __init__(self, ring: RingDescriptor, n: int, denom: int, hnf: list):
        self.ring = ring
        self.n = n
        self.denom = denom
        self.hnf = hnf

    @classmethod
    def from_generators(cls, ring: RingDescriptor, gens: Sequence[Sequence[RingElement]]) -> "Lattice":
        """Lattice spanned by the given column vectors."""
        gens = [list(g) for g in gens]
        if not gens:
            raise DegenerateForm("no generators")
        n = len(gens[0])
        v = min((x.valuation() for g in gens for x in g), default=math.inf)
        if v == math.inf:
            raise DegenerateForm("all generators vanish")
        d = -int(v)
        scale = _pi_pow(ring, d)
        scaled = [[x * scale for x in g] for g in gens]
        return cls(ring, n, d, _hnf(scaled, ring, n))

    @classmethod
    def from_basis_matrix(cls, ring: RingDescriptor, basis: list) -> "Lattice":
        return cls.from_generators(ring, la.columns(basis))

    @classmethod
    def standard(cls, ring: RingDescriptor, n: int) -> "Lattice":
        return cls(ring, n, 0, la.identity(ring, n))

    # -------------------------------------------------------------- views
    def basis_matrix(self) -> list:
        if self.denom == 0:
            return [list(r) for r in self.hnf]
        s = _pi_pow(self.ring, -self.denom)
        return la.mat_scale(s, self.hnf)

    def basis(self) -> list:
        return la.columns(self.basis_matrix())

    def diagonal_exponents(self) -> list:
        return [int(self.hnf[i][i].valuation()) for i in range(self.n)]

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.n == other.n and self.denom == other.denom and la.mat_eq(self.hnf, other.hnf)

    def __hash__(self):
        return hash((self.n, self.denom, tuple(self.diagonal_exponents())))

    def __repr__(self):
        return f"<Lattice n={self.n} denom={self.denom} diag={self.diagonal_exponents()}>"

    # --------------------------------------------------------- operations
    def scale(self, k: int) -> "Lattice":
        """pi**k * self."""
        return Lattice(self.ring, self.n, self.denom - k, self.hnf)

    def apply(self, a: list) -> "Lattice":
        return Lattice.from_basis_matrix(self.ring, la.matmul(a, self.basis_matrix()))

    def contains_vector(self, x: Sequence[RingElement]) -> bool:
        if self.denom:
            s = _pi_pow(self.ring, self.denom)
            x = [c * s for c in x]
        else:
            x = list(x)
        for i in range(self.n - 1, -1, -1):
            c = x[i] / self.hnf[i][i]
            if c.valuation() < 0:
                return False
            if not c.is_zero():
                for r in range(i):
                    x[r] = x[r] - c * self.hnf[r][i]
        return True

    def contains(self, other: "Lattice") -> bool:
        return all(self.contains_vector(v) for v in other.basis())

    def __le__(self, other: "Lattice") -> bool:
        return other.contains(self)

    def coordinates(self, x: Sequence[RingElement]) -> list:
        """Coefficients of x in this lattice's basis (may be non-integral)."""
        return [r[0] for r in la.solve(self.basis_matrix(), [[c] for c in x], self.ring)]

    def index_exponents(self, sub: "Lattice") -> list:
        """Elementary divisor exponents of self / sub for sub contained in self."""
        rel = la.matmul(la.inverse(self.basis_matrix(), self.ring), sub.basis_matrix())
        return elementary_divisors(rel, self.ring)

    def index(self, sub: "Lattice") -> int:
        """Length of self / sub in uniformizer units."""
        return sum(self.index_exponents(sub))

    def standard_dual(self) -> "Lattice":
        b = self.basis_matrix()
        return Lattice.from_basis_matrix(self.ring, la.inverse(la.transpose(b), self.ring))


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    _same(a, b)
    return Lattice.from_generators(a.ring, a.basis() + b.basis())


def lattice_intersect(a: Lattice, b: Lattice) -> Lattice:
    """a cap b, as the standard dual of the sum of standard duals."""
    _same(a, b)
    return lattice_sum(a.standard_dual(), b.standard_dual()).standard_dual()


def _same(a: Lattice, b: Lattice):
    if a.ring is not b.ring or a.n != b.n:
        raise ValueError("lattices live in different spaces")


def conj_matrix(a: list) -> list:
    return [[x.conjugate() for x in row] for row in a]


@dataclass
class BilinearForm:
    """``f(x, y) = x^T G y``, or ``x^T G conj(y)`` for the (skew-)hermitian tags."""

    ring: RingDescriptor
    gram: list
    symmetry: str
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.symmetry not in SYMMETRIES:
            raise ValueError(f"unknown symmetry {self.symmetry!r}")
        if self.check:
            if not self.has_symmetry():
                raise ValueError(f"Gram matrix is not {self.symmetry}")
            if la.det(self.gram, self.ring).is_zero():
                raise DegenerateForm("form is degenerate at working precision")

    @property
    def n(self) -> int:
        return len(self.gram)

    @property
    def sesquilinear(self) -> bool:
        return self.symmetry in ("hermitian", "skew-hermitian")

    def has_symmetry(self) -> bool:
        g = self.gram
        gt = la.transpose(g)
        if self.symmetry == "symmetric":
            return la.mat_eq(gt, g)
        if self.symmetry == "alternating":
            return la.mat_eq(gt, la.mat_neg(g)) and all(g[i][i].is_zero() for i in range(self.n))
        gct = conj_matrix(gt)
        return la.mat_eq(gct, g if self.symmetry == "hermitian" else la.mat_neg(g))

    def _right(self, b: list) -> list:
        return conj_matrix(b) if self.sesquilinear else b

    def value(self, x, y) -> RingElement:
        y = [c.conjugate() for c in y] if self.sesquilinear else list(y)
        return la.matmul([list(x)], la.matmul(self.gram, [[c] for c in y]))[0][0]

    def gram_on(self, lattice_or_basis) -> list:
        b = lattice_or_basis.basis_matrix() if isinstance(lattice_or_basis, Lattice) else lattice_or_basis
        return la.matmul(la.transpose(b), la.matmul(self.gram, self._right(b)))

    def scaled(self, c: RingElement) -> "BilinearForm":
        return BilinearForm(self.ring, la.mat_scale(c, self.gram), self.symmetry, check=False)

    def is_invariant(self, a: list) -> bool:
        return la.mat_eq(la.matmul(la.transpose(a), la.matmul(self.gram, self._right(a))), self.gram)


def dual_lattice(t: Lattice, f: BilinearForm) -> Lattice:
    """{x : f(x, t) in O_K}."""
    if la.det(f.gram, f.ring).is_zero():
        raise DegenerateForm("dual with respect to a degenerate form")
    gb = la.matmul(f.gram, f._right(t.basis_matrix()))
    return Lattice.from_basis_matrix(t.ring, la.inverse(la.transpose(gb), t.ring))


@dataclass
class PerfectnessCertificate:
    perfect: bool
    exponents: list
    gram: list = field(repr=False)

    def __bool__(self):
        return self.perfect


def is_perfect(t: Lattice, f: BilinearForm) -> PerfectnessCertificate:
    g = f.gram_on(t)
    if any(x.valuation() < 0 for row in g for x in row):
        raise ValuesNotIntegral("f(T, T) is not contained in O_K")
    exps = elementary_divisors(g, t.ring)
    perfect = len(exps) == t.n and all(e == 0 for e in exps)
    return PerfectnessCertificate(perfect, exps, g)
