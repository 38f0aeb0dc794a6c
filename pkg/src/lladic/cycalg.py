"""M = K(zeta_l) as an explicit K-algebra with basis 1, zeta, ..., zeta^(n-1).

Works over any base ring from :mod:`lladic.localring` in which the minimal
polynomial of zeta_l is known: ``Phi_l`` over an unramified base, and
``x^2 - theta x + 1`` over the real cyclotomic ring.  In both cases
``O_M = O_K[zeta]`` so the power basis spans the maximal order.
"""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

from . import linalg as la
from .errors import BadSpec
from .localring import RingDescriptor, RingElement, cyclotomic_coeffs


class CyclotomicAlgebra:
    def __init__(self, base: RingDescriptor):
        self.base = base
        self.ell = base.prime
        if base.kind == "real_cyclotomic":
            theta = base.generators["theta"]
            self.minpoly = [base.one(), -theta, base.one()]
        elif base.e == 1:
            self.minpoly = [base.from_int(c) for c in cyclotomic_coeffs(self.ell)]
        else:
            raise BadSpec(f"no cyclotomic algebra model over {base.name}")
        self.n = len(self.minpoly) - 1

    # elements are lists of n base-ring elements
    def element(self, coeffs: Sequence) -> list:
        out = [c if isinstance(c, RingElement) else self.base.from_int(c) for c in coeffs]
        return out + [self.base.zero()] * (self.n - len(out))

    def one(self) -> list:
        return self.element([1])

    @cached_property
    def zeta(self) -> list:
        return self.element([0, 1]) if self.n > 1 else self.element([-self.minpoly[0]])

    def mul(self, x: Sequence, y: Sequence) -> list:
        z = self.base.zero()
        prod = [z] * (2 * self.n - 1)
        for i, a in enumerate(x):
            if a.is_zero():
                continue
            for j, b in enumerate(y):
                if not b.is_zero():
                    prod[i + j] = prod[i + j] + a * b
        for k in range(len(prod) - 1, self.n - 1, -1):
            c = prod[k]
            if not c.is_zero():
                for t in range(self.n + 1):
                    prod[k - self.n + t] = prod[k - self.n + t] - c * self.minpoly[t]
        return prod[: self.n]

    def add(self, x, y) -> list:
        return [a + b for a, b in zip(x, y)]

    def sub(self, x, y) -> list:
        return [a - b for a, b in zip(x, y)]

    def scale(self, c, x) -> list:
        return [c * a for a in x]

    def power(self, x, k: int) -> list:
        if k < 0:
            return self.power(self.inverse(x), -k)
        result = self.one()
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def mult_matrix(self, x: Sequence) -> list:
        """Matrix of y -> x*y in the power basis (columns are images of zeta^j)."""
        cols = [self.mul(x, self._basis(j)) for j in range(self.n)]
        return la.from_columns(cols)

    def _basis(self, j: int) -> list:
        v = [self.base.zero()] * self.n
        v[j] = self.base.one()
        return v

    def inverse(self, x: Sequence) -> list:
        sol = la.solve(self.mult_matrix(x), [[c] for c in self.one()], self.base)
        return [r[0] for r in sol]

    @cached_property
    def basis_traces(self) -> list:
        """tr(zeta^i) for the power basis; the trace is linear in these."""
        out = []
        for j in range(self.n):
            m = self.mult_matrix(self._basis(j))
            acc = self.base.zero()
            for i in range(self.n):
                acc = acc + m[i][i]
            out.append(acc)
        return out

    def trace(self, x: Sequence) -> RingElement:
        acc = self.base.zero()
        for a, t in zip(x, self.basis_traces):
            if not a.is_zero():
                acc = acc + a * t
        return acc

    @cached_property
    def conj_matrix(self) -> list:
        """Matrix of the involution zeta -> zeta^{-1}."""
        zinv = self.power(self.zeta, self.ell - 1)
        cols = [self.power(zinv, j) for j in range(self.n)]
        return la.from_columns(cols)

    def conjugate(self, x: Sequence) -> list:
        return la.matvec(self.conj_matrix, x)

    @cached_property
    def companion(self) -> list:
        return self.mult_matrix(self.zeta)

    @cached_property
    def eta(self) -> list:
        return self.sub(self.zeta, self.power(self.zeta, self.ell - 1))

    @cached_property
    def varpi(self) -> list:
        """eta * conj(eta) = -eta^2, a uniformizer of M^+."""
        return self.mul(self.eta, self.conjugate(self.eta))

    def trace_form_gram(self, twist: Sequence | None = None) -> list:
        """Gram of (x, y) -> tr(x * twist * conj(y)) on the power basis."""
        conj_basis = la.columns(self.conj_matrix)
        rows = []
        for i in range(self.n):
            xi = self._basis(i) if twist is None else self.mul(self._basis(i), twist)
            rows.append([self.trace(self.mul(xi, c)) for c in conj_basis])
        return rows

    @property
    def e_total(self) -> int:
        """Absolute ramification index of M."""
        return self.base.e * self.n

    def __repr__(self):
        return f"<CyclotomicAlgebra over {self.base.name}, degree {self.n}>"
