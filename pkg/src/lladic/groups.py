"""Structured finite groups: cyclic, generalized quaternion, N_p, mu_l and products.

Elements are hashable normal forms (integers, exponent pairs, tuples), and the
full element list is enumerated once in breadth-first order from the
generators.  Structural predicates (inertia type, the (D_l) splitting) are
answered by direct enumeration, which is exact for the small orders involved.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Hashable, Sequence

from .errors import BadSpec, UnsupportedFamily


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


def primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1


class FiniteGroup:
    """Base class: subclasses provide ``identity``, ``mul``, ``generators``."""

    family = "abstract"
    name = "G"
    identity: Hashable
    generators: list

    def mul(self, x, y):
        raise NotImplementedError

    @cached_property
    def elements(self) -> list:
        seen = {self.identity: None}
        order = [self.identity]
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = self.mul(g, s)
                if h not in seen:
                    seen[h] = (g, s)
                    order.append(h)
                    queue.append(h)
        self._tree = seen
        return order

    @cached_property
    def spanning_tree(self) -> dict:
        """element -> (parent, generator) with element = parent * generator."""
        self.elements
        return self._tree

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def inv(self, x):
        k = self.element_order(x)
        return self.power(x, k - 1)

    def power(self, x, k: int):
        if k < 0:
            return self.power(self.inv(x), -k)
        result = self.identity
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, x) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def is_subgroup(self, subset) -> bool:
        s = set(subset)
        return self.identity in s and all(self.mul(x, y) in s for x in s for y in s)

    def is_normal(self, subset) -> bool:
        s = set(subset)
        return all(self.mul(self.mul(g, h), self.inv(g)) in s for g in self.generators for h in s)

    def generated(self, gens: Sequence) -> frozenset:
        out = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.mul(x, s)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)

    def normal_closure(self, gens: Sequence) -> frozenset:
        conj = {self.mul(self.mul(g, x), self.inv(g)) for g in self.elements for x in gens}
        return self.generated(sorted(conj, key=self.elements.index))

    def __repr__(self):
        return f"<{self.name} order {self.order}>"


class Cyclic(FiniteGroup):
    family = "cyclic"

    def __init__(self, n: int):
        if n < 1:
            raise BadSpec("cyclic order must be positive")
        self.n = n
        self.name = f"C{n}"
        self.identity = 0
        self.generators = [1 % n] if n > 1 else [0]

    def mul(self, x, y):
        return (x + y) % self.n

    def inv(self, x):
        return (-x) % self.n


class Mu(Cyclic):
    """mu_l, written additively as exponents of a fixed generator zeta_l."""

    family = "mu"

    def __init__(self, ell: int):
        if not _is_prime(ell):
            raise BadSpec(f"mu_{ell}: {ell} is not prime")
        super().__init__(ell)
        self.ell = ell
        self.name = f"mu{ell}"


class Quaternion(FiniteGroup):
    """Q_m = <a, b | a^{2m} = 1, b^2 = a^m, b a b^{-1} = a^{-1}>; elements (i, j) = a^i b^j."""

    family = "quaternion"

    def __init__(self, m: int):
        if m < 2:
            raise BadSpec("Q_m needs m >= 2")
        self.m = m
        self.name = f"Q{m}"
        self.identity = (0, 0)
        self.generators = [(1, 0), (0, 1)]

    def mul(self, x, y):
        i1, j1 = x
        i2, j2 = y
        n = 2 * self.m
        if j1 == 0:
            return ((i1 + i2) % n, j2)
        if j2 == 0:
            return ((i1 - i2) % n, 1)
        return ((i1 - i2 + self.m) % n, 0)

    @property
    def a(self):
        return (1, 0)

    @property
    def b(self):
        return (0, 1)


class NGroup(FiniteGroup):
    """N_p for odd p: C_{2(p-1)} acting on mu_p through C_{p-1} = Aut(mu_p).

    Elements (x, c) stand for zeta_p^x u^c with u zeta u^{-1} = zeta^g,
    g a primitive root modulo p.
    """

    family = "N"

    def __init__(self, p: int):
        if not _is_prime(p) or p == 2:
            raise BadSpec("N_p is built here for odd primes p (N_2 is Q_2)")
        self.p = p
        self.g = primitive_root(p)
        self.name = f"N{p}"
        self.identity = (0, 0)
        self.generators = [(1, 0), (0, 1)]

    def mul(self, x, y):
        x1, c1 = x
        x2, c2 = y
        p = self.p
        return ((x1 + pow(self.g, c1, p) * x2) % p, (c1 + c2) % (2 * (p - 1)))


class DirectProduct(FiniteGroup):
    family = "product"

    def __init__(self, factors: Sequence[FiniteGroup]):
        if len(factors) < 2:
            raise BadSpec("a direct product needs at least two factors")
        self.factors = list(factors)
        self.name = "x".join(f.name for f in factors)
        self.identity = tuple(f.identity for f in factors)
        gens = []
        for i, f in enumerate(factors):
            for s in f.generators:
                g = list(self.identity)
                g[i] = s
                gens.append(tuple(g))
        self.generators = gens

    def mul(self, x, y):
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, x, y))

    def inv(self, x):
        return tuple(f.inv(a) for f, a in zip(self.factors, x))

    def embed(self, i: int, x):
        g = list(self.identity)
        g[i] = x
        return tuple(g)

    def factor_subgroup(self, i: int) -> frozenset:
        return frozenset(self.embed(i, x) for x in self.factors[i].elements)


class QuotientGroup(FiniteGroup):
    """G/H for a normal subgroup H; elements are cosets as frozensets."""

    family = "quotient"

    def __init__(self, group: FiniteGroup, normal: frozenset):
        if not (group.is_subgroup(normal) and group.is_normal(normal)):
            raise BadSpec("quotient by a non-normal subset")
        self.group = group
        self.normal = frozenset(normal)
        self.name = f"{group.name}/[{len(normal)}]"
        self.identity = self.coset(group.identity)
        self.generators = [self.coset(s) for s in group.generators]

    @lru_cache(maxsize=None)
    def coset(self, g) -> frozenset:
        return frozenset(self.group.mul(g, h) for h in self.normal)

    def mul(self, x, y):
        gx = next(iter(x))
        gy = next(iter(y))
        return self.coset(self.group.mul(gx, gy))


def quaternion_to_n3(q3: Quaternion, n3: NGroup):
    """Explicit isomorphism Q_3 -> N_3 determined by a -> zeta u^2, b -> u."""
    images = {q3.a: n3.mul((1, 0), (0, 2)), q3.b: (0, 1)}
    return homomorphism_from_generators(q3, n3, images)


def homomorphism_from_generators(src: FiniteGroup, dst: FiniteGroup, images: dict) -> dict | None:
    """Extend generator images along the Cayley tree; None if not a homomorphism."""
    tree = src.spanning_tree
    phi = {src.identity: dst.identity}
    for g in src.elements[1:]:
        parent, s = tree[g]
        phi[g] = dst.mul(phi[parent], images[s])
    for g in src.elements:
        for s in src.generators:
            if phi[src.mul(g, s)] != dst.mul(phi[g], images[s]):
                return None
    return phi


# ---------------------------------------------------------------- parsing
_TOKEN = re.compile(r"^(Q|N|C|mu)(\d+)$")


def build_group(spec: str) -> FiniteGroup:
    """Parse ``Q2``, ``N3``, ``C6``, ``mu5`` and products such as ``Q2xmu5``."""
    parts = [s for s in spec.replace(" ", "").split("x") if s]
    if not parts:
        raise BadSpec(f"empty group spec {spec!r}")
    groups = [_build_one(p) for p in parts]
    return groups[0] if len(groups) == 1 else DirectProduct(groups)


def _build_one(tok: str) -> FiniteGroup:
    m = _TOKEN.match(tok)
    if not m:
        raise BadSpec(f"cannot parse group {tok!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "Q":
        return Quaternion(n)
    if kind == "C":
        return Cyclic(n)
    if kind == "mu":
        return Mu(n)
    if not _is_prime(n):
        raise BadSpec(f"N_{n}: {n} is not prime")
    return Quaternion(2) if n == 2 else NGroup(n)


# ---------------------------------------------------------- classification
def _pk(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


@dataclass(frozen=True)
class Split:
    """G = N x| L with N the normal l'-subgroup and L cyclic of l-power order."""

    N: frozenset
    L: frozenset
    L_generator: Hashable

    @property
    def n_order(self) -> int:
        return len(self.N)

    @property
    def l_order(self) -> int:
        return len(self.L)


@dataclass(frozen=True)
class Classification:
    inertia_type: bool
    sylow_p: frozenset | None
    d_ell_split: Split | None


SUPPORTED = (Cyclic, Quaternion, NGroup, DirectProduct, QuotientGroup)


def _coset_order(g: FiniteGroup, x, sub: frozenset) -> int:
    k, y = 1, x
    while y not in sub:
        y = g.mul(y, x)
        k += 1
    return k


def normal_p_subgroup_with_cyclic_quotient(g: FiniteGroup, p: int) -> frozenset | None:
    """The set of p-elements, if it is a normal subgroup H with G/H cyclic."""
    order = g.order
    pe = frozenset(x for x in g.elements if _pk(g.element_order(x), p) == g.element_order(x))
    if len(pe) != _pk(order, p) or not g.is_subgroup(pe):
        return None
    quotient = order // len(pe)
    if any(_coset_order(g, x, pe) == quotient for x in g.elements):
        return pe
    return None


def d_ell_split(g: FiniteGroup, ell: int) -> Split | None:
    order = g.order
    n_set = frozenset(x for x in g.elements if g.element_order(x) % ell != 0)
    if len(n_set) * _pk(order, ell) != order or not g.is_subgroup(n_set):
        return None
    q = order // len(n_set)
    gen = next((x for x in g.elements if g.element_order(x) == q), None)
    if gen is None:
        return None
    return Split(n_set, g.generated([gen]), gen)


def classify(g: FiniteGroup, p: int, ell: int) -> Classification:
    if not isinstance(g, SUPPORTED):
        raise UnsupportedFamily(f"{type(g).__name__} is not a supported family")
    h = normal_p_subgroup_with_cyclic_quotient(g, p)
    return Classification(h is not None, h, d_ell_split(g, ell))
