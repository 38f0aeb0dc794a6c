"""Matrix representations of the structured groups over local rings.

A :class:`Representation` stores generator images and extends them to every
group element along the Cayley spanning tree.  Construction fails unless the
extension is consistent on every edge ``g -> g*s`` of the Cayley graph, which
is exactly the statement that the generator images satisfy all relations.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .cycalg import CyclotomicAlgebra
from .errors import BadParameters, SymmetryMismatch, TooLarge
from .ff import FiniteField
from .groups import Cyclic, DirectProduct, FiniteGroup, Mu, Quaternion, _is_prime
from .latmod import BilinearForm, Lattice, lattice_sum
from .localring import RingDescriptor, base_ring, unramified_ring
from .padic import hensel_root

SIMPLE_SEARCH_BOUND = 10**6


@dataclass(frozen=True)
class Block:
    """A summand of a representation: coordinates ``start .. start+dim-1``.

    ``kind`` is ``"simple"`` for a nondegenerate simple block, ``"cyclotomic"``
    for K(zeta_l) with mu_l x {+-1} acting, and ``"isotropic"`` for one half of
    a pair of mutually dual isotropic blocks (``partner`` names the other).
    """

    start: int
    dim: int
    kind: str = "simple"
    partner: int | None = None
    label: str = ""

    @property
    def indices(self) -> range:
        return range(self.start, self.start + self.dim)


class Representation:
    def __init__(self, group: FiniteGroup, ring, images: dict, decomposition: list | None = None, label: str = ""):
        self.group = group
        self.ring = ring
        self.images = {g: [list(r) for r in m] for g, m in images.items()}
        self.dim = len(next(iter(images.values()))) if images else 0
        self.decomposition = decomposition or [Block(0, self.dim)]
        self.label = label
        if set(self.images) != set(group.generators):
            raise BadParameters("images must be given for exactly the group generators")
        for m in self.images.values():
            if la.det(m, ring).is_zero():
                raise BadParameters("generator image is singular")
        self._check_relations()

    def _check_relations(self):
        tree = self.group.spanning_tree
        one = la.identity(self.ring, self.dim)
        imgs = {self.group.identity: one}
        for g in self.group.elements[1:]:
            parent, s = tree[g]
            imgs[g] = la.matmul(imgs[parent], self.images[s])
        for g in self.group.elements:
            for s in self.group.generators:
                h = self.group.mul(g, s)
                if not la.mat_eq(imgs[h], la.matmul(imgs[g], self.images[s])):
                    raise BadParameters(f"generator images violate a relation at {g} * {s}")
        self._all = imgs

    def image(self, g) -> list:
        return self._all[g]

    @property
    def all_images(self) -> dict:
        return self._all

    def __repr__(self):
        return f"<Representation {self.label or self.group.name} dim {self.dim} over {getattr(self.ring, 'name', self.ring)}>"


# ---------------------------------------------------------------- forms
def standard_symplectic(ring, n: int) -> list:
    if n % 2:
        raise BadParameters("standard symplectic form needs even dimension")
    g = la.zeros(ring, n)
    for i in range(0, n, 2):
        g[i][i + 1] = ring.one()
        g[i + 1][i] = -ring.one()
    return g


def _unknowns(n: int, symmetry: str) -> list:
    if symmetry == "symmetric":
        return [(i, j) for i in range(n) for j in range(i, n)]
    if symmetry == "alternating":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    return [(i, j) for i in range(n) for j in range(n)]


def _gram_from(vec, idx, n, symmetry, ring) -> list:
    g = la.zeros(ring, n)
    for x, (i, j) in zip(vec, idx):
        g[i][j] = x
        if i != j:
            if symmetry == "symmetric":
                g[j][i] = x
            elif symmetry == "alternating":
                g[j][i] = -x
    return g


def invariant_forms(rep: Representation, symmetry: str) -> list:
    """Basis (as Gram matrices) of the G-invariant forms of the given symmetry.

    For the hermitian tags the K-linear space of invariant sesquilinear forms
    ``A^T F conj(A) = F`` is returned; its (skew-)hermitian members form a
    subspace over the fixed field of the conjugation.
    """
    n, ring = rep.dim, rep.ring
    idx = _unknowns(n, symmetry)
    pos = {u: k for k, u in enumerate(idx)}
    sesqui = symmetry in ("hermitian", "skew-hermitian")
    # current solution space: columns of `basis` (len(idx) x k)
    basis = la.identity(ring, len(idx))
    for s in rep.group.generators:
        a = rep.images[s]
        b = [[x.conjugate() for x in row] for row in a] if sesqui else a
        eqs = []
        for (i, j) in idx:
            row = [ring.zero() for _ in idx]
            for k in range(n):
                aki = a[k][i]
                if aki.is_zero():
                    continue
                for l in range(n):
                    blj = b[l][j]
                    if blj.is_zero():
                        continue
                    c = aki * blj
                    if symmetry == "alternating":
                        if k == l:
                            continue
                        if k < l:
                            row[pos[(k, l)]] = row[pos[(k, l)]] + c
                        else:
                            row[pos[(l, k)]] = row[pos[(l, k)]] - c
                    elif symmetry == "symmetric":
                        u = (k, l) if k <= l else (l, k)
                        row[pos[u]] = row[pos[u]] + c
                    else:
                        row[pos[(k, l)]] = row[pos[(k, l)]] + c
            row[pos[(i, j)]] = row[pos[(i, j)]] - ring.one()
            eqs.append(row)
        reduced = la.matmul(eqs, basis) if basis else eqs
        null = la.nullspace(reduced, ring)
        if not null:
            return []
        basis = la.matmul(basis, la.from_columns(null))
    out = []
    for vec in la.columns(basis):
        if hasattr(vec[0], "valuation"):
            v = min(x.valuation() for x in vec)
            vec = [x * ring.pi ** (-int(v)) for x in vec]
        out.append(_gram_from(vec, idx, n, symmetry, ring))
    return out


def check_invariant(rep: Representation, gram: list, sesquilinear: bool = False) -> bool:
    for m in rep.all_images.values():
        b = [[x.conjugate() for x in row] for row in m] if sesquilinear else m
        if not la.mat_eq(la.matmul(la.transpose(m), la.matmul(gram, b)), gram):
            return False
    return True


# ---------------------------------------------------------- constructors
def _q(p: int) -> int:
    if not _is_prime(p):
        raise BadParameters(f"p = {p} is not prime")
    return 4 if p == 2 else p


def _check_ell(ell: int, p: int):
    if not _is_prime(ell) or ell == 2 or ell == p:
        raise BadParameters(f"l must be an odd prime different from p (got l={ell}, p={p})")


def quaternion_split(ell: int, p: int, ring: RingDescriptor | None = None, precision: int | None = None):
    """Q_p on K^2 via diag(xi, xi^-1) and [[0,-1],[1,0]] with xi of order 2p in K."""
    _check_ell(ell, p)
    q = _q(p)
    K = ring or unramified_ring(ell, q, precision)
    zeta = K.generators.get(f"zeta{q}")
    if zeta is None:
        raise BadParameters(f"{K.name} does not contain zeta_{q}")
    xi = zeta if p == 2 else -zeta
    G = Quaternion(p)
    z, o = K.zero(), K.one()
    images = {G.a: [[xi, z], [z, xi.inverse()]], G.b: [[z, -o], [o, z]]}
    rep = Representation(G, K, images, label=f"Q{p} split")
    return rep, BilinearForm(K, standard_symplectic(K, 2), "alternating")


def norm_minus_one(U: RingDescriptor):
    """alpha in the unramified quadratic ring U with alpha * conj(alpha) = -1."""
    ell = U.prime
    k = U.residue_field
    a0 = next(x for x in k.elements() if not x.is_zero() and x ** (ell + 1) == k(-1))
    alpha0 = U.lift(a0)
    nrm = alpha0 * alpha0.conjugate()
    n_int = nrm.integral_coords()[0]
    s = hensel_root([1, 0, n_int], 1, ell, U.precision)
    return alpha0 * U.from_int(s.residue)


def quaternion_nonsplit(ell: int, p: int, precision: int | None = None):
    """Q_p on W = Q_l(zeta_q) viewed over Q_l, for l = -1 mod q."""
    _check_ell(ell, p)
    q = _q(p)
    if ell % q != q - 1:
        raise BadParameters(f"nonsplit construction needs l = -1 mod {q}; got l = {ell}")
    U = unramified_ring(ell, q, precision)
    K = base_ring(ell, U.precision)
    zeta = U.generators[f"zeta{q}"]
    xi = zeta if p == 2 else -zeta
    alpha = norm_minus_one(U)

    def coords(x):
        c = x.integral_coords()
        return [K.from_int(c[0]), K.from_int(c[1])]

    def matrix_of(fn):
        return la.from_columns([coords(fn(U.one())), coords(fn(U.u))])

    G = Quaternion(p)
    images = {G.a: matrix_of(lambda x: xi * x), G.b: matrix_of(lambda x: alpha * x.conjugate())}
    rep = Representation(G, K, images, label=f"Q{p} nonsplit")
    rep.alpha = alpha
    rep.unramified = U
    return rep, BilinearForm(K, standard_symplectic(K, 2), "alternating")


def quaternion_module(ell: int, p: int, precision: int | None = None):
    """The 2-dimensional symplectic Q_p-module over Q_l(zeta_q) or over Q_l."""
    q = _q(p)
    if ell % q == q - 1:
        return quaternion_nonsplit(ell, p, precision)
    return quaternion_split(ell, p, precision=precision)


def mu_ell_regular(ell: int, base: RingDescriptor | None = None):
    """mu_l acting on M = K(zeta_l) by multiplication, with f_2(x, y) = tr(x conj(y))."""
    K = base or base_ring(ell)
    M = CyclotomicAlgebra(K)
    G = Mu(ell)
    rep = Representation(G, K, {G.generators[0]: M.companion}, label=f"mu{ell} regular")
    rep.algebra = M
    return rep, BilinearForm(K, M.trace_form_gram(), "symmetric")


def trivial_rep(n: int, ring, group: FiniteGroup | None = None):
    group = group or Cyclic(1)
    one = la.identity(ring, n)
    rep = Representation(group, ring, {s: one for s in group.generators}, label=f"trivial {n}")
    form = BilinearForm(ring, standard_symplectic(ring, n), "alternating") if n % 2 == 0 and n else None
    return rep, form


def standard_rep(kind: str, *args, **kwargs):
    builders = {
        "quaternion_split": quaternion_split,
        "quaternion_nonsplit": quaternion_nonsplit,
        "mu_ell_regular": mu_ell_regular,
        "trivial": trivial_rep,
    }
    if kind not in builders:
        raise BadParameters(f"unknown representation kind {kind!r}")
    return builders[kind](*args, **kwargs)


def tensor_rep(r1: Representation, r2: Representation, f1: BilinearForm, f2: BilinearForm):
    """r1 (x) r2 as a representation of the product group, with f = f1 (x) f2."""
    if f1.symmetry != "alternating" or f2.symmetry != "symmetric":
        raise SymmetryMismatch(f"need alternating (x) symmetric, got {f1.symmetry} (x) {f2.symmetry}")
    if r1.ring is not r2.ring:
        raise BadParameters("tensor factors must share a ring")
    K = r1.ring
    G = DirectProduct([r1.group, r2.group])
    i1, i2 = la.identity(K, r1.dim), la.identity(K, r2.dim)
    images = {}
    for s in r1.group.generators:
        images[G.embed(0, s)] = la.kron(r1.images[s], i2)
    for s in r2.group.generators:
        images[G.embed(1, s)] = la.kron(i1, r2.images[s])
    rep = Representation(G, K, images, label=f"{r1.label} (x) {r2.label}")
    rep.factors = (r1, r2)
    form = BilinearForm(K, la.kron(f1.gram, f2.gram), "alternating")
    if not all(form.is_invariant(m) for m in images.values()):
        raise SymmetryMismatch("tensor form is not invariant")
    return rep, form


def direct_sum_rep(parts: Sequence[tuple]):
    reps = [r for r, _ in parts]
    if len(reps) == 1:
        return parts[0]
    G, K = reps[0].group, reps[0].ring
    if any(r.group is not G or r.ring is not K for r in reps):
        raise BadParameters("direct sum parts must share group and ring")
    images = {s: la.block_diag([r.images[s] for r in reps], K) for s in G.generators}
    blocks, start = [], 0
    for r, _ in parts:
        for b in r.decomposition:
            blocks.append(Block(start + b.start, b.dim, b.kind, None if b.partner is None else b.partner, b.label))
        start += r.dim
    rep = Representation(G, K, images, decomposition=blocks, label=" + ".join(r.label for r in reps))
    forms = [f for _, f in parts]
    symmetries = {f.symmetry for f in forms}
    if len(symmetries) != 1:
        raise SymmetryMismatch("direct sum parts carry forms of different symmetry")
    form = BilinearForm(K, la.block_diag([f.gram for f in forms], K), symmetries.pop())
    return rep, form


# ------------------------------------------------------------- lattices
def stable_lattice(rep: Representation, s0: Lattice) -> Lattice:
    """Smallest G-stable lattice containing s0 (equal to the sum of all g*s0)."""
    cur = s0
    while True:
        gens = cur.basis()
        for m in rep.images.values():
            gens = gens + la.columns(la.matmul(m, cur.basis_matrix()))
        nxt = Lattice.from_generators(rep.ring, gens)
        if nxt == cur:
            break
        cur = nxt
    assert is_stable(rep, cur)
    return cur


def is_stable(rep: Representation, t: Lattice) -> bool:
    return all(t.apply(m) == t for m in rep.images.values())


def char_poly(rep: Representation, g) -> list:
    return la.charpoly(rep.image(g), rep.ring)


def reduce_matrix(m: list, field: FiniteField) -> list:
    return [[x.residue() for x in row] for row in m]


def residue_images(rep: Representation, t: Lattice) -> dict:
    """Generator images on T / mT in T's basis."""
    b = t.basis_matrix()
    binv = la.inverse(b, rep.ring)
    k = rep.ring.residue_field
    return {s: reduce_matrix(la.matmul(binv, la.matmul(m, b)), k) for s, m in rep.images.items()}


# ---------------------------------------------------------------- meataxe
class _Echelon:
    def __init__(self, field, n):
        self.field, self.n = field, n
        self.rows: list = []
        self.pivots: list = []

    def reduce(self, v):
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            if not v[p].is_zero():
                c = v[p]
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        p = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if p is None:
            return False
        inv = v[p].inverse()
        self.rows.append([x * inv for x in v])
        self.pivots.append(p)
        return True


def spin(v, gens: Sequence[list], field) -> int:
    """Dimension of the smallest subspace containing v stable under gens."""
    n = len(v)
    ech = _Echelon(field, n)
    if not ech.add(v):
        return 0
    queue = [list(v)]
    while queue:
        w = queue.pop()
        for m in gens:
            u = la.matvec(m, w)
            if ech.add(u):
                queue.append(u)
                if len(ech.rows) == n:
                    return n
    return len(ech.rows)


def projective_points(basis: list, field):
    """One representative per line in the span of the basis vectors."""
    k = len(basis)
    elems = list(field.elements())
    nonzero = [x for x in elems if not x.is_zero()]
    one = field.one()
    for lead in range(k):
        for tail in itertools.product(elems, repeat=k - lead - 1):
            coeffs = [field.zero()] * lead + [one] + list(tail)
            yield [sum((c * b[i] for c, b in zip(coeffs, basis)), field.zero()) for i in range(len(basis[0]))]


def is_simple_matrices(gens: Sequence[list], field, seed: int = 0, bound: int = SIMPLE_SEARCH_BOUND) -> bool:
    """Norton's irreducibility test on the algebra generated by ``gens``."""
    n = len(gens[0])
    if n <= 1:
        return True
    rng = random.Random(seed)
    elems = list(field.elements())
    ident = la.identity(field, n)
    words = list(gens)
    for _ in range(64):
        # random algebra element from products of generators
        x, y = rng.choice(words), rng.choice(words)
        words.append(la.matmul(x, y))
        a = la.zeros(field, n)
        for w in words[-6:]:
            a = la.mat_add(a, la.mat_scale(rng.choice(elems), w))
        for lam in elems:
            theta = la.mat_sub(a, la.mat_scale(lam, ident))
            ker = la.nullspace(theta, field)
            if not ker or len(ker) == n:
                continue
            ker_t = la.nullspace(la.transpose(theta), field)
            if field.q ** len(ker) + field.q ** len(ker_t) > bound:
                continue
            gens_t = [la.transpose(g) for g in gens]
            if any(spin(v, gens, field) < n for v in projective_points(ker, field)):
                return False
            return all(spin(w, gens_t, field) == n for w in projective_points(ker_t, field))
    if field.q**n > bound:
        raise TooLarge(f"exhaustive invariant-subspace search over {field} in dimension {n} exceeds {bound}")
    basis = [list(r) for r in ident]
    return all(spin(v, gens, field) == n for v in projective_points(basis, field))


def is_simple_mod_m(rep: Representation, t: Lattice, seed: int = 0, bound: int = SIMPLE_SEARCH_BOUND) -> bool:
    imgs = residue_images(rep, t)
    return is_simple_matrices(list(imgs.values()), rep.ring.residue_field, seed, bound)
