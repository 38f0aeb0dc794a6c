"""Perfect pairings on stable lattices, the stabilization loop, and residue embeddings.

``stabilize_lattice`` iterates ``S <- S + (pi^-1 S cap pi S*)`` to a fixpoint
``T`` with ``pi T* <= T``.  ``reduce_embedding`` then reads off the action of
G on ``T / m T*`` and ``T* / T`` together with the reduced forms.
``perfect_pairing`` assembles a perfect invariant pairing from a supplied
decomposition into simple blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .cycalg import CyclotomicAlgebra
from .errors import (
    BadParameters,
    DegenerateBlock,
    DegenerateForm,
    HypothesesUnmet,
    RigidityViolation,
)
from .groups import Cyclic, DirectProduct, Mu
from .localring import base_ring
from .latmod import BilinearForm, Lattice, dual_lattice, is_perfect, lattice_intersect, lattice_sum, snf
from .replib import Block, Representation, is_stable, stable_lattice


# ------------------------------------------------------------ normalization
def normalize_form(f: BilinearForm, s: Lattice) -> BilinearForm:
    """Rescale f by a power of pi so that f(S, S) = O_K."""
    if la.det(f.gram, f.ring).is_zero():
        raise DegenerateForm("cannot normalize a degenerate form")
    v = la.min_valuation(f.gram_on(s))
    if v == 0:
        return f
    return BilinearForm(f.ring, la.mat_scale(f.ring.pi ** (-int(v)), f.gram), f.symmetry, check=False)


# ------------------------------------------------------------ stabilization
@dataclass
class StabilizedPair:
    lattice: Lattice
    form: BilinearForm
    dual_index_exponents: list
    iterations: int
    initial: Lattice
    initial_exponents: list
    chain: list = field(repr=False, default_factory=list)

    @property
    def dual(self) -> Lattice:
        return dual_lattice(self.lattice, self.form)


def stabilize_lattice(s: Lattice, f: BilinearForm, rep: Representation | None = None) -> StabilizedPair:
    if rep is not None and not is_stable(rep, s):
        raise BadParameters("starting lattice is not G-stable")
    f = normalize_form(f, s)
    s_dual = dual_lattice(s, f)
    init_exps = sorted(s_dual.index_exponents(s))
    bound = sum(init_exps)
    chain = [s]
    cur, cur_dual = s, s_dual
    while True:
        nxt = lattice_sum(cur, lattice_intersect(cur.scale(-1), cur_dual.scale(1)))
        if nxt == cur:
            break
        chain.append(nxt)
        cur = nxt
        cur_dual = dual_lattice(cur, f)
        if len(chain) - 1 > bound:
            raise AssertionError("stabilization exceeded its iteration bound")
    t, t_dual = cur, cur_dual
    exps = sorted(t_dual.index_exponents(t))
    assert t.contains(t_dual.scale(1)), "pi T* is not contained in T"
    assert all(e in (0, 1) for e in exps)
    assert all(b.contains(a) for a, b in zip(chain, chain[1:])) and s_dual.contains(t)
    if rep is not None:
        assert is_stable(rep, t)
    return StabilizedPair(t, f, exps, len(chain) - 1, s, init_exps, chain)


# -------------------------------------------------------------- rigidity
@dataclass
class RigidityResult:
    passed: bool
    witness: tuple | None
    mode: str


def rigidity_check(a: list, order: int, mode: str, ring) -> RigidityResult:
    """If A has finite order and is congruent to 1 as required, A must be 1."""
    if mode not in ("a", "b"):
        raise BadParameters("mode must be 'a' or 'b'")
    n = len(a)
    one = la.identity(ring, n)
    if not la.mat_eq(la.mat_pow(a, order, ring), one):
        raise BadParameters(f"A^{order} is not the identity")
    if la.min_valuation(a) < 0:
        raise HypothesesUnmet("A is not an endomorphism of the standard lattice")
    e, ell = ring.e, ring.prime
    d = la.mat_sub(a, one)
    if mode == "a":
        if not 2 * e < ell - 1:
            raise HypothesesUnmet(f"mode (a) needs 2e < l - 1 (e={e}, l={ell})")
        if la.min_valuation(la.matmul(d, d)) < 1:
            raise HypothesesUnmet("(A - 1)^2 is not in m End(S)")
    else:
        if not e < ell - 1:
            raise HypothesesUnmet(f"mode (b) needs e < l - 1 (e={e}, l={ell})")
        if la.min_valuation(d) < 1:
            raise HypothesesUnmet("A - 1 is not in m End(S)")
    for i in range(n):
        for j in range(n):
            if not d[i][j].is_zero():
                return RigidityResult(False, (i, j), mode)
    return RigidityResult(True, None, mode)


# ------------------------------------------------------- residue embedding
@dataclass
class ResidueEmbedding:
    group: object
    block_dims: tuple
    residue_images: dict = field(repr=False)
    residue_forms: tuple = field(repr=False)
    charpoly_table: dict = field(repr=False)
    kernel: list
    injective: bool
    hypotheses_met: bool
    charpolys_match: bool
    forms_nondegenerate: bool
    symmetry_ok: bool
    change_of_basis: list = field(repr=False, default=None)


def _residue_symmetry_ok(m: list, symmetry: str, field_) -> bool:
    if not m:
        return True
    mt = la.transpose(m)
    if symmetry == "symmetric":
        return la.mat_eq(mt, m)
    if symmetry == "alternating":
        return la.mat_eq(mt, la.mat_neg(m)) and all(m[i][i].is_zero() for i in range(len(m)))
    frob = la.mat_map(field_.frobenius, m)
    target = frob if symmetry == "hermitian" else la.mat_neg(frob)
    return la.mat_eq(mt, target)


def residue_charpoly(m: list, field_) -> list:
    return la.charpoly(m, field_)


def reduce_embedding(sp: StabilizedPair, rep: Representation) -> ResidueEmbedding:
    ring = rep.ring
    k = ring.residue_field
    t, f = sp.lattice, sp.form
    t_dual = dual_lattice(t, f)
    bd = t_dual.basis_matrix()
    x = la.matmul(la.inverse(bd, ring), t.basis_matrix())
    res = elementary_divisors_with_left(x, ring)
    exps, left = res
    w = la.matmul(bd, la.inverse(left, ring))
    winv = la.inverse(w, ring)
    zero_idx = [i for i, d in enumerate(exps) if d == 0]
    one_idx = [i for i, d in enumerate(exps) if d == 1]
    gw = f.gram_on(w)

    def reduce(m):
        return [[y.residue() for y in row] for row in m]

    f_bar = reduce(la.submatrix(gw, zero_idx, zero_idx))
    f_tilde = reduce(la.mat_scale(ring.pi, la.submatrix(gw, one_idx, one_idx)))
    images, table = {}, {}
    match = True
    for g in rep.group.elements:
        a = la.matmul(winv, la.matmul(rep.image(g), w))
        blocks = [reduce(la.submatrix(a, idx, idx)) for idx in (zero_idx, one_idx) if idx]
        psi = la.block_diag(blocks, k)
        images[g] = psi
        cp = residue_charpoly(psi, k)
        table[g] = cp
        expected = [c.residue() for c in la.charpoly(rep.image(g), ring)]
        if cp != expected:
            match = False
    ident = la.identity(k, rep.dim)
    kernel = [g for g in rep.group.elements if la.mat_eq(images[g], ident)]
    injective = kernel == [rep.group.identity]
    nondeg = all(not la.det(m, k).is_zero() for m in (f_bar, f_tilde) if m)
    sym_ok = _residue_symmetry_ok(f_bar, f.symmetry, k) and _residue_symmetry_ok(f_tilde, f.symmetry, k)
    hyp = 2 * ring.e < ring.prime - 1
    if hyp and not injective:
        raise RigidityViolation(f"nontrivial kernel {kernel[1:]} although 2e < l - 1")
    return ResidueEmbedding(
        rep.group, (len(zero_idx), len(one_idx)), images, (f_bar, f_tilde), table,
        kernel, injective, hyp, match, nondeg, sym_ok, w,
    )


def elementary_divisors_with_left(x: list, ring) -> tuple:
    """Exponents and a left transform L with L X R diagonal.

    The columns of ``bd @ L^-1`` form a basis of T* adapted to T.
    """
    res = snf(x, ring)
    if len(res.exponents) != len(x):
        raise DegenerateForm("T has lower rank than T*")
    return res.exponents, res.left


# ------------------------------------------------------ perfect pairings
@dataclass
class PairingResult:
    lattice: Lattice
    form: BilinearForm
    perfect: bool
    exponents: list
    hypotheses_met: bool
    invariant: bool
    steps: list


def _solve_in_span(b: list, y: list, ring) -> list:
    """C with B C = Y for B of full column rank; DegenerateBlock if Y leaves the span."""
    n, k = la.shape(b)
    aug = la.hstack(b, y)
    red, piv = la.rref(aug, ring)
    if piv[:k] != list(range(k)) or any(p >= k for p in piv):
        raise DegenerateBlock("block is not invariant under the group")
    return [row[k:] for row in red[:k]]


def _restricted(rep: Representation, b: list) -> dict:
    return {s: _solve_in_span(b, la.matmul(m, b), rep.ring) for s, m in rep.images.items()}


def _lattice_in_block(rep: Representation, b: list) -> list:
    """Basis (in ambient coordinates) of a G-stable lattice inside span(b)."""
    ring = rep.ring
    k = la.shape(b)[1]
    images = _restricted(rep, b)
    sub = Representation(rep.group, ring, images)
    t = stable_lattice(sub, Lattice.standard(ring, k))
    return la.matmul(b, t.basis_matrix())


def _project_off(f: BilinearForm, wb: list, vb: list) -> list:
    """Project columns of vb onto the f-orthogonal complement of span(wb)."""
    ring = f.ring
    gw = la.matmul(la.transpose(wb), la.matmul(f.gram, wb))
    rhs = la.matmul(la.transpose(wb), la.matmul(f.gram, vb))
    coeff = la.solve(gw, rhs, ring)
    return la.mat_sub(vb, la.matmul(wb, coeff))


def trace_pairing_gram(ring) -> list:
    """Gram of pi_K^-1 tr(x eta conj(y)) on the power basis of O_K[zeta_l]."""
    alg = CyclotomicAlgebra(ring)
    return la.mat_scale(ring.pi.inverse(), alg.trace_form_gram(twist=alg.eta))


def perfect_pairing(rep: Representation, f: BilinearForm, blocks: Sequence[Block] | None = None) -> PairingResult:
    """Perfect alternating G-invariant pairing on a stable lattice, by block induction."""
    ring = rep.ring
    n = rep.dim
    blocks = list(blocks or rep.decomposition)
    if sum(b.dim for b in blocks) != n:
        raise DegenerateBlock("block dimensions do not sum to the dimension")
    if f.symmetry != "alternating":
        raise BadParameters("perfect_pairing expects an alternating form")
    d, e = n // 2, ring.e
    hyp = ring.prime > d * e + 1 or d == 1
    ident = la.identity(ring, n)
    pending = [(la.submatrix(ident, range(n), blk.indices), blk.kind) for blk in blocks]
    pieces, steps = [], []
    while pending:
        nondeg = next((i for i, (b, _) in enumerate(pending) if not la.is_zero_matrix(f.gram_on(b))), None)
        if nondeg is not None:
            b, kind = pending.pop(nondeg)
            if kind == "cyclotomic":
                tb = b
                gram = trace_pairing_gram(ring)
                steps.append("trace pairing")
            else:
                tb = _lattice_in_block(rep, b)
                g = f.gram_on(tb)
                v = la.min_valuation(g)
                gram = la.mat_scale(ring.pi ** (-int(v)), g)
                steps.append("simple block")
            pieces.append((tb, gram))
            pending = [(_project_off(f, b, vb), kd) for vb, kd in pending]
            continue
        b1, _ = pending.pop(0)
        j = next((i for i, (b, _) in enumerate(pending) if not la.is_zero_matrix(la.matmul(la.transpose(b1), la.matmul(f.gram, b)))), None)
        if j is None:
            raise DegenerateBlock("isotropic block pairs trivially with every other block")
        bj, _ = pending.pop(j)
        t1 = _lattice_in_block(rep, b1)
        c = la.matmul(la.transpose(t1), la.matmul(f.gram, bj))
        if la.shape(c)[0] != la.shape(c)[1] or la.det(c, ring).is_zero():
            raise DegenerateBlock("paired blocks do not pair nondegenerately")
        tj = la.matmul(bj, la.inverse(c, ring))
        both = la.hstack(t1, tj)
        pieces.append((both, f.gram_on(both)))
        steps.append("isotropic pair")
        pending = [(_project_off(f, both, vb), kd) for vb, kd in pending]
    basis = _hcat([p[0] for p in pieces])
    gblock = la.block_diag([p[1] for p in pieces], ring)
    binv = la.inverse(basis, ring)
    gram = la.matmul(la.transpose(binv), la.matmul(gblock, binv))
    form = BilinearForm(ring, gram, "alternating", check=False)
    lattice = Lattice.from_basis_matrix(ring, basis)
    invariant = all(form.is_invariant(m) for m in rep.all_images.values()) and is_stable(rep, lattice)
    cert = is_perfect(lattice, form)
    return PairingResult(lattice, form, cert.perfect and invariant, cert.exponents, hyp, invariant, steps)


def _hcat(mats: list) -> list:
    out = mats[0]
    for m in mats[1:]:
        out = la.hstack(out, m)
    return out


def cyclotomic_sign_representation(ell: int, base=None):
    """mu_l x {+-1} acting on K(zeta_l) by multiplication, with the cyclotomic block tag."""
    K = base or base_ring(ell)
    alg = CyclotomicAlgebra(K)
    G = DirectProduct([Mu(ell), Cyclic(2)])
    minus = la.mat_neg(la.identity(K, alg.n))
    images = {G.embed(0, 1): alg.companion, G.embed(1, 1): minus}
    rep = Representation(G, K, images, decomposition=[Block(0, alg.n, "cyclotomic")], label=f"mu{ell} x +-1")
    rep.algebra = alg
    form = BilinearForm(K, alg.trace_form_gram(twist=alg.eta), "alternating")
    return rep, form
