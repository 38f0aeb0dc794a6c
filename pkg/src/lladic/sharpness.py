"""Counterexamples to perfect invariant pairings, certified by finite enumeration.

A setting bundles a representation V of G over K, a reference form f, a
reference stable lattice S, and the action of M = K(zeta_l) on V.  Every
G-stable lattice is eta^r S and every invariant form is f(delta x, y) with
delta in M^+, so perfectness reduces to a finite table of Smith exponents
indexed by (r, j) with delta = varpi^j, varpi = eta * conj(eta).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import linalg as la
from .cycalg import CyclotomicAlgebra
from .errors import BadParameters, OracleRefuted, PreconditionFailed, SearchSpaceTooLarge
from .ff import FiniteField, factor_mod
from .groups import DirectProduct, Mu, _is_prime
from .latmod import BilinearForm, Lattice, dual_lattice, snf
from .localring import base_ring, real_cyclotomic_ring, unramified_ring
from .replib import (
    Representation,
    direct_sum_rep,
    invariant_forms,
    is_stable,
    mu_ell_regular,
    quaternion_module,
    quaternion_split,
    stable_lattice,
    trivial_rep,
)

KINDS = ("Prop61", "Thm62", "Cor64", "Thm66", "Thm65Residue", "AbVar71")
ENUMERATION_BOUND = 10**6


@dataclass
class CounterexampleSetting:
    kind: str
    params: dict
    rep: Representation
    form: BilinearForm
    lattice: Lattice
    eta_action: list = field(repr=False)
    varpi_action: list = field(repr=False)
    r_window: int
    m_plus_degree: int
    symmetry: str
    algebra: CyclotomicAlgebra | None = field(repr=False, default=None)
    m_action: Callable | None = field(repr=False, default=None)
    form_space: list = field(repr=False, default_factory=list)
    core: "CounterexampleSetting | None" = field(repr=False, default=None)
    splitting: dict = field(repr=False, default_factory=dict)
    expect_obstruction: bool = True

    @property
    def ring(self):
        return self.rep.ring

    @property
    def group(self):
        return self.rep.group

    @property
    def setting_id(self) -> str:
        tail = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({tail})"

    def form_space_dimension(self) -> int:
        if not self.form_space:
            self.form_space = invariant_forms(self.rep, self.symmetry)
        return len(self.form_space)


# ------------------------------------------------------------ constructors
def _q(p: int) -> int:
    return 4 if p == 2 else p


def _check(ell: int, p: int | None = None):
    if not _is_prime(ell) or ell == 2:
        raise BadParameters(f"l must be an odd prime (got {ell})")
    if p is not None:
        if not _is_prime(p) or p == ell:
            raise BadParameters(f"p must be a prime different from l (got p={p}, l={ell})")
        if p > 3:
            raise BadParameters("only p in {2, 3} have a 2-dimensional quaternion model here")


def _m_plus_degree(alg: CyclotomicAlgebra) -> int:
    return 1 if alg.n == 2 and alg.base.kind == "real_cyclotomic" else alg.n // 2


def _cyclotomic_setting(kind, params, rep, form, alg, left_dim, symmetry):
    K = rep.ring
    ident = la.identity(K, left_dim)

    def m_action(x):
        return la.kron(ident, alg.mult_matrix(x))

    return CounterexampleSetting(
        kind=kind, params=params, rep=rep, form=form,
        lattice=Lattice.standard(K, rep.dim),
        eta_action=m_action(alg.eta), varpi_action=m_action(alg.varpi),
        r_window=alg.e_total, m_plus_degree=_m_plus_degree(alg),
        symmetry=symmetry, algebra=alg, m_action=m_action,
    )


def _tensor_with_mu(w_rep, w_form, ell):
    from .replib import tensor_rep

    mu, f2 = mu_ell_regular(ell, base=w_rep.ring)
    rep, form = tensor_rep(w_rep, mu, w_form, f2)
    return rep, form, mu.algebra


def build_counterexample(kind: str, ell: int = 5, p: int = 2, b: int = 0,
                         precision: int | None = None) -> CounterexampleSetting:
    if kind not in KINDS:
        raise BadParameters(f"unknown kind {kind!r}; expected one of {KINDS}")
    if kind == "Prop61":
        _check(ell)
        K = base_ring(ell, precision)
        rep, form = mu_ell_regular(ell, base=K)
        return _cyclotomic_setting(kind, {"l": ell}, rep, form, rep.algebra, 1, "symmetric")
    if kind == "Thm62":
        _check(ell, p)
        w_rep, w_form = quaternion_module(ell, p, precision)
        rep, form, alg = _tensor_with_mu(w_rep, w_form, ell)
        s = _cyclotomic_setting(kind, {"l": ell, "p": p}, rep, form, alg, 2, "alternating")
        s.params["construction"] = "nonsplit" if hasattr(w_rep, "alpha") else "split"
        return s
    if kind == "Thm66":
        _check(ell, p)
        F = unramified_ring(ell, _q(p), precision)
        K = real_cyclotomic_ring(F)
        w_rep, w_form = quaternion_split(ell, p, ring=K)
        rep, form, alg = _tensor_with_mu(w_rep, w_form, ell)
        return _cyclotomic_setting(kind, {"l": ell, "p": p}, rep, form, alg, 2, "alternating")
    if kind in ("Cor64", "AbVar71"):
        if b < 0:
            raise BadParameters("b must be non-negative")
        if kind == "Cor64" and b == 0:
            raise BadParameters("Cor64 needs a nonzero trivial summand (b >= 1)")
        core = build_counterexample("Thm62", ell, p, precision=precision)
        if b == 0:
            core.kind = kind
            core.params = {"l": ell, "p": p, "b": 0}
            return core
        return _split_setting(kind, core, b)
    raise BadParameters("Thm65Residue lives at the residue level; use no_residue_symplectic_embedding")


def _split_setting(kind: str, core: CounterexampleSetting, b: int) -> CounterexampleSetting:
    """U = V + (trivial 2b), with the projector tau onto the N-invariants."""
    K, G = core.ring, core.group
    triv, triv_form = trivial_rep(2 * b, K, group=G)
    rep, form = direct_sum_rep([(core.rep, core.form), (triv, triv_form)])
    n_sub = G.factor_subgroup(0)
    acc = la.zeros(K, rep.dim)
    for h in n_sub:
        acc = la.mat_add(acc, rep.image(h))
    tau = la.mat_scale(K.from_fraction(1, len(n_sub)), acc)
    setting = CounterexampleSetting(
        kind=kind, params={"l": core.params["l"], "p": core.params["p"], "b": b},
        rep=rep, form=form, lattice=Lattice.standard(K, rep.dim),
        eta_action=core.eta_action, varpi_action=core.varpi_action,
        r_window=core.r_window, m_plus_degree=core.m_plus_degree,
        symmetry="alternating", algebra=core.algebra, core=core,
    )
    setting.splitting = {"tau": tau, "v_dim": core.rep.dim, "w0_dim": 2 * b}
    return setting


def control_setting(setting: CounterexampleSetting) -> CounterexampleSetting:
    """The known-good case obtained by dropping the mu_l factor."""
    base = setting.core or setting
    K = base.ring
    if base.kind == "Prop61":
        rep, _ = trivial_rep(base.rep.dim, K)
        form = BilinearForm(K, la.identity(K, rep.dim), "symmetric")
    else:
        rep = base.rep.factors[0]
        form = BilinearForm(K, [[K.zero(), K.one()], [-K.one(), K.zero()]], "alternating")
    pi = la.mat_scale(K.pi, la.identity(K, rep.dim))
    return CounterexampleSetting(
        kind="control", params=dict(base.params, control=True), rep=rep, form=form,
        lattice=Lattice.standard(K, rep.dim), eta_action=pi, varpi_action=pi,
        r_window=1, m_plus_degree=1, symmetry=form.symmetry, expect_obstruction=False,
    )


# ------------------------------------------------------------------ oracle
@dataclass
class Cell:
    r: int
    j: int
    integral: bool
    exponents: list
    perfect: bool

    @property
    def det_valuation(self) -> int:
        return sum(self.exponents)


@dataclass
class ObstructionCertificate:
    setting_id: str
    kind: str
    params: dict
    table: list
    obstructed: bool
    precision: int
    varpi_det_valuation: int
    unit_checks: list = field(default_factory=list)
    mechanism: dict | None = None
    splitting: dict | None = None
    witness: Cell | None = None


class _Powers:
    """Cached integer powers of an invertible matrix."""

    def __init__(self, m: list, ring):
        self.ring = ring
        self.pos = {0: la.identity(ring, len(m)), 1: m}
        self.neg = {0: self.pos[0], 1: la.inverse(m, ring)}

    def __call__(self, k: int) -> list:
        table, base = (self.pos, self.pos[1]) if k >= 0 else (self.neg, self.neg[1])
        k = abs(k)
        top = max(table)
        while top < k:
            table[top + 1] = la.matmul(table[top], base)
            top += 1
        return table[k]


def cell_gram(gram: list, basis: list, delta: list) -> list:
    """Gram of f_delta(x, y) = f(delta x, y) on the columns of ``basis``."""
    db = la.matmul(delta, basis)
    return la.matmul(la.transpose(db), la.matmul(gram, basis))


def _cell(ring, n, r, j, g) -> Cell:
    v = int(la.min_valuation(g))
    integral = v >= 0
    shift = min(v, 0)
    scaled = g if shift == 0 else la.mat_scale(ring.pi ** (-shift), g)
    exps = [x + shift for x in snf(scaled, ring, transforms=False).exponents]
    perfect = integral and len(exps) == n and all(x == 0 for x in exps)
    return Cell(r, j, integral, list(exps), perfect)


def integrality_threshold(gram: list, basis: list, dpow: _Powers, ring, limit: int = 400) -> int:
    """Least j with f_{varpi^j} integral on the lattice spanned by ``basis``."""
    def ok(j):
        return la.min_valuation(cell_gram(gram, basis, dpow(j))) >= 0

    j = 0
    if ok(j):
        while ok(j - 1):
            j -= 1
            if j < -limit:
                raise PreconditionFailed("no integrality threshold found")
        return j
    while not ok(j):
        j += 1
        if j > limit:
            raise PreconditionFailed("no integrality threshold found")
    return j


def enumerate_cells(setting: CounterexampleSetting) -> list:
    ring, n = setting.ring, setting.rep.dim
    gram = setting.form.gram
    epow = _Powers(setting.eta_action, ring)
    dpow = _Powers(setting.varpi_action, ring)
    base = setting.lattice.basis_matrix()
    table = []
    for r in range(setting.r_window):
        br = la.matmul(epow(r), base)
        j0 = integrality_threshold(gram, br, dpow, ring)
        for j in (j0 - 1, j0, j0 + 1):
            table.append(_cell(ring, n, r, j, cell_gram(gram, br, dpow(j))))
    return table


def _random_m_plus_unit(setting: CounterexampleSetting, rng: random.Random) -> list:
    K, alg = setting.ring, setting.algebra
    theta = alg.add(alg.zeta, alg.power(alg.zeta, alg.ell - 1))
    while True:
        u = alg.element([0])
        for i in range(setting.m_plus_degree):
            u = alg.add(u, alg.scale(K.random_integral(rng, digits=3), alg.power(theta, i)))
        m = setting.m_action(u)
        if la.det(alg.mult_matrix(u), K).valuation() == 0:
            return m


def unit_invariance_checks(setting: CounterexampleSetting, cells: list, count: int = 10, seed: int = 0) -> list:
    """Smith exponents of f_{u delta} versus f_delta for random units u of O_{M+}."""
    if setting.algebra is None:
        return []
    rng = random.Random(seed)
    ring = setting.ring
    epow = _Powers(setting.eta_action, ring)
    dpow = _Powers(setting.varpi_action, ring)
    base = setting.lattice.basis_matrix()
    integral = [c for c in cells if c.integral]
    out = []
    for k in range(count):
        c = integral[k % len(integral)]
        br = la.matmul(epow(c.r), base)
        u = _random_m_plus_unit(setting, rng)
        g = cell_gram(setting.form.gram, br, la.matmul(u, dpow(c.j)))
        exps = list(snf(g, ring, transforms=False).exponents)
        out.append({"r": c.r, "j": c.j, "exponents": exps, "equal": exps == c.exponents})
    return out


def mechanism_check(setting: CounterexampleSetting) -> dict:
    """For the integral delta at r = 0: f_delta(eta^(l-2) S, S) lies in l O_K."""
    ring = setting.ring
    ell = ring.prime
    epow = _Powers(setting.eta_action, ring)
    dpow = _Powers(setting.varpi_action, ring)
    base = setting.lattice.basis_matrix()
    j0 = integrality_threshold(setting.form.gram, base, dpow, ring)
    left = la.matmul(dpow(j0), la.matmul(epow(ell - 2), base))
    g = la.matmul(la.transpose(left), la.matmul(setting.form.gram, base))
    v = la.min_valuation(g)
    return {"j": j0, "min_valuation": v, "target": ring.e, "holds": v >= ring.e}


def splitting_checks(setting: CounterexampleSetting, seed: int = 0) -> dict:
    """tau is idempotent, T = (1 - tau)T + tau T, and invariant forms kill T_1 x T_2."""
    ring = setting.ring
    tau = setting.splitting["tau"]
    v_dim = setting.splitting["v_dim"]
    n = setting.rep.dim
    one = la.identity(ring, n)
    idempotent = la.mat_eq(la.matmul(tau, tau), tau)
    expected = la.block_diag([la.zeros(ring, v_dim), la.identity(ring, n - v_dim)], ring)
    image_ok = la.mat_eq(tau, expected)
    rng = random.Random(seed)
    starts = [setting.lattice]
    gens = [[ring.random_integral(rng, digits=2) for _ in range(n)] for _ in range(n)]
    starts.append(stable_lattice(setting.rep, Lattice.from_generators(ring, gens)))
    vi, wi = range(v_dim), range(v_dim, n)
    decomposes = True
    for t in starts:
        bm = t.basis_matrix()
        p1 = la.submatrix(la.matmul(la.mat_sub(one, tau), bm), vi, range(n))
        p2 = la.submatrix(la.matmul(tau, bm), wi, range(n))
        t1 = Lattice.from_generators(ring, la.columns(p1))
        t2 = Lattice.from_generators(ring, la.columns(p2))
        joined = Lattice.from_basis_matrix(ring, la.block_diag([t1.basis_matrix(), t2.basis_matrix()], ring))
        decomposes &= joined == t and is_stable(setting.core.rep, t1)
    forms = setting.form_space or invariant_forms(setting.rep, "alternating")
    setting.form_space = forms
    orthogonal = all(la.is_zero_matrix(la.submatrix(g, vi, wi)) for g in forms)
    return {
        "idempotent": idempotent, "image_is_trivial_summand": image_ok,
        "lattices_decompose": decomposes, "lattices_checked": len(starts),
        "forms_checked": len(forms), "cross_terms_vanish": orthogonal,
        "holds": idempotent and image_ok and decomposes and orthogonal,
    }


def no_perfect_pairing_oracle(setting: CounterexampleSetting, unit_checks: int = 10, seed: int = 0) -> ObstructionCertificate:
    """Enumerate the (r, j) table; raise OracleRefuted on a perfect cell where none is expected."""
    split = None
    target = setting
    if setting.core is not None:
        split = splitting_checks(setting, seed)
        if not split["holds"]:
            raise PreconditionFailed(f"projector splitting failed: {split}")
        target = setting.core
    table = enumerate_cells(target)
    ring = target.ring
    dval = snf(target.varpi_action, ring, transforms=False).exponents
    witness = next((c for c in table if c.perfect), None)
    units = unit_invariance_checks(target, table, unit_checks, seed)
    mech = mechanism_check(target) if target.algebra is not None else None
    cert = ObstructionCertificate(
        setting.setting_id, setting.kind, dict(setting.params), table, witness is None,
        ring.precision, sum(dval), units, mech, split, witness,
    )
    if witness is not None and setting.expect_obstruction:
        raise OracleRefuted(f"perfect cell at r={witness.r}, j={witness.j}", witness=cert)
    if not all(u["equal"] for u in units):
        raise PreconditionFailed("Smith exponents changed under a unit of O_{M+}")
    return cert


def stable_lattice_exponent(setting: CounterexampleSetting, t: Lattice, span: int | None = None) -> int | None:
    """r with t = eta^r S, searching |r| <= span; None if t is not of that form."""
    span = span or 4 * setting.r_window
    epow = _Powers(setting.eta_action, setting.ring)
    for r in sorted(range(-span, span + 1), key=abs):
        if setting.lattice.apply(epow(r)) == t:
            return r
    return None


# -------------------------------------------------- inverse different
def inverse_different_containment(delta: list, alg: CyclotomicAlgebra) -> dict:
    """tr(delta O_M) in O_K implies tr(delta eta^(l-2) O_M) in l O_K, on the power basis."""
    K = alg.base
    basis = [alg._basis(i) for i in range(alg.n)]
    pre = [alg.trace(alg.mul(delta, z)).valuation() for z in basis]
    if any(v < 0 for v in pre):
        raise PreconditionFailed("tr(delta O_M) is not contained in O_K")
    twist = alg.mul(delta, alg.power(alg.eta, alg.ell - 2))
    vals = [alg.trace(alg.mul(twist, z)).valuation() for z in basis]
    target = K.e
    return {"valuations": vals, "target": target, "holds": all(v >= target for v in vals)}


def inverse_different_exponent(alg: CyclotomicAlgebra) -> int:
    """k with the trace dual of O_M equal to eta^k O_M; checked against 1 - [M:K]."""
    K = alg.base
    o_m = Lattice.standard(K, alg.n)
    f = BilinearForm(K, alg.trace_form_gram(), "symmetric")
    dual = dual_lattice(o_m, f)
    expected = 1 - alg.n
    target = o_m.apply(la.mat_pow(la.inverse(alg.mult_matrix(alg.eta), K), -expected, K))
    if dual != target:
        raise PreconditionFailed("trace dual of O_M is not the expected eta-power")
    return expected


# --------------------------------------------------- residue-level check
def _residue_matrix(m, field):
    """Reduce a matrix over an f = 1 ring into a field of characteristic l."""
    return [[field(x.residue().coeffs[0]) for x in row] for row in m]


def _extension(ell: int, degree: int) -> FiniteField:
    if degree == 1:
        return FiniteField(ell)
    for coeffs in itertools.product(range(ell), repeat=degree):
        poly = list(coeffs) + [1]
        if len(factor_mod(poly, ell)) == 1 and len(factor_mod(poly, ell)[0]) == degree + 1:
            return FiniteField(ell, poly)
    raise BadParameters(f"no irreducible polynomial of degree {degree} mod {ell}")


def _enumerate_degenerate(basis: list, field, bound: int) -> tuple[int, bool] | None:
    size = field.q ** len(basis)
    if size > bound:
        return None
    elems = list(field.elements())
    n = len(basis[0]) if basis else 0
    count = 0
    for coeffs in itertools.product(elems, repeat=len(basis)):
        g = la.zeros(field, n)
        for c, b in zip(coeffs, basis):
            if not c.is_zero():
                g = la.mat_add(g, la.mat_scale(c, b))
        if not la.det(g, field).is_zero():
            return count, False
        count += 1
    return count, True


def unipotent_symmetric_check(ell: int, extension_degree: int = 1) -> dict:
    """The unipotent [[1,1],[0,1]] fixes no nondegenerate symmetric form over F_l."""
    _check(ell)
    k = _extension(ell, extension_degree)
    G = Mu(ell)
    c = [[k.one(), k.one()], [k.zero(), k.one()]]
    rep = Representation(G, k, {G.generators[0]: c}, label="unipotent")
    basis = invariant_forms(rep, "symmetric")
    res = _enumerate_degenerate(basis, k, ENUMERATION_BOUND)
    return {"l": ell, "field_size": k.q, "solution_dim": len(basis), "enumerated": res[0],
            "all_degenerate": res[1]}


@dataclass
class ResidueCertificate:
    setting_id: str
    field_size: int
    solution_dim: int
    method: str
    enumerated: int
    all_degenerate: bool
    identity_1: bool
    identity_2: bool
    h_vanishes: bool
    w0_symmetric_dim: int
    group_name: str = ""
    residue_field: FiniteField | None = field(repr=False, default=None)
    forms: list = field(repr=False, default_factory=list)
    images: dict = field(repr=False, default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.all_degenerate and self.identity_1 and self.identity_2 and self.h_vanishes


def no_residue_symplectic_embedding(ell: int = 5, p: int = 2, extension_degree: int = 1,
                                    bound: int = ENUMERATION_BOUND, precision: int | None = None) -> ResidueCertificate:
    """Invariant alternating forms on W_0 + W_0 with c(x, y) = (x + y, y) are all degenerate."""
    _check(ell, p)
    w_rep, _ = quaternion_module(ell, p, precision)
    K = w_rep.ring
    if K.f != 1 and extension_degree != 1:
        raise BadParameters("field extensions are only configured over a prime residue field")
    k = _extension(ell, extension_degree) if K.f == 1 else K.residue_field
    t2 = w_rep.dim
    if t2 > 4:
        raise SearchSpaceTooLarge("dim W must be at most 4")
    N = w_rep.group
    G = DirectProduct([N, Mu(ell)])
    images = {}
    for s in N.generators:
        m = _residue_matrix(w_rep.images[s], k) if K.f == 1 else [[x.residue() for x in row] for row in w_rep.images[s]]
        images[G.embed(0, s)] = la.block_diag([m, m], k)
    ident = la.identity(k, t2)
    c = la.block_diag([ident, ident], k)
    for i in range(t2):
        c[i][t2 + i] = k.one()
    images[G.embed(1, 1)] = c
    rep = Representation(G, k, images, label="W0 + W0 twisted")
    w0 = Representation(N, k, {s: la.submatrix(images[G.embed(0, s)], range(t2), range(t2)) for s in N.generators})
    basis = invariant_forms(rep, "alternating")
    top, bottom = range(t2), range(t2, 2 * t2)
    id1 = all(la.is_zero_matrix(la.submatrix(g, top, top)) for g in basis)
    id2, h_zero = True, True
    for g in basis:
        h = la.submatrix(g, top, bottom)
        id2 &= la.mat_eq(h, la.transpose(h))
        h_zero &= la.is_zero_matrix(h)
    res = _enumerate_degenerate(basis, k, bound)
    if res is None:
        method, count, degenerate = "structural", 0, id1 and h_zero
    else:
        method, (count, degenerate) = "enumeration", res
    return ResidueCertificate(
        f"Thm65Residue(l={ell},p={p},L=F_{k.q})", k.q, len(basis), method, count, degenerate,
        id1, id2, h_zero, len(invariant_forms(w0, "symmetric")), G.name, k, basis, images,
    )


# ---------------------------------------------------------- abelian varieties
@dataclass
class AbVarCertificate:
    p: int
    ell: int
    b: int
    r: int
    d: int
    oracle: ObstructionCertificate
    claim: str
    setting: CounterexampleSetting = field(repr=False, default=None)

    @property
    def verified(self) -> bool:
        return self.oracle.obstructed


def abvar_scenario(p: int, ell: int, b: int = 0, precision: int | None = None) -> AbVarCertificate:
    if p not in (2, 3):
        raise BadParameters("only p in {2, 3} are realizable here")
    if not _is_prime(ell) or (p * (p - 1)) % ell == 0 or ell == 2:
        raise BadParameters(f"need an odd prime l not dividing p(p-1) (got l={ell}, p={p})")
    if b < 0:
        raise BadParameters("b must be non-negative")
    r = 1 if p == 2 else (p - 1) // 2
    d = r * (ell - 1) + b
    setting = build_counterexample("AbVar71", ell, p, b, precision)
    cert = no_perfect_pairing_oracle(setting)
    claim = (
        f"every perfect alternating G-invariant Z_{ell}-pairing on a stable lattice is impossible, "
        f"hence every E^L with {ell} not dividing chi(L) is impossible, "
        f"hence {ell} | chi(L) and {ell} | deg(polarization)"
    )
    return AbVarCertificate(p, ell, b, r, d, cert, claim, setting)
