import random

import pytest

from lladic import linalg as la
from lladic.errors import BadParameters, DegenerateBlock, DegenerateForm, HypothesesUnmet
from lladic.groups import Cyclic
from lladic.latmod import BilinearForm, Lattice, dual_lattice, is_perfect
from lladic.localring import base_ring
from lladic.replib import Block, Representation, quaternion_split, standard_symplectic
from lladic.sharpness import build_counterexample
from lladic.symplectify import (
    cyclotomic_sign_representation,
    normalize_form,
    perfect_pairing,
    reduce_embedding,
    rigidity_check,
    stabilize_lattice,
    trace_pairing_gram,
)
from lladic.cycalg import CyclotomicAlgebra

PREC = 16
K5 = base_ring(5, PREC)


@pytest.fixture(scope="module")
def thm62():
    return build_counterexample("Thm62", 5, 2, precision=PREC)


def test_normalize_form():
    s = Lattice.standard(K5, 2)
    f = BilinearForm(K5, standard_symplectic(K5, 2), "alternating")
    assert normalize_form(f, s) is f
    g = BilinearForm(K5, la.mat_scale(K5.from_int(5), f.gram), "alternating")
    assert la.mat_eq(normalize_form(g, s).gram, f.gram)
    with pytest.raises(DegenerateForm):
        normalize_form(BilinearForm(K5, la.zeros(K5, 2), "alternating", check=False), s)


def test_normalize_recovers_trace_pairing_scaling():
    # the raw pairing tr(x eta conj(y)) has minimal valuation 1 on O_M; its normalization divides by 5
    alg = CyclotomicAlgebra(K5)
    raw = BilinearForm(K5, alg.trace_form_gram(twist=alg.eta), "alternating")
    norm = normalize_form(raw, Lattice.standard(K5, alg.n))
    assert la.mat_eq(norm.gram, trace_pairing_gram(K5))


def test_stabilize_perfect_input_is_fixed():
    s = Lattice.standard(K5, 4)
    f = BilinearForm(K5, standard_symplectic(K5, 4), "alternating")
    sp = stabilize_lattice(s, f)
    assert sp.lattice == s and sp.iterations == 0 and sp.dual_index_exponents == [0] * 4


def test_stabilize_thm62_setting(thm62):
    sp = stabilize_lattice(thm62.lattice, thm62.form, thm62.rep)
    t, f = sp.lattice, sp.form
    assert t.contains(dual_lattice(t, f).scale(1))
    assert set(sp.dual_index_exponents) <= {0, 1} and 1 in sp.dual_index_exponents
    assert la.min_valuation(f.gram_on(t)) == 0


def test_stabilize_grows_from_lattice_stable_under_the_quaternion_factor(thm62):
    # scaling three of the four power-basis directions of O_M by 5 keeps the Q_2 action
    # but breaks mu_5 stability; one step of the loop already reaches the fixpoint
    K = thm62.ring
    d = la.block_diag([la.identity(K, 1), la.mat_scale(K.from_int(5), la.identity(K, 3))], K)
    start = thm62.lattice.apply(la.kron(la.identity(K, 2), d))
    sp = stabilize_lattice(start, thm62.form)
    assert sp.iterations >= 1 and sp.lattice != start
    assert sp.iterations <= sum(sp.initial_exponents)
    assert all(b.contains(a) for a, b in zip(sp.chain, sp.chain[1:]))


def test_stabilize_commutes_with_scaling(thm62):
    f = thm62.form
    sp = stabilize_lattice(thm62.lattice, f)
    scaled_f = BilinearForm(f.ring, la.mat_scale(f.ring.pi ** -2, f.gram), f.symmetry)
    sp2 = stabilize_lattice(thm62.lattice.scale(1), scaled_f)
    assert sp2.lattice == sp.lattice.scale(1)


def test_stabilize_rejects_unstable_start(thm62):
    K = thm62.ring
    gens = [[K.from_int(1 if i == j else (5 if j == 0 else 0)) for j in range(8)] for i in range(8)]
    start = Lattice.from_basis_matrix(K, la.mat_scale(K.from_int(5), la.identity(K, 8)))
    start = Lattice.from_generators(K, la.columns(gens)[:1] + start.basis())
    with pytest.raises(BadParameters):
        stabilize_lattice(start, thm62.form, thm62.rep)


def test_reduce_embedding_q2_alone():
    rep, f = quaternion_split(5, 2, precision=PREC)
    sp = stabilize_lattice(Lattice.standard(rep.ring, 2), f, rep)
    emb = reduce_embedding(sp, rep)
    assert emb.block_dims == (2, 0)
    assert emb.injective and emb.charpolys_match and emb.forms_nondegenerate
    g = rep.group
    assert len(emb.charpoly_table) == g.order
    for x in g:
        for y in g:
            assert la.mat_eq(emb.residue_images[g.mul(x, y)], la.matmul(emb.residue_images[x], emb.residue_images[y]))


def test_reduce_embedding_thm62(thm62):
    sp = stabilize_lattice(thm62.lattice, thm62.form, thm62.rep)
    emb = reduce_embedding(sp, thm62.rep)
    assert sum(emb.block_dims) == 8
    assert emb.injective and emb.hypotheses_met
    assert emb.charpolys_match and emb.forms_nondegenerate and emb.symmetry_ok
    g = thm62.group
    for x in g:
        for y in g:
            assert la.mat_eq(emb.residue_images[g.mul(x, y)], la.matmul(emb.residue_images[x], emb.residue_images[y]))


def test_reduce_embedding_real_base_flags_hypotheses_and_finds_mu_kernel():
    s = build_counterexample("Thm66", 5, 2, precision=PREC)
    sp = stabilize_lattice(s.lattice, s.form, s.rep)
    emb = reduce_embedding(sp, s.rep)
    assert not emb.hypotheses_met
    assert emb.charpolys_match and emb.forms_nondegenerate
    # the mu_5 factor acts trivially on both residue blocks
    assert sorted(emb.kernel) == sorted(s.group.factor_subgroup(1))


def test_reduce_embedding_trivial_group():
    K = K5
    rep = Representation(Cyclic(1), K, {0: la.identity(K, 2)})
    f = BilinearForm(K, standard_symplectic(K, 2), "alternating")
    emb = reduce_embedding(stabilize_lattice(Lattice.standard(K, 2), f, rep), rep)
    assert emb.injective and emb.forms_nondegenerate


def test_rigidity_identity_passes():
    assert rigidity_check(la.identity(K5, 3), 1, "a", K5).passed


def test_rigidity_flags_unmet_hypotheses():
    K11 = base_ring(11, PREC)
    # companion matrix of x^4 + x^3 + x^2 + x + 1
    comp = [[K11.from_int(v) for v in row] for row in
            [[0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]]
    with pytest.raises(HypothesesUnmet):
        rigidity_check(comp, 5, "a", K11)
    with pytest.raises(HypothesesUnmet):
        rigidity_check(comp, 5, "b", K11)
    with pytest.raises(BadParameters):
        rigidity_check(comp, 3, "a", K11)


def test_rigidity_detects_nonidentity_under_broken_precondition():
    # -1 has order 2, and -1 - 1 = -2 is a unit mod 5: hypotheses fail, no claim is made
    m = la.mat_neg(la.identity(K5, 2))
    with pytest.raises(HypothesesUnmet):
        rigidity_check(m, 2, "b", K5)


def test_pairing_q2():
    rep, f = quaternion_split(5, 2, precision=PREC)
    res = perfect_pairing(rep, f)
    assert res.perfect and res.hypotheses_met and res.invariant


@pytest.mark.parametrize("ell", [5, 11])
def test_pairing_cyclotomic_branch(ell):
    rep, f = cyclotomic_sign_representation(ell, base_ring(ell, PREC))
    res = perfect_pairing(rep, f)
    assert res.perfect and res.steps == ["trace pairing"]
    assert is_perfect(res.lattice, res.form).perfect


def test_pairing_hyperbolic_plane_from_isotropic_lines():
    K = K5
    rep = Representation(Cyclic(1), K, {0: la.identity(K, 2)},
                         decomposition=[Block(0, 1, "isotropic", 1), Block(1, 1, "isotropic", 0)])
    f = BilinearForm(K, la.mat_scale(K.from_int(25), standard_symplectic(K, 2)), "alternating")
    res = perfect_pairing(rep, f)
    assert res.perfect and res.steps == ["isotropic pair"]


def test_pairing_reports_failure_without_raising(thm62):
    res = perfect_pairing(thm62.rep, thm62.form)
    assert not res.hypotheses_met and not res.perfect


def test_pairing_rejects_bad_decomposition():
    rep, f = quaternion_split(5, 2, precision=PREC)
    with pytest.raises(DegenerateBlock):
        perfect_pairing(rep, f, [Block(0, 1)])


@pytest.mark.parametrize("symmetry", ["hermitian", "skew-hermitian"])
def test_hermitian_variant_over_unramified_quadratic_layer(symmetry):
    from lladic.localring import make_ring

    K = make_ring("unr(7,4)", PREC)
    z = K.generators["zeta4"]
    g = Cyclic(4)
    rep = Representation(g, K, {g.generators[0]: la.mat_scale(z, la.identity(K, 2))})
    if symmetry == "hermitian":
        gram = [[K.one(), K.zero()], [K.zero(), K.from_int(49)]]
    else:
        # conj(zeta_4) = -zeta_4, so this Gram is skew-hermitian
        gram = [[K.zero(), z], [z, K.zero()]]
    f = BilinearForm(K, gram, symmetry)
    sp = stabilize_lattice(Lattice.standard(K, 2), f, rep)
    assert set(sp.dual_index_exponents) <= {0, 1}
    emb = reduce_embedding(sp, rep)
    assert emb.injective and emb.symmetry_ok and emb.forms_nondegenerate and emb.charpolys_match
