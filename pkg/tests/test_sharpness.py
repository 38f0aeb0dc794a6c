import random

import pytest

from lladic import linalg as la
from lladic.cycalg import CyclotomicAlgebra
from lladic.errors import BadParameters, OracleRefuted, PreconditionFailed
from lladic.localring import base_ring
from lladic.latmod import BilinearForm, Lattice, is_perfect
from lladic.replib import is_stable, stable_lattice
from lladic.sharpness import (
    _Powers,
    abvar_scenario,
    build_counterexample,
    control_setting,
    enumerate_cells,
    inverse_different_containment,
    inverse_different_exponent,
    no_perfect_pairing_oracle,
    no_residue_symplectic_embedding,
    stable_lattice_exponent,
    unipotent_symmetric_check,
)

PREC = 16


@pytest.fixture(scope="module")
def thm62():
    return build_counterexample("Thm62", 5, 2, precision=PREC)


@pytest.fixture(scope="module")
def thm62_cert(thm62):
    return no_perfect_pairing_oracle(thm62)


def test_setting_shapes(thm62):
    assert thm62.rep.dim == 8 and thm62.m_plus_degree == 2
    assert thm62.r_window == 4
    prop = build_counterexample("Prop61", 5, precision=PREC)
    assert prop.rep.dim == 4 and prop.symmetry == "symmetric"
    t66 = build_counterexample("Thm66", 5, 2, precision=PREC)
    assert t66.ring.e == 2 and t66.rep.dim == 4 and t66.m_plus_degree == 1


@pytest.mark.parametrize("kind", ["Prop61", "Thm62", "Thm66"])
def test_invariant_form_space_matches_real_subfield_degree(kind):
    s = build_counterexample(kind, 5, 2, precision=PREC)
    assert s.form_space_dimension() == s.m_plus_degree


def test_thm62_table(thm62_cert):
    cert = thm62_cert
    assert cert.obstructed and cert.witness is None
    assert len(cert.table) == 3 * 4
    for c in cert.table:
        if c.integral:
            assert not c.perfect and c.det_valuation > 0
    assert [c.integral for c in cert.table[:3]] == [False, True, True]
    assert cert.varpi_det_valuation > 0
    assert cert.mechanism["holds"]
    assert all(u["equal"] for u in cert.unit_checks)


@pytest.mark.parametrize("kind,ell", [("Prop61", 5), ("Prop61", 7), ("Thm66", 5), ("Thm62", 7)])
def test_other_obstructions(kind, ell):
    cert = no_perfect_pairing_oracle(build_counterexample(kind, ell, 2, precision=PREC), unit_checks=3)
    assert cert.obstructed and cert.mechanism["holds"]


@pytest.mark.parametrize("kind", ["Prop61", "Thm62", "Thm66"])
def test_controls_find_perfect_cell(kind):
    ctl = control_setting(build_counterexample(kind, 5, 2, precision=PREC))
    cert = no_perfect_pairing_oracle(ctl)
    assert not cert.obstructed
    assert (cert.witness.r, cert.witness.j) == (0, 0)


def test_oracle_raises_when_expectation_is_wrong():
    ctl = control_setting(build_counterexample("Thm62", 5, 2, precision=PREC))
    ctl.expect_obstruction = True
    with pytest.raises(OracleRefuted) as info:
        no_perfect_pairing_oracle(ctl)
    assert info.value.witness.witness.perfect


def test_every_stable_lattice_is_an_eta_power(thm62):
    rng = random.Random(3)
    K, n = thm62.ring, thm62.rep.dim
    for _ in range(3):
        gens = [[K.random_integral(rng, digits=2) for _ in range(n)] for _ in range(2)]
        gens += la.columns(la.mat_scale(K.pi ** 3, la.identity(K, n)))
        t = stable_lattice(thm62.rep, Lattice.from_generators(K, gens))
        assert is_stable(thm62.rep, t)
        assert stable_lattice_exponent(thm62, t) is not None


def test_table_cells_agree_with_direct_perfectness_check(thm62, thm62_cert):
    K = thm62.ring
    epow, dpow = _Powers(thm62.eta_action, K), _Powers(thm62.varpi_action, K)
    assert stable_lattice_exponent(thm62, thm62.lattice.apply(epow(5))) == 5
    for c in thm62_cert.table:
        if c.integral:
            gram = la.matmul(la.transpose(dpow(c.j)), thm62.form.gram)
            form = BilinearForm(K, gram, "alternating")
            res = is_perfect(thm62.lattice.apply(epow(c.r)), form)
            assert not res.perfect


@pytest.mark.parametrize("b", [1, 2])
def test_cor64_splitting(b):
    s = build_counterexample("Cor64", 5, 2, b, precision=PREC)
    cert = no_perfect_pairing_oracle(s, unit_checks=2)
    sp = cert.splitting
    assert sp["holds"] and sp["idempotent"] and sp["cross_terms_vanish"]
    assert sp["forms_checked"] == 2 + (2 * b) * (2 * b - 1) // 2
    assert cert.obstructed


def test_cor64_needs_trivial_summand():
    with pytest.raises(BadParameters):
        build_counterexample("Cor64", 5, 2, 0)


@pytest.mark.parametrize("ell,p,deg", [(5, 2, 1), (7, 2, 1), (5, 3, 1), (5, 2, 2)])
def test_residue_check(ell, p, deg):
    cert = no_residue_symplectic_embedding(ell, p, deg, precision=PREC)
    assert cert.verified and cert.method == "enumeration"
    assert cert.enumerated == cert.field_size ** cert.solution_dim
    assert cert.w0_symmetric_dim == 0


@pytest.mark.parametrize("ell", [5, 7, 11, 13])
def test_unipotent_has_no_nondegenerate_symmetric_form(ell):
    res = unipotent_symmetric_check(ell)
    assert res["solution_dim"] == 1 and res["all_degenerate"]


@pytest.mark.parametrize("ell", [5, 7, 11])
def test_inverse_different(ell):
    alg = CyclotomicAlgebra(base_ring(ell, PREC))
    assert inverse_different_exponent(alg) == 2 - ell
    for delta in (alg.one(), alg.power(alg.eta, 3 - ell), alg.element([0])):
        assert inverse_different_containment(delta, alg)["holds"]
    too_small = alg.scale(alg.base.pi ** -1, alg.one())
    with pytest.raises(PreconditionFailed):
        inverse_different_containment(too_small, alg)


@pytest.mark.parametrize("p,ell,b,d", [(2, 5, 0, 4), (3, 5, 0, 4), (2, 7, 0, 6), (2, 5, 2, 6)])
def test_abvar(p, ell, b, d):
    cert = abvar_scenario(p, ell, b, precision=PREC)
    assert cert.d == d and cert.verified


@pytest.mark.parametrize("p,ell", [(5, 5), (3, 3), (7, 5), (3, 2)])
def test_abvar_bad_parameters(p, ell):
    with pytest.raises(BadParameters):
        abvar_scenario(p, ell)


@pytest.mark.parametrize("ell,p", [(4, 2), (2, 3), (5, 5), (5, 7)])
def test_build_bad_parameters(ell, p):
    with pytest.raises(BadParameters):
        build_counterexample("Thm62", ell, p)


def test_enumerate_cells_is_deterministic(thm62):
    a = [(c.r, c.j, c.exponents) for c in enumerate_cells(thm62)]
    b = [(c.r, c.j, c.exponents) for c in enumerate_cells(thm62)]
    assert a == b
