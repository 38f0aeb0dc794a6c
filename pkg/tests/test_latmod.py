import random

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from lladic import linalg as la
from lladic.errors import DegenerateForm, ValuesNotIntegral
from lladic.latmod import (
    BilinearForm,
    Lattice,
    dual_lattice,
    elementary_divisors,
    is_perfect,
    lattice_intersect,
    lattice_sum,
    snf,
)
from lladic.localring import base_ring
from lladic.padic import vl

K = base_ring(5, 20)


def _k(m):
    return [[K.from_int(x) for x in row] for row in m]


@given(st.lists(st.lists(st.integers(-200, 200), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_exponents_match_sympy_invariant_factors(m):
    d = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
    ref = sorted(vl(int(d[i, i]), 5) for i in range(3) if d[i, i] != 0)
    assert sorted(snf(_k(m), K, transforms=False).exponents) == ref


def test_snf_transforms_diagonalize():
    rng = random.Random(0)
    for _ in range(10):
        m = _k([[rng.randint(-50, 50) for _ in range(4)] for _ in range(4)])
        res = snf(m, K)
        d = la.matmul(res.left, la.matmul(m, res.right))
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert d[i][j].is_zero()


def test_lattice_equality_is_basis_independent():
    b = _k([[1, 2], [0, 5]])
    l1 = Lattice.from_basis_matrix(K, b)
    # adding a redundant generator or a unimodular column operation changes nothing
    l2 = Lattice.from_generators(K, la.columns(b) + [[K.from_int(3), K.from_int(5)]])
    l3 = Lattice.from_basis_matrix(K, _k([[1, 3], [0, 5]]))
    assert l1 == l2 == l3
    assert l1 != Lattice.from_basis_matrix(K, _k([[5, 0], [0, 1]]))


def test_index_and_containment():
    t = Lattice.standard(K, 3)
    s = t.scale(2)
    assert t.contains(s) and not s.contains(t)
    assert t.index_exponents(s) == [2, 2, 2]
    assert t.index(s) == 6  # length of T/S over O_K


def test_standard_dual_of_scaled():
    t = Lattice.standard(K, 2).scale(3)
    assert t.standard_dual() == Lattice.standard(K, 2).scale(-3)


def test_dual_against_explicit_formula():
    g = _k([[0, 5], [-5, 0]])
    f = BilinearForm(K, g, "alternating")
    t = Lattice.standard(K, 2)
    assert dual_lattice(t, f) == t.scale(-1)
    cert = is_perfect(t, BilinearForm(K, _k([[0, 1], [-1, 0]]), "alternating"))
    assert cert.perfect and cert.exponents == [0, 0]


def test_form_validation():
    with pytest.raises(DegenerateForm):
        BilinearForm(K, _k([[0, 0], [0, 0]]), "alternating")
    with pytest.raises(Exception):
        BilinearForm(K, _k([[1, 2], [3, 4]]), "symmetric")
    with pytest.raises(ValuesNotIntegral):
        is_perfect(Lattice.standard(K, 2).scale(-1), BilinearForm(K, _k([[0, 1], [-1, 0]]), "alternating"))


def test_sum_and_intersection_of_coordinate_lattices():
    a = Lattice.from_basis_matrix(K, _k([[1, 0], [0, 25]]))
    b = Lattice.from_basis_matrix(K, _k([[5, 0], [0, 1]]))
    assert lattice_sum(a, b) == Lattice.standard(K, 2)
    assert lattice_intersect(a, b) == Lattice.from_basis_matrix(K, _k([[5, 0], [0, 25]]))
    assert elementary_divisors(_k([[5, 0], [0, 25]]), K) == [1, 2]
