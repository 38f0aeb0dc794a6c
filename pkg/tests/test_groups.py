import pytest

from lladic.errors import BadSpec, UnsupportedFamily
from lladic.groups import (
    Cyclic,
    DirectProduct,
    FiniteGroup,
    Mu,
    NGroup,
    Quaternion,
    QuotientGroup,
    build_group,
    classify,
    homomorphism_from_generators,
    primitive_root,
    quaternion_to_n3,
)


@pytest.mark.parametrize("spec,order", [("Q2", 8), ("Q3", 12), ("N3", 12), ("N5", 40), ("C6", 6),
                                        ("mu5", 5), ("Q2xmu5", 40), ("Q3xmu5", 60), ("N2", 8)])
def test_orders(spec, order):
    assert build_group(spec).order == order


def test_quaternion_relations():
    q = Quaternion(3)
    a, b = q.a, q.b
    assert q.element_order(a) == 6
    assert q.mul(b, b) == q.power(a, 3)
    assert q.mul(q.mul(b, a), q.inv(b)) == q.inv(a)
    # Q_m has a unique element of order 2
    assert [g for g in q if q.element_order(g) == 2] == [q.power(a, 3)]


def test_n3_is_q3():
    phi = quaternion_to_n3(Quaternion(3), NGroup(3))
    assert phi is not None and len(set(phi.values())) == 12


def test_homomorphism_rejects_bad_images():
    c4, c2 = Cyclic(4), Cyclic(2)
    assert homomorphism_from_generators(c4, c2, {1: 1}) is not None
    assert homomorphism_from_generators(Cyclic(3), c2, {1: 1}) is None


def test_primitive_roots():
    for p in (3, 5, 7, 11, 13):
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


def test_classify_inertia_type_and_d_ell():
    g = build_group("Q2xmu5")
    c = classify(g, 2, 5)
    assert c.inertia_type and len(c.sylow_p) == 8
    assert c.d_ell_split is not None and c.d_ell_split.n_order == 8 and c.d_ell_split.l_order == 5
    # C6 is of inertia type for p = 2 and p = 3
    assert classify(Cyclic(6), 3, 5).inertia_type
    # Q2 x Q2 has a non-cyclic quotient by its Sylow-3 (trivial) subgroup
    assert not classify(DirectProduct([Quaternion(2), Quaternion(2)]), 3, 5).inertia_type


def test_quotient_group():
    q = Quaternion(2)
    center = frozenset({q.identity, q.power(q.a, 2)})
    quot = QuotientGroup(q, center)
    assert quot.order == 4
    assert all(quot.element_order(x) <= 2 for x in quot)


def test_bad_specs():
    for bad in ("Q1", "X3", "N4", "mu6", ""):
        with pytest.raises(BadSpec):
            build_group(bad)

    class Odd(FiniteGroup):
        identity = 0
        generators = [0]

        def mul(self, x, y):
            return 0

    with pytest.raises(UnsupportedFamily):
        classify(Odd(), 2, 5)
