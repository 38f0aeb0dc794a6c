import itertools

import pytest
from hypothesis import given, strategies as st

from lladic.ff import FiniteField, factor_mod, is_irreducible_mod


def _brute_irreducible(coeffs, p):
    deg = len(coeffs) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            # polynomial long division mod p
            r = list(coeffs)
            for k in range(len(r) - 1, d - 1, -1):
                c = r[k] % p
                for t in range(d + 1):
                    r[k - d + t] -= c * g[t]
            if all(x % p == 0 for x in r[:d]):
                return False
    return True


@pytest.mark.parametrize("p", [2, 3, 5])
def test_irreducibility_matches_trial_division(p):
    for tail in itertools.product(range(p), repeat=3):
        poly = list(tail) + [1]
        assert is_irreducible_mod(poly, p) == _brute_irreducible(poly, p)


def test_factor_mod_cyclotomic():
    # Phi_4 = x^2 + 1 splits mod 5 and stays irreducible mod 7
    assert factor_mod([1, 0, 1], 5) == [[2, 1], [3, 1]]
    assert factor_mod([1, 0, 1], 7) == [[1, 0, 1]]


F49 = FiniteField(7, [1, 0, 1])


@given(st.tuples(st.integers(0, 6), st.integers(0, 6)), st.tuples(st.integers(0, 6), st.integers(0, 6)))
def test_field_axioms_f49(a, b):
    x, y = F49(a), F49(b)
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x
    if not x.is_zero():
        assert x * x.inverse() == F49.one()
        assert x ** (F49.q - 1) == F49.one()


def test_frobenius_has_order_two_on_f49():
    g = F49.gen()
    assert F49.frobenius(g) != g
    assert F49.frobenius(F49.frobenius(g)) == g
    assert len(list(F49.elements())) == 49


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FiniteField(5, [1, 0, 1])
