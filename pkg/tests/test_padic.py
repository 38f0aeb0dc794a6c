import pytest
from hypothesis import given, strategies as st

from lladic.errors import NoSimpleRoot, NotAUnit, PrecisionExhausted
from lladic.padic import PadicInt, hensel_root, invert, poly_eval, val, vl


def test_vl_small_cases():
    assert vl(250, 5) == 3
    assert vl(7, 5) == 0
    with pytest.raises(PrecisionExhausted):
        vl(0, 5)


def test_zero_residue_has_no_exact_valuation():
    x = PadicInt.of(5**6, 5, 6)
    assert x.is_zero()
    with pytest.raises(PrecisionExhausted):
        val(x)
    assert val(x, exact=False) == 6


@given(st.integers(1, 10**9), st.sampled_from([3, 5, 7, 11]))
def test_invert_units(n, p):
    if n % p == 0:
        with pytest.raises(NotAUnit):
            invert(PadicInt.of(n, p, 12))
    else:
        x = PadicInt.of(n, p, 12)
        assert x * invert(x) == 1


@pytest.mark.parametrize("p,n", [(5, 4), (13, 4), (7, 3), (13, 3)])
def test_hensel_roots_of_unity(p, n):
    # x^n - 1: every root mod p of a separable polynomial lifts
    f = [-1] + [0] * (n - 1) + [1]
    roots = [r for r in range(1, p) if pow(r, n, p) == 1]
    for r in roots:
        z = hensel_root(f, r, p, 15)
        assert poly_eval(f, z.residue, p**15) == 0
        assert z.residue % p == r


def test_hensel_rejects_bad_start():
    with pytest.raises(NoSimpleRoot):
        hensel_root([-1, 0, 1], 2, 5, 8)
    with pytest.raises(NoSimpleRoot):
        hensel_root([0, 0, 1], 0, 5, 8)
