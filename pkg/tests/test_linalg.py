import random

import sympy
from hypothesis import given, strategies as st

from lladic import linalg as la
from lladic.localring import base_ring

K = base_ring(5, 20)
small = st.integers(-30, 30)


def _to_k(m):
    return [[K.from_int(x) for x in row] for row in m]


def _eq_rational(x, q):
    q = sympy.Rational(q)
    return x == K.from_fraction(int(q.p), int(q.q))


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_and_charpoly_match_sympy(m):
    a = _to_k(m)
    sm = sympy.Matrix(m)
    assert _eq_rational(la.det(a, K), sm.det())
    ref = list(reversed(sm.charpoly().all_coeffs()))
    assert all(_eq_rational(x, c) for x, c in zip(la.charpoly(a, K), ref))


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_matches_sympy(m):
    sm = sympy.Matrix(m)
    if sm.det() == 0:
        return
    inv = la.inverse(_to_k(m), K)
    ref = sm.inv()
    assert all(_eq_rational(inv[i][j], ref[i, j]) for i in range(3) for j in range(3))


def test_nullspace_and_rank():
    rng = random.Random(3)
    for _ in range(20):
        m = [[rng.randint(-5, 5) for _ in range(5)] for _ in range(3)]
        a = _to_k(m)
        null = la.nullspace(a, K)
        assert len(null) == 5 - sympy.Matrix(m).rank()
        for v in null:
            assert all(x.is_zero() for x in la.matvec(a, v))


def test_kron_and_block_diag_shapes():
    a = la.identity(K, 2)
    b = _to_k([[1, 2], [3, 4]])
    assert la.shape(la.kron(a, b)) == (4, 4)
    assert la.shape(la.block_diag([a, b, a], K)) == (6, 6)
    assert la.mat_eq(la.mat_pow(b, 3, K), la.matmul(b, la.matmul(b, b)))
