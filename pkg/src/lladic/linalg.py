"""Dense linear algebra over an exact field (K at finite precision, or F_q).

Matrices are lists of row lists.  ``field`` is anything with ``zero()`` and
``one()``.  When entries expose ``valuation()`` the elimination picks pivots of
minimal valuation, which keeps precision loss bounded in the l-adic case.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

Matrix = list


def zeros(field, n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    z = field.zero()
    return [[z] * m for _ in range(n)]


def identity(field, n: int) -> Matrix:
    z, o = field.zero(), field.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_map(fn: Callable, a: Matrix) -> Matrix:
    return [[fn(x) for x in row] for row in a]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k = shape(a)
    k2, m = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {n}x{k} @ {k2}x{m}")
    bt = transpose(b)
    zero = _zero_like(a, b)
    out = []
    for row in a:
        nz = [(i, x) for i, x in enumerate(row) if not x.is_zero()]
        out_row = []
        for col in bt:
            acc = zero
            for i, x in nz:
                y = col[i]
                if not y.is_zero():
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def _zero_like(a: Matrix, b: Matrix):
    x = a[0][0] if a and a[0] else b[0][0]
    return x - x


def matvec(a: Matrix, v: Sequence) -> list:
    return [row[0] for row in matmul(a, [[x] for x in v])]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(c, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def mat_neg(a: Matrix) -> Matrix:
    return [[-x for x in row] for row in a]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and all((x - y).is_zero() for r, s in zip(a, b) for x, y in zip(r, s))


def is_zero_matrix(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def mat_pow(a: Matrix, k: int, field) -> Matrix:
    if k < 0:
        return mat_pow(inverse(a, field), -k, field)
    result = identity(field, len(a))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def kron(a: Matrix, b: Matrix) -> Matrix:
    n, m = shape(a)
    p, q = shape(b)
    return [[a[i // p][j // q] * b[i % p][j % q] for j in range(m * q)] for i in range(n * p)]


def block_diag(blocks: Sequence[Matrix], field) -> Matrix:
    n = sum(len(b) for b in blocks)
    m = sum(shape(b)[1] for b in blocks)
    out = zeros(field, n, m)
    r = c = 0
    for blk in blocks:
        br, bc = shape(blk)
        for i in range(br):
            for j in range(bc):
                out[r + i][c + j] = blk[i][j]
        r += br
        c += bc
    return out


def submatrix(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[a[i][j] for j in cols] for i in rows]


def hstack(a: Matrix, b: Matrix) -> Matrix:
    return [list(r) + list(s) for r, s in zip(a, b)]


def columns(a: Matrix) -> list[list]:
    return transpose(a)


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in zip(*cols)]


def _pivot_key(x):
    v = getattr(x, "valuation", None)
    return v() if v is not None else 0


def rref(a: Matrix, field) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    n_rows, n_cols = shape(m)
    pivots = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        best = None
        for i in range(r, n_rows):
            x = m[i][c]
            if not x.is_zero():
                k = _pivot_key(x)
                if best is None or k < best[0]:
                    best = (k, i)
        if best is None:
            continue
        i = best[1]
        m[r], m[i] = m[i], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix, field) -> int:
    return len(rref(a, field)[1]) if a else 0


def nullspace(a: Matrix, field) -> list[list]:
    """Basis of {x : a x = 0} as a list of vectors."""
    n_cols = shape(a)[1]
    if not a:
        return [[field.one() if i == j else field.zero() for i in range(n_cols)] for j in range(n_cols)]
    red, pivots = rref(a, field)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero()] * n_cols
        v[fc] = field.one()
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def det(a: Matrix, field):
    n = len(a)
    m = [list(row) for row in a]
    d = field.one()
    for c in range(n):
        best = None
        for i in range(c, n):
            x = m[i][c]
            if not x.is_zero():
                k = _pivot_key(x)
                if best is None or k < best[0]:
                    best = (k, i)
        if best is None:
            return field.zero()
        i = best[1]
        if i != c:
            m[c], m[i] = m[i], m[c]
            d = -d
        p = m[c][c]
        d = d * p
        inv = p.inverse()
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def inverse(a: Matrix, field) -> Matrix:
    n = len(a)
    aug = hstack(a, identity(field, n))
    red, pivots = rref(aug, field)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular at working precision")
    return [row[n:] for row in red]


def solve(a: Matrix, b: Matrix, field) -> Matrix:
    """Solve a x = b for square invertible a."""
    return matmul(inverse(a, field), b)


def charpoly(a: Matrix, field) -> list:
    """Characteristic polynomial det(x - a), coefficients low to high (Berkowitz)."""
    n = len(a)
    if n == 0:
        return [field.one()]
    z = field.zero()
    # Berkowitz: build the Toeplitz product iteratively
    vect = [field.one(), -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        sub = [x[:r] for x in a[:r]]
        diag = a[r][r]
        # t_k = row * sub^(k) * col
        ts = []
        cur = col
        for _ in range(r):
            ts.append(_dot(row, cur, z))
            cur = [_dot(srow, cur, z) for srow in sub]
        toeplitz_col = [field.one(), -diag] + [-t for t in ts]
        new = []
        for i in range(r + 2):
            acc = z
            for j in range(len(vect)):
                k = i - j
                if 0 <= k < len(toeplitz_col):
                    acc = acc + toeplitz_col[k] * vect[j]
            new.append(acc)
        vect = new
    return list(reversed(vect))


def _dot(u, v, z):
    acc = z
    for x, y in zip(u, v):
        if not x.is_zero() and not y.is_zero():
            acc = acc + x * y
    return acc


def min_valuation(a: Matrix) -> float:
    return min((x.valuation() for row in a for x in row), default=math.inf)
