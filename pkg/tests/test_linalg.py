from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from tropism_forge.linalg import (
    LinAlgError,
    Matrix,
    build_unimodular_transform,
    det,
    hermite_normal_form,
    inverse,
    is_unimodular,
    kernel_basis,
    rank,
    row_hermite_basis,
    smith_normal_form,
    transform_from_tropisms,
)


def cofactor_det(a):
    """Plain Laplace expansion; independent of the library's elimination."""
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    return sum((-1) ** j * a[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in a[1:]]) for j in range(n) if a[0][j])


def determinantal_divisors(a):
    """Smith diagonal from gcds of k x k minors."""
    rows, cols = len(a), len(a[0])
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, cofactor_det([[a[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def leading_hermite_diagonal(a):
    """Hermite diagonal when the pivots sit in the leading columns: ratios of minor gcds."""
    out, prev = [], 1
    for k in range(1, len(a) + 1):
        g = 0
        for rs in combinations(range(len(a)), k):
            g = gcd(g, cofactor_det([[a[i][j] for j in range(k)] for i in rs]))
        out.append(g // prev)
        prev = g
    return out


TEXTBOOK = [[2, 6, 17, 9], [4, 14, 13, 3]]


def test_textbook_smith_form():
    snf = smith_normal_form(Matrix(TEXTBOOK))
    assert list(snf.diagonal) == determinantal_divisors(TEXTBOOK) == [1, 2]
    assert snf.U @ Matrix(TEXTBOOK) @ snf.V == snf.S


def test_textbook_hermite_form():
    h = hermite_normal_form(Matrix(TEXTBOOK))
    assert h.colperm == (0, 1, 2, 3)
    assert list(h.diagonal) == leading_hermite_diagonal(TEXTBOOK) == [2, 2]


def test_zero_and_identity_normal_forms():
    z = smith_normal_form(Matrix.zeros(2, 3))
    assert z.S == Matrix.zeros(2, 3) and z.U == Matrix.identity(2) and z.V == Matrix.identity(3)
    h = hermite_normal_form(Matrix.identity(3))
    assert h.H == Matrix.identity(3) and h.U == Matrix.identity(3)
    assert hermite_normal_form(Matrix([[3, 0], [0, 5]])).diagonal == (3, 5)


def test_smith_form_with_nontrivial_invariants():
    b = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    snf = smith_normal_form(Matrix(b))
    assert list(snf.diagonal) == [2, 6, 12]
    assert determinantal_divisors(b) == [2, 6, 12]


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_matches_determinantal_divisors(a):
    snf = smith_normal_form(Matrix(a))
    diag = [x for x in snf.diagonal if x]
    assert diag == determinantal_divisors(a)
    assert snf.U @ Matrix(a) @ snf.V == snf.S
    assert is_unimodular(snf.U) and is_unimodular(snf.V)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hermite_identities(a):
    m = Matrix(a)
    if rank(m) < m.rows:
        with pytest.raises(LinAlgError):
            hermite_normal_form(m)
        return
    h = hermite_normal_form(m)
    permuted = Matrix([[row[j] for j in h.colperm] for row in a])
    assert h.U @ permuted == h.H
    assert is_unimodular(h.U)
    for i in range(h.H.rows):
        assert h.H[i, i] > 0
        assert all(h.H[i, j] == 0 for j in range(i))
        assert all(0 <= h.H[k, i] < h.H[i, i] for k in range(i))


def test_det_and_inverse():
    a = Matrix([[2, 1], [1, 1]])
    assert det(a) == 1
    assert inverse(a) == Matrix([[1, -1], [-1, 2]])
    with pytest.raises(LinAlgError):
        inverse(Matrix([[1, 2], [2, 4]]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_det_matches_cofactor_expansion(a):
    assert det(Matrix(a)) == cofactor_det(a)


def test_kernel_basis_of_binomial_example():
    a = Matrix([[2, 1, 4, 3], [1, 1, 1, 1]])
    b = kernel_basis(a)
    assert b.rows == 2
    assert all(x == 0 for x in (a @ b.T).tolist()[0] + (a @ b.T).tolist()[1])
    # saturated: the 2 x 2 minors are coprime
    assert determinantal_divisors(b.tolist()) == [1, 1]


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_kernel_basis_is_annihilated(a):
    m = Matrix(a)
    if rank(m) < m.rows:
        with pytest.raises(LinAlgError, match="rank deficient"):
            kernel_basis(m)
        return
    k = kernel_basis(m)
    assert k.rows == m.cols - rank(m)
    for v in k:
        assert m.apply(v) == (0,) * m.rows
        assert reduce(gcd, v) == 1


def test_kernel_basis_small_cases():
    assert kernel_basis(Matrix.identity(2)).rows == 0
    (v,) = kernel_basis(Matrix([[1, 1]]))
    assert v in ((1, -1), (-1, 1))


def test_transform_eliminates_kernel_rows():
    a = Matrix([[2, 1, 4, 3], [1, 1, 1, 1]])
    t = build_unimodular_transform(kernel_basis(a), 4)
    assert abs(det(t.M)) == 1
    for row in a:
        assert t.M.apply(row)[:2] == (0, 0)


def test_transform_case_three_structure():
    b = Matrix(TEXTBOOK)
    t = build_unimodular_transform(b)
    assert t.case == "iii"
    d = hermite_normal_form(b).diagonal
    assert t.denominators[:2] == d == (2, 2)
    # top block is D^-1 B, bottom block unit rows
    for i in range(2):
        assert t.M[i] == tuple(Fraction(x, d[i]) for x in TEXTBOOK[i])
    assert t.M[2] == (0, 0, 1, 0) and t.M[3] == (0, 0, 0, 1)
    assert abs(det(t.M)) == Fraction(abs(cofactor_det([r[:2] for r in TEXTBOOK])), 4)


def test_transform_case_one_and_identity_like():
    t = build_unimodular_transform(Matrix([[1, 0, 0], [0, 1, 0]]))
    assert t.case == "i"
    assert t.M == Matrix.identity(3)


def test_transform_from_tropisms_keeps_rows():
    u = (1, 1, -2, 1, 1, -2, 1, 1, -2)
    v = (0, 1, -1, 0, 1, -1, 0, 1, -1)
    t = transform_from_tropisms(Matrix([u, v]))
    assert t.M[0] == u and t.M[1] == v
    for i in range(2, 9):
        assert t.M[i] == tuple(int(j == i) for j in range(9))


def test_row_hermite_basis_is_canonical():
    a = row_hermite_basis([(2, 0, 1), (0, 3, 1)])
    b = row_hermite_basis([(2, 3, 2), (0, 3, 1), (4, 3, 3)])
    assert a == b
    assert row_hermite_basis([(0, 0, 0)]) == []


def test_matrix_rejects_floats():
    with pytest.raises(TypeError):
        Matrix([[1.5]])
    assert Matrix([[Fraction(4, 2)]])[0, 0] == 2
