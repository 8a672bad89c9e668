from itertools import product

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from tbf.intlinalg import (
    INFINITE,
    Lattice,
    det,
    hermite_normal_form,
    identity,
    inverse_unimodular,
    invariant_factors,
    is_infinite,
    kernel_basis,
    matmul,
    rank,
    smith_normal_form,
)

entries = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)


any_square = st.integers(1, 4).flatmap(square)


@settings(max_examples=150, deadline=None)
@given(any_square)
def test_det_and_rank_match_sympy(M):
    S = sympy.Matrix(M)
    assert det(M) == S.det()
    assert rank(M) == S.rank()


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_form(m, n, data):
    M = data.draw(st.lists(st.lists(entries, min_size=n, max_size=n), min_size=m, max_size=m))
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(m, n))]
    assert all(D[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    ref = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    ref_diag = sorted(abs(ref[i, i]) for i in range(min(m, n)))
    assert sorted(diag) == ref_diag
    assert invariant_factors(M) == diag


@settings(max_examples=150, deadline=None)
@given(any_square)
def test_hermite_form(M):
    H, U = hermite_normal_form(M)
    assert matmul(M, U) == H
    assert abs(det(U)) == 1
    if det(M):
        n = len(M)
        for i in range(n):
            assert H[i][i] > 0
            assert all(H[i][j] == 0 for j in range(i))
            assert all(0 <= H[i][j] < H[i][i] for j in range(i + 1, n))


def test_inverse_unimodular():
    M = [[2, 1], [1, 1]]
    assert matmul(M, inverse_unimodular(M)) == identity(2)


def test_kernel_basis():
    K = kernel_basis([[1, 2, 3], [2, 4, 6]])
    assert len(K[0]) == 2
    assert all(v == 0 for v in sum(matmul([[1, 2, 3]], K), []))


def test_infinite_sentinel():
    assert is_infinite(INFINITE) and not is_infinite(5)
    assert str(INFINITE) == "infinite"


@settings(max_examples=80, deadline=None)
@given(square(2), square(2))
def test_lattice_membership_by_enumeration(A, B):
    if det(A) == 0 or det(B) == 0:
        return
    LA, LB = Lattice.from_generators(A), Lattice.from_generators(B)
    assert LA.index == abs(det(A))
    I = LA.intersect(LB)
    box = range(-8, 9)
    for v in product(box, box):
        assert I.contains(v) == (LA.contains(v) and LB.contains(v))
        r = LA.reduce(v)
        assert LA.contains([a - b for a, b in zip(v, r)])
        assert all(0 <= r[i] < LA.diagonal[i] for i in range(2))
    reps = LA.box_representatives()
    assert len(reps) == LA.index and reps[0] == (0, 0)


def test_lattice_invariance():
    L = Lattice.standard(2, 3)
    assert L.index == 9
    assert L.is_invariant([[2, 1], [1, 1]])
    L2 = Lattice.from_generators([[2, 0], [0, 1]])
    assert not L2.is_invariant([[0, 1], [1, 0]])
    assert L2.contains_lattice(L.scaled(2))
    with pytest.raises(ValueError):
        Lattice.from_generators([[1, 2], [2, 4]])
