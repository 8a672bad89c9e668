from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_twisted_count
from tbf.abelian import (
    FgAbelian,
    FgAbelianEndo,
    abelian_separating_quotient,
    coker_representatives,
    fixed_subgroup_rank,
    induced_endo_mod,
    reidemeister_number_fg_abelian,
    reidemeister_number_zn,
)
from tbf.acceptance import charpoly_classes_3x3, charpoly_sequence_3x3
from tbf.errors import InfiniteCokernel, InvalidEndo
from tbf.intlinalg import INFINITE, Lattice, det
from tbf.twisted import reidemeister_number


def test_zn_examples():
    assert reidemeister_number_zn([[2]]) == 1
    assert reidemeister_number_zn([[-1]]) == 2
    assert reidemeister_number_zn([[1]]) is INFINITE
    assert reidemeister_number_zn([[2, 1], [1, 1]]) == 1
    assert [reidemeister_number_zn([[2, 1], [1, 1]], n) for n in range(1, 7)] == [1, 5, 16, 45, 121, 320]
    assert reidemeister_number_zn([[3]], 2) == 8


def test_fixed_rank():
    assert fixed_subgroup_rank([[1, 0], [0, 2]]) == 1
    assert fixed_subgroup_rank([[2, 1], [1, 1]]) == 0


def test_coker_representatives():
    reps = coker_representatives([[2, 0], [0, 3]])
    assert len(reps) == 6 and reps[0] == (0, 0)
    L = Lattice.from_generators([[2, 0], [0, 3]])
    assert len({L.reduce(v) for v in reps}) == 6
    with pytest.raises(InfiniteCokernel):
        coker_representatives([[1, 1], [1, 1]])


def _brute_mod(M, m):
    """Twisted classes of M on (Z/m)^n as tuples, every x."""
    n = len(M)
    elements = list(product(range(m), repeat=n))

    def add(a, b):
        return tuple((x + y) % m for x, y in zip(a, b))

    def neg(a):
        return tuple((-x) % m for x in a)

    def phi(a):
        return tuple(sum(M[i][j] * a[j] for j in range(n)) % m for i in range(n))

    return naive_twisted_count(elements, add, neg, phi)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)),
       st.sampled_from([2, 3, 4, 6]))
def test_cokernel_count_matches_brute_force(M, m):
    fg = FgAbelianEndo(FgAbelian(0, (m,) * len(M)), M)
    expected = _brute_mod(M, m)
    assert reidemeister_number_fg_abelian(fg) == expected
    G, phi = induced_endo_mod(M, [m] * len(M))
    assert reidemeister_number(G, phi) == expected


def test_fg_with_free_part():
    # Z + Z/2 with -1 on Z and identity on Z/2
    fg = FgAbelianEndo(FgAbelian(1, (2,)), [[-1, 0], [0, 1]])
    assert reidemeister_number_fg_abelian(fg) == 4
    assert reidemeister_number_fg_abelian(fg, 2) is INFINITE
    swap_free = FgAbelianEndo(FgAbelian(1, (2,)), [[2, 0], [1, 1]])
    assert [reidemeister_number_fg_abelian(swap_free, n) for n in range(1, 5)] == [2, 6, 14, 30]


def test_fg_rejects_bad_maps():
    with pytest.raises(InvalidEndo):
        FgAbelianEndo(FgAbelian(1, (2,)), [[1, 1], [0, 1]])  # torsion into free part
    with pytest.raises(InvalidEndo):
        FgAbelian(0, (4, 6))
    with pytest.raises(InvalidEndo):
        FgAbelianEndo(FgAbelian(0, (2, 4)), [[1, 0], [1, 1]])  # Z/4 -> Z/2 fine, Z/2 -> Z/4 needs even entry


def test_separating_quotient():
    sq = abelian_separating_quotient([[2, 1], [1, 1]])
    assert sq.order == 1 and sq.R == 1
    sq = abelian_separating_quotient([[-1, 0], [0, -1]])
    assert sq.order == 4 and sq.R == 4
    assert sq.invariant_factors == (2, 2)
    with pytest.raises(InfiniteCokernel):
        abelian_separating_quotient([[1]])


def _charpoly(M):
    t = M[0][0] + M[1][1] + M[2][2]
    s = sum(M[i][i] * M[j][j] - M[i][j] * M[j][i] for i, j in ((0, 1), (0, 2), (1, 2)))
    return t, s, det(M)


def test_charpoly_classes_small_bound():
    brute = {
        _charpoly([list(v[0:3]), list(v[3:6]), list(v[6:9])])
        for v in product(range(-1, 2), repeat=9)
    }
    assert set(charpoly_classes_3x3(bound=1)) == brute


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_charpoly_sequence_matches_determinant(M):
    assert charpoly_sequence_3x3(*_charpoly(M), 8) == [reidemeister_number_zn(M, n) for n in range(1, 9)]
