"""Reidemeister numbers of endomorphisms of Z^n and finitely generated abelian groups.

In an abelian group the class of 0 is the subgroup ``(I - phi)A`` and the
other classes are its cosets, so ``R(phi)`` is the order of the cokernel of
``I - phi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from tbf.errors import InfiniteCokernel, InvalidEndo, VerificationError
from tbf.groups import FiniteEndo, FiniteGroup, build_from_cayley, validate_endo
from tbf.intlinalg import (
    INFINITE,
    Lattice,
    as_matrix,
    det,
    identity,
    inverse_unimodular,
    mat_pow,
    matmul,
    matvec,
    rank,
    smith_normal_form,
    sub,
)


@dataclass(frozen=True)
class FgAbelian:
    """``Z^rank + Z/d_1 + ... + Z/d_k`` with ``d_i | d_(i+1)``."""

    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise InvalidEndo("rank must be nonnegative")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise InvalidEndo(f"torsion coefficient {d} < 2")
            if i and d % self.torsion[i - 1]:
                raise InvalidEndo(f"torsion {self.torsion} is not a divisibility chain")

    @property
    def ngens(self):
        return self.rank + len(self.torsion)

    def relation_diagonal(self):
        return [0] * self.rank + list(self.torsion)


@dataclass(frozen=True)
class FgAbelianEndo:
    group: FgAbelian
    matrix: tuple

    def __post_init__(self):
        M = as_matrix(self.matrix)
        A = self.group
        n = A.ngens
        if len(M) != n or any(len(r) != n for r in M):
            raise InvalidEndo(f"matrix must be {n}x{n}")
        r = A.rank
        for j in range(r, n):
            for i in range(r):
                if M[i][j]:
                    raise InvalidEndo(f"torsion generator {j} maps into the free part (row {i})")
            dj = A.torsion[j - r]
            for i in range(r, n):
                di = A.torsion[i - r]
                if M[i][j] % (di // gcd(di, dj)):
                    raise InvalidEndo(
                        f"entry ({i},{j})={M[i][j]} is not a multiple of {di // gcd(di, dj)}"
                    )
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in M))

    def power(self, k) -> "FgAbelianEndo":
        return FgAbelianEndo(self.group, mat_pow([list(r) for r in self.matrix], k))


def reidemeister_number_zn(M, power=1):
    """``|det(I - M^power)|``, or INFINITE when the determinant vanishes."""
    M = as_matrix(M)
    d = det(sub(identity(len(M)), mat_pow(M, power)))
    return abs(d) if d else INFINITE


def fixed_subgroup_rank(M) -> int:
    """Rank of ``ker(I - M)``; zero means the fixed subgroup of Z^n is trivial."""
    M = as_matrix(M)
    n = len(M)
    return n - rank(sub(identity(n), M))


def coker_representatives(M) -> list:
    """Canonical representatives of ``Z^n / M Z^n``.

    Produced from Smith coordinates, then reduced into the Hermite box of the
    image lattice and sorted.
    """
    M = as_matrix(M)
    n = len(M)
    d = det(M)
    if d == 0:
        raise InfiniteCokernel("det(M) = 0, the cokernel is infinite")
    U, D, _ = smith_normal_form(M)
    Uinv = inverse_unimodular(U)
    L = Lattice.from_generators(M)
    ranges = [range(D[i][i]) for i in range(n)]
    reps = set()
    for coords in np.ndindex(*[len(r) for r in ranges]):
        v = matvec(Uinv, [int(c) for c in coords])
        reps.add(L.reduce(v))
    if len(reps) != abs(d):
        raise VerificationError(f"{len(reps)} cokernel representatives, expected {abs(d)}")
    return sorted(reps)


def reidemeister_number_fg_abelian(phi: FgAbelianEndo, power=1):
    """Order of ``coker(I - phi^power)`` on ``Z^r + sum Z/d_i``, or INFINITE."""
    A = phi.group
    n = A.ngens
    P = mat_pow([list(r) for r in phi.matrix], power)
    rel = A.relation_diagonal()
    stacked = [
        [int(i == j) - P[i][j] for j in range(n)] + [rel[i] if i == j else 0 for j in range(n)]
        for i in range(n)
    ]
    _, D, _ = smith_normal_form(stacked)
    diag = [D[i][i] for i in range(n)]
    if any(x == 0 for x in diag):
        return INFINITE
    return prod(diag)


# materialized finite abelian quotients ------------------------------------------------


class LatticeQuotient:
    """The finite group ``Z^n / L``, elements numbered by Hermite-box position."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        self.n = lattice.ambient_rank
        self.diag = lattice.diagonal
        self.order = lattice.index
        self.reps = np.array(lattice.box_representatives(), dtype=np.int64).reshape(
            self.order, self.n
        )
        strides = [1] * self.n
        for j in range(self.n - 2, -1, -1):
            strides[j] = strides[j + 1] * self.diag[j + 1]
        self.strides = np.array(strides, dtype=np.int64)
        self.basis = np.array(lattice.basis, dtype=np.int64).reshape(self.n, self.n)

    def reduce_rows(self, S) -> np.ndarray:
        """Reduce each row of an integer array into the box."""
        S = np.array(S, dtype=np.int64)
        for j in range(self.n - 1, -1, -1):
            q = np.floor_divide(S[:, j], self.diag[j])
            S -= np.outer(q, self.basis[:, j])
        return S

    def encode(self, S) -> np.ndarray:
        return self.reduce_rows(S) @ self.strides

    def index_of(self, v) -> int:
        return int(self.encode([list(v)])[0])

    def group(self) -> FiniteGroup:
        table = np.empty((self.order, self.order), dtype=np.int64)
        for a in range(self.order):
            table[a] = self.encode(self.reps + self.reps[a])
        labels = [str(tuple(int(x) for x in r)) for r in self.reps]
        return build_from_cayley(table.tolist(), identity=0, labels=labels)

    def endo(self, G: FiniteGroup, M) -> FiniteEndo:
        """Endomorphism ``v -> M v`` of the quotient; ``M L`` must lie in ``L``."""
        Mn = np.array(as_matrix(M), dtype=np.int64)
        return validate_endo(G, self.encode(self.reps @ Mn.T).tolist())


def finite_abelian_group(moduli):
    """``Z/m_1 + ... + Z/m_k`` materialized; returns ``(group, LatticeQuotient)``."""
    k = len(moduli)
    L = Lattice([[moduli[i] if i == j else 0 for j in range(k)] for i in range(k)])
    Q = LatticeQuotient(L)
    return Q.group(), Q


def induced_endo_mod(M, moduli):
    """The group ``prod Z/m_i`` with the endomorphism induced by ``M``."""
    G, Q = finite_abelian_group(moduli)
    return G, Q.endo(G, M)


@dataclass(frozen=True)
class AbelianSeparatingQuotient:
    lattice: Lattice
    invariant_factors: tuple
    order: int
    group: FiniteGroup
    endo: FiniteEndo
    R: int


def abelian_separating_quotient(M) -> AbelianSeparatingQuotient:
    """Quotient of Z^n by the class of 0, ``H = (I - M) Z^n``.

    ``M`` acts as the identity on ``Z^n / H``, so every element there is its own
    class; the class count is checked to equal the index of ``H``.
    """
    from tbf.twisted import reidemeister_number

    M = as_matrix(M)
    n = len(M)
    IM = sub(identity(n), M)
    if det(IM) == 0:
        raise InfiniteCokernel("det(I - M) = 0")
    H = Lattice.from_generators(IM)
    Q = LatticeQuotient(H)
    G = Q.group()
    phi = Q.endo(G, M)
    R = reidemeister_number(G, phi)
    if R != H.index or any(phi.map[x] != x for x in range(G.order)):
        raise VerificationError(f"quotient count {R} differs from index {H.index}")
    _, D, _ = smith_normal_form(IM)
    factors = tuple(D[i][i] for i in range(n) if D[i][i] != 1)
    return AbelianSeparatingQuotient(H, factors, H.index, G, phi, R)
