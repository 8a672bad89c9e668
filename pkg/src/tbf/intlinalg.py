"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows. Nothing here touches floating point; every
normal form is checked against its defining identity before it is returned.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import List, Sequence

Matrix = List[List[int]]


class _Infinite:
    """Result value for an infinite Reidemeister number. Not an integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "infinite"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def is_infinite(value) -> bool:
    return value is INFINITE


# basic arithmetic ------------------------------------------------------------------


def as_matrix(M) -> Matrix:
    rows = [[int(v) for v in row] for row in M]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def shape(M):
    return len(M), (len(M[0]) if M else 0)


def identity(n) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m, n) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(A, B) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A) -> Matrix:
    return [list(col) for col in zip(*A)]


def sub(A, B) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def add(A, B) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(k, A) -> Matrix:
    return [[k * a for a in row] for row in A]


def mat_pow(M, k) -> Matrix:
    result = identity(len(M))
    base = [row[:] for row in M]
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def block_diag(A, B) -> Matrix:
    ma, na = shape(A)
    mb, nb = shape(B)
    out = zeros(ma + mb, na + nb)
    for i in range(ma):
        out[i][:na] = A[i]
    for i in range(mb):
        out[ma + i][na:] = B[i]
    return out


def det(M) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def rank(M) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    A = [row[:] for row in M]
    m, n = shape(A)
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            if A[i][c]:
                a, b = A[r][c], A[i][c]
                A[i] = [a * x - b * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


def inverse_rational(M) -> List[List[Fraction]]:
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def inverse_unimodular(M) -> Matrix:
    inv = inverse_rational(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def _egcd(a, b):
    """``(g, x, y)`` with ``x*a + y*b = g >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


# Smith normal form -----------------------------------------------------------------


def smith_normal_form(M):
    """Return ``(U, D, V)`` with ``U*M*V = D`` and ``U, V`` unimodular.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    """
    A = as_matrix(M)
    m, n = shape(A)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):          # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):          # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(i, t, -q)
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(j, t, -q)
            rest_row = [(i, t) for i in range(t + 1, m) if A[i][t]]
            rest_col = [(t, j) for j in range(t + 1, n) if A[t][j]]
            if rest_row or rest_col:
                i, j = min(rest_row + rest_col, key=lambda ij: abs(A[ij[0]][ij[1]]))
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]

    if matmul(matmul(U, as_matrix(M)), V) != A:
        raise AssertionError("Smith normal form identity failed")
    if abs(det(U)) != 1 or abs(det(V)) != 1:
        raise AssertionError("Smith transforms are not unimodular")
    return U, A, V


def invariant_factors(M) -> list:
    """Diagonal of the Smith form, zeros included, length ``min(m, n)``."""
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(shape(D)))]


# Hermite normal form ---------------------------------------------------------------


def hermite_normal_form(M):
    """Column-style Hermite form: ``H = M*U`` with ``U`` unimodular.

    Rows are processed bottom-up; pivots are positive, entries right of a
    pivot are reduced into ``[0, pivot)``, and the zero columns (if any) come
    first. A full-rank square input yields an upper-triangular ``H``.
    """
    H = as_matrix(M)
    m, n = shape(H)
    U = identity(n)

    def col_combo(k, j, x, y, u, v):
        # (col_k, col_j) <- (x col_k + y col_j, u col_k + v col_j)
        for mat in (H, U):
            for row in mat:
                a, b = row[k], row[j]
                row[k], row[j] = x * a + y * b, u * a + v * b

    k = n - 1
    for i in range(m - 1, -1, -1):
        if k < 0:
            break
        for j in range(k - 1, -1, -1):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][k]
            g, x, y = _egcd(a, b)
            col_combo(k, j, x, y, -b // g, a // g)
        if H[i][k] == 0:
            continue
        if H[i][k] < 0:
            for mat in (H, U):
                for row in mat:
                    row[k] = -row[k]
        p = H[i][k]
        for j in range(k + 1, n):
            q = H[i][j] // p
            if q:
                for mat in (H, U):
                    for row in mat:
                        row[j] -= q * row[k]
        k -= 1

    if matmul(as_matrix(M), U) != H:
        raise AssertionError("Hermite normal form identity failed")
    return H, U


def kernel_basis(M) -> Matrix:
    """Integer basis of ``{x : M x = 0}`` as the columns of the returned matrix."""
    m, n = shape(M)
    H, U = hermite_normal_form(M)
    zero_cols = [j for j in range(n) if all(H[i][j] == 0 for i in range(m))]
    return [[U[i][j] for j in zero_cols] for i in range(n)]


# lattices --------------------------------------------------------------------------


class Lattice:
    """Full-rank sublattice of Z^n with its Hermite basis (columns)."""

    def __init__(self, basis):
        self.basis = tuple(tuple(r) for r in basis)
        self.ambient_rank = len(self.basis)

    def __repr__(self):
        return f"Lattice(index={self.index}, basis={[list(r) for r in self.basis]})"

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    @classmethod
    def from_generators(cls, G) -> "Lattice":
        """Lattice spanned by the columns of ``G`` (an ``n x m`` matrix)."""
        G = as_matrix(G)
        n = len(G)
        H, _ = hermite_normal_form(G)
        cols = [j for j in range(len(H[0]) if H else 0) if any(H[i][j] for i in range(n))]
        if len(cols) != n:
            raise ValueError(f"generators span rank {len(cols)} < {n}")
        return cls([[H[i][j] for j in cols] for i in range(n)])

    @classmethod
    def standard(cls, n, k=1) -> "Lattice":
        return cls(scale(k, identity(n)))

    @property
    def index(self) -> int:
        out = 1
        for i in range(self.ambient_rank):
            out *= self.basis[i][i]
        return out

    @property
    def diagonal(self):
        return [self.basis[i][i] for i in range(self.ambient_rank)]

    def reduce(self, v) -> tuple:
        """Canonical representative of ``v`` modulo the lattice, in the box
        ``0 <= v_i < basis[i][i]``."""
        v = list(v)
        B = self.basis
        for j in range(self.ambient_rank - 1, -1, -1):
            q = v[j] // B[j][j]
            if q:
                for i in range(j + 1):
                    v[i] -= q * B[i][j]
        return tuple(v)

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def box_representatives(self) -> list:
        """All canonical coset representatives, lexicographic, zero first."""
        return [tuple(p) for p in product(*(range(d) for d in self.diagonal))]

    def intersect(self, other: "Lattice") -> "Lattice":
        n = self.ambient_rank
        B1 = [list(r) for r in self.basis]
        B2 = [list(r) for r in other.basis]
        stacked = [B1[i] + [-x for x in B2[i]] for i in range(n)]
        K = kernel_basis(stacked)
        gens = matmul(B1, K[:n])
        return Lattice.from_generators(gens)

    def scaled(self, k) -> "Lattice":
        return Lattice.from_generators(scale(k, [list(r) for r in self.basis]))

    def image(self, A) -> "Lattice":
        return Lattice.from_generators(matmul(A, [list(r) for r in self.basis]))

    def is_invariant(self, A) -> bool:
        """``A * L`` contained in ``L``."""
        cols = transpose(matmul(A, [list(r) for r in self.basis]))
        return all(self.contains(c) for c in cols)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(c) for c in transpose([list(r) for r in other.basis]))
