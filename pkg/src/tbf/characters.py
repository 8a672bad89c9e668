"""Exact character tables and fixed characters of endomorphisms.

Character tables come from the Burnside-Dixon method: the class sums act on
the centre of the group algebra, their common eigenvectors over a prime
field Z/p with ``p = 1 mod exponent(G)`` give the characters mod p, and each
value is lifted to Q(zeta_e) through the eigenvalue multiplicities of
``rho(g)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from tbf import modp
from tbf.config import get_caps
from tbf.cyclotomic import CyclotomicField, _normalize
from tbf.errors import (
    CapExceeded,
    LiftFailure,
    NotARepresentation,
    PreconditionNotFPoint,
    VerificationError,
)
from tbf.groups import ClassPartition, FiniteEndo, FiniteGroup, conjugacy_classes, iterate
from tbf.twisted import burnside_average, reidemeister_number, twisted_classes


@dataclass(frozen=True)
class CharTable:
    group: FiniteGroup
    classes: ClassPartition
    field: CyclotomicField
    values: tuple          # values[i][t]: coordinate tuple of chi_i on class t
    degrees: tuple
    class_sizes: tuple
    prime: int

    @property
    def k(self):
        return self.classes.count

    @property
    def order(self):
        """Order of the cyclotomic field the values live in (the exponent of G)."""
        return self.field.m

    def value(self, i, x):
        return self.values[i][self.classes.class_of[x]]

    def complex_values(self):
        return [[self.field.to_complex(v) for v in row] for row in self.values]

    def to_json(self):
        return {
            "cyclotomic_order": self.field.m,
            "classes": self.classes.classes(),
            "class_sizes": list(self.class_sizes),
            "degrees": list(self.degrees),
            "values": [[[_jsonable(c) for c in v] for v in row] for row in self.values],
        }


def _jsonable(c):
    return c if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def dixon_prime(order, exponent, after=0) -> int:
    """Least prime ``p = 1 mod exponent`` with ``p > 2*sqrt(order)`` and ``p > after``."""
    p = max(2 * isqrt(order) + 1, after + 1)
    p += (1 - p) % exponent
    while not (modp.is_prime(p) and p * p > 4 * order):
        p += exponent
    return p


def _class_matrix(G, classes, r):
    """``A[s][t] = #{x in K_r : x^-1 z_t in K_s}`` for class representatives ``z_t``."""
    k = classes.count
    mul, inv, cls = G.mul, G.inv, classes.class_of
    A = np.zeros((k, k), dtype=np.int64)
    members = [x for x in range(G.order) if cls[x] == r]
    for t, z in enumerate(classes.reps):
        for x in members:
            A[cls[mul[inv[x]][z]], t] += 1
    return A


def _split(B, pivots, A, p):
    """Split the row space ``B`` into eigenspaces of ``A`` (acting on columns)."""
    d = B.shape[0]
    W = B @ A.T % p
    C = W[:, pivots]
    pieces = []
    found = 0
    eye = np.eye(d, dtype=np.int64)
    for lam in range(p):
        N = modp.nullspace((C.T - lam * eye) % p, p)
        if len(N):
            R, piv = modp.rref(N @ B % p, p)
            pieces.append((R, piv))
            found += len(N)
            if found == d:
                return pieces
    raise LiftFailure(f"class matrix not diagonalizable mod {p}")


def _dixon(G: FiniteGroup, classes: ClassPartition, p: int) -> CharTable:
    k = classes.count
    N = G.order
    e = G.exponent
    sizes = [0] * k
    for c in classes.class_of:
        sizes[c] += 1

    spaces = [modp.rref(np.eye(k, dtype=np.int64), p)]
    for r in sorted(range(1, k), key=lambda r: (sizes[r], r)):
        if all(B.shape[0] == 1 for B, _ in spaces):
            break
        A = _class_matrix(G, classes, r)
        nxt = []
        for B, piv in spaces:
            nxt.extend([(B, piv)] if B.shape[0] == 1 else _split(B, piv, A, p))
        spaces = nxt
    if len(spaces) != k:
        raise LiftFailure(f"found {len(spaces)} common eigenspaces, expected {k}")

    inv_class = [classes.class_of[G.inv[z]] for z in classes.reps]
    powmap = [[classes.class_of[G.power(z, l)] for l in range(e)] for z in classes.reps]
    F = CyclotomicField(e)
    z = pow(modp.primitive_root(p), (p - 1) // e, p)
    e_inv = pow(e, -1, p)
    half = p // 2

    rows = []
    for B, _ in spaces:
        w = [int(x) for x in B[0]]
        if w[0] == 0:
            raise LiftFailure("eigenvector vanishes on the identity class")
        s = pow(w[0], -1, p)
        w = [x * s % p for x in w]
        # omega_t = |K_t| chi(z_t) / chi(1);  sum_t omega_t omega_t* / |K_t| = |G| / chi(1)^2
        acc = sum(w[t] * w[inv_class[t]] * pow(sizes[t], -1, p) for t in range(k)) % p
        if acc == 0:
            raise LiftFailure("degenerate normalization")
        target = N * pow(acc, -1, p) % p
        deg = next((d for d in range(1, isqrt(N) + 1) if d * d % p == target), None)
        if deg is None:
            raise LiftFailure(f"no degree squares to {target} mod {p}")
        chi_p = [deg * w[t] * pow(sizes[t], -1, p) % p for t in range(k)]
        row = []
        for t in range(k):
            mults = []
            for j in range(e):
                s_ = sum(chi_p[powmap[t][l]] * pow(z, (-j * l) % e, p) for l in range(e))
                m = s_ * e_inv % p
                m = m - p if m > half else m
                if not 0 <= m <= deg:
                    raise LiftFailure(f"eigenvalue multiplicity {m} outside [0, {deg}]")
                mults.append(m)
            if sum(mults) != deg:
                raise LiftFailure("multiplicities do not sum to the degree")
            row.append(F.from_exponents(mults))
        rows.append((deg, tuple(row)))

    trivial = tuple(F.one() for _ in range(k))
    rows.sort(key=lambda dr: (dr[1] != trivial, dr[0], dr[1]))
    table = CharTable(
        group=G,
        classes=classes,
        field=F,
        values=tuple(r for _, r in rows),
        degrees=tuple(d for d, _ in rows),
        class_sizes=tuple(sizes),
        prime=p,
    )
    check_table(table)
    return table


def check_table(table: CharTable):
    """Exact orthogonality, degree-square sum and identity column; raises on failure."""
    F = table.field
    N = table.group.order
    k = table.k
    if sum(d * d for d in table.degrees) != N:
        raise VerificationError("sum of squared degrees differs from |G|")
    for i in range(k):
        if table.values[i][0] != F.from_rational(table.degrees[i]):
            raise VerificationError(f"identity column differs from degree for character {i}")
    conj = [[F.conj(v) for v in row] for row in table.values]
    for i in range(k):
        for j in range(i, k):
            acc = F.zero()
            for t in range(k):
                acc = F.add(acc, F.scale(F.mul(table.values[i][t], conj[j][t]), table.class_sizes[t]))
            if acc != F.from_rational(N if i == j else 0):
                raise VerificationError(f"characters {i} and {j} are not orthonormal")


def character_table(G: FiniteGroup, cap=None, attempts=6) -> CharTable:
    cap = get_caps().char_table if cap is None else cap
    if G.order > cap:
        raise CapExceeded("character table group order", cap)
    classes = conjugacy_classes(G)
    p = dixon_prime(G.order, G.exponent)
    last = None
    for _ in range(attempts):
        try:
            return _dixon(G, classes, p)
        except (LiftFailure, VerificationError) as exc:
            last = exc
            p = dixon_prime(G.order, G.exponent, after=p)
    raise LiftFailure(f"character table failed up to p={p}: {last}")


# fixed characters ---------------------------------------------------------------------


@dataclass(frozen=True)
class FPointReport:
    fixed_character_ids: tuple
    count: int
    power: int


def _class_action(table: CharTable, psi: FiniteEndo):
    """Class of ``psi(z_t)`` for each class representative ``z_t``."""
    cls = table.classes.class_of
    return [cls[psi.map[z]] for z in table.classes.reps]


def f_point_count(G: FiniteGroup, phi: FiniteEndo, table: CharTable, n=1) -> FPointReport:
    """Irreducible characters with ``chi o phi^n = chi``."""
    if table.group is not G:
        raise ValueError("character table belongs to a different group")
    act = _class_action(table, iterate(phi, n))
    fixed = tuple(
        i for i, row in enumerate(table.values) if all(row[act[t]] == row[t] for t in range(table.k))
    )
    return FPointReport(fixed, len(fixed), n)


@dataclass
class TBFTReport:
    rows: list                   # (n, R(phi^n), fixed character count, equal)
    passed: bool

    def to_json(self):
        return {
            "passed": self.passed,
            "rows": [{"n": n, "R": r, "f_points": f, "pass": ok} for n, r, f, ok in self.rows],
        }


def tbft_verify(G: FiniteGroup, phi: FiniteEndo, max_power=1, table=None) -> TBFTReport:
    """Compare class counts with fixed-character counts for ``n = 1..max_power``."""
    table = character_table(G) if table is None else table
    rows = []
    for n in range(1, max_power + 1):
        r = reidemeister_number(G, phi, n)
        f = f_point_count(G, phi, table, n).count
        rows.append((n, r, f, r == f))
    return TBFTReport(rows, all(ok for *_, ok in rows))


def class_function_norm(table: CharTable, vals) -> object:
    """``<f, f>`` for a class function given by its values on the classes."""
    F = table.field
    acc = F.zero()
    for t, v in enumerate(vals):
        acc = F.add(acc, F.scale(F.mul(v, F.conj(v)), table.class_sizes[t]))
    return tuple(_normalize(Fraction(c, table.group.order)) for c in acc)


@dataclass
class PersistenceReport:
    character: int
    power: int
    norms: list
    passed: bool


def irreducibility_persistence(G, phi, table: CharTable, chi_id, n, cap=6) -> PersistenceReport:
    """For an f-point of ``phi^n``, check ``chi o phi^m`` keeps norm 1 for ``m <= cap``."""
    chi = table.values[chi_id]
    act = _class_action(table, iterate(phi, n))
    if any(chi[act[t]] != chi[t] for t in range(table.k)):
        raise PreconditionNotFPoint(f"character {chi_id} is not fixed by phi^{n}")
    one = table.field.one()
    norms = []
    for m in range(cap + 1):
        act_m = _class_action(table, iterate(phi, m))
        norms.append(class_function_norm(table, [chi[act_m[t]] for t in range(table.k)]))
    return PersistenceReport(chi_id, n, norms, all(v == one for v in norms))


def twisted_class_function_dimension(G: FiniteGroup, phi: FiniteEndo) -> int:
    """Dimension of the space of functions constant on twisted classes."""
    r = twisted_classes(G, phi).count
    fixed_dim = burnside_average(G, phi)
    if r != fixed_dim:
        raise VerificationError(f"class count {r} differs from fixed-space dimension {fixed_dim}")
    return r


# explicit representations and intertwiners -------------------------------------------------


@dataclass(frozen=True)
class ExplicitRep:
    """A representation given by exact matrices on generators, extended to all of G."""

    group: FiniteGroup
    field: CyclotomicField
    dimension: int
    matrices: tuple = field(repr=False)   # matrices[x]: d x d tuple of field elements

    def __call__(self, x):
        return self.matrices[x]


def _matmul_f(F, A, B):
    n, m, k = len(A), len(B), len(B[0])
    return tuple(
        tuple(_dot(F, [A[i][l] for l in range(m)], [B[l][j] for l in range(m)]) for j in range(k))
        for i in range(n)
    )


def _dot(F, a, b):
    acc = F.zero()
    for x, y in zip(a, b):
        if not F.is_zero(x) and not F.is_zero(y):
            acc = F.add(acc, F.mul(x, y))
    return acc


def build_rep(G: FiniteGroup, field_order: int, generator_matrices: dict) -> ExplicitRep:
    """Extend generator images to all of ``G``, checking every relation."""
    F = CyclotomicField(field_order)
    gens = [g for g in generator_matrices if g != 0]
    mats = {g: tuple(tuple(F.coerce(v) for v in row) for row in generator_matrices[g]) for g in gens}
    if not gens:
        raise NotARepresentation("no generators given")
    d = len(next(iter(mats.values())))
    if any(len(M) != d or any(len(r) != d for r in M) for M in mats.values()):
        raise NotARepresentation("generator matrices must be square of one size")
    ident = tuple(tuple(F.one() if i == j else F.zero() for j in range(d)) for i in range(d))
    rho = {0: ident}
    queue = deque([0])
    mul = G.mul
    while queue:
        y = queue.popleft()
        for g in gens:
            z = mul[y][g]
            val = _matmul_f(F, rho[y], mats[g])
            if z in rho:
                if rho[z] != val:
                    raise NotARepresentation(f"rho({y})rho({g}) != rho({z})")
            else:
                rho[z] = val
                queue.append(z)
    if len(rho) != G.order:
        raise NotARepresentation("generators do not generate the group")
    return ExplicitRep(G, F, d, tuple(rho[x] for x in range(G.order)))


@dataclass
class IntertwinerResult:
    S: object                 # d x d matrix over the field, or None
    dimension: int            # dimension of the intertwiner space over the field
    values: tuple             # Tr(S rho(g)) per element, or None

    @property
    def found(self):
        return self.S is not None


def _rational_nullspace(rows, ncols):
    A = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -A[i][f]
        basis.append(v)
    return basis


def intertwiner_class_function(G: FiniteGroup, rep: ExplicitRep, phi: FiniteEndo) -> IntertwinerResult:
    """Solve ``rho(phi(x)) S = S rho(x)`` and return the class function ``Tr(S rho(g))``.

    The unknown entries of ``S`` are expanded in the power basis so the system is
    solved over Q. ``S`` is scaled so its first nonzero entry is 1.
    """
    F = rep.field
    d = rep.dimension
    deg = F.degree
    nvar = d * d * deg

    def var(a, b, c):
        return (a * d + b) * deg + c

    rows = []
    for x in G.generators:
        P = rep(phi.map[x])
        X = rep(x)
        for i in range(d):
            for j in range(d):
                eq = [[0] * nvar for _ in range(deg)]
                # sum_b P[i][b] S[b][j]  -  sum_a S[i][a] X[a][j]
                for b in range(d):
                    Mx = F.mult_matrix(P[i][b])
                    for c in range(deg):
                        for o in range(deg):
                            eq[o][var(b, j, c)] += Mx[o][c]
                for a in range(d):
                    Mx = F.mult_matrix(X[a][j])
                    for c in range(deg):
                        for o in range(deg):
                            eq[o][var(i, a, c)] -= Mx[o][c]
                rows.extend(eq)
    null = _rational_nullspace(rows, nvar)
    if not null:
        return IntertwinerResult(None, 0, None)
    dim, rem = divmod(len(null), deg)
    if rem:
        raise VerificationError("intertwiner space is not a vector space over the field")
    v = null[0]
    S = [[tuple(_normalize(v[var(a, b, c)]) for c in range(deg)) for b in range(d)] for a in range(d)]
    lead = next(S[a][b] for a in range(d) for b in range(d) if not F.is_zero(S[a][b]))
    s = F.inverse(lead)
    S = tuple(tuple(tuple(_normalize(c) for c in F.mul(S[a][b], s)) for b in range(d)) for a in range(d))

    values = []
    for g in range(G.order):
        prod_ = _matmul_f(F, S, rep(g))
        tr = F.zero()
        for i in range(d):
            tr = F.add(tr, prod_[i][i])
        values.append(tuple(_normalize(c) for c in tr))
    part = twisted_classes(G, phi)
    for y in range(G.order):
        if values[y] != values[part.reps[part.class_of[y]]]:
            raise VerificationError(f"Tr(S rho(g)) is not constant on the class of {y}")
    return IntertwinerResult(S, dim, tuple(values))


def field_rank(F: CyclotomicField, vectors) -> int:
    """Rank over Q(zeta_m) of a list of vectors with field-element entries."""
    A = [list(v) for v in vectors]
    if not A:
        return 0
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if not F.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inverse(A[r][c])
        A[r] = [F.mul(x, inv) for x in A[r]]
        for i in range(r + 1, len(A)):
            if not F.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        r += 1
    return r


def linear_character_reps(table: CharTable) -> list:
    """The degree-one characters as ``(index, 1x1 explicit representation)`` pairs."""
    G = table.group
    out = []
    for i, d in enumerate(table.degrees):
        if d == 1 and G.generators:
            mats = {g: [[list(table.value(i, g))]] for g in G.generators}
            out.append((i, build_rep(G, table.field.m, mats)))
    return out
