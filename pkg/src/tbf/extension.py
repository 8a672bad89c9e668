"""Endomorphisms of lattice-by-finite groups ``Z^n x|_theta F``.

Elements are pairs ``(v, f)`` with product
``(v1, f1)(v2, f2) = (v1 + theta(f1) v2, f1 f2)``. An endomorphism preserving
the lattice has the form ``phi(v, f) = (M v + c(f), psi(f))``.

Reidemeister numbers are computed in a finite quotient ``(Z^n / H') x| F``
where ``H'`` is a theta- and M-invariant sublattice contained in the class of
0 inside every fiber; the count is then re-checked on the refinements
``2 H'`` and ``3 H'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from tbf.abelian import LatticeQuotient
from tbf.config import get_caps
from tbf.errors import (
    CapExceeded,
    CocycleFailure,
    EquivarianceFailure,
    InputError,
    InvalidEndo,
    NotInvariant,
    StabilizationFailure,
    VerificationError,
)
from tbf.groups import FiniteEndo, FiniteGroup, validate_endo
from tbf.intlinalg import (
    INFINITE,
    Lattice,
    as_matrix,
    det,
    identity,
    kernel_basis,
    matmul,
    matvec,
    sub,
    zeros,
)
from tbf.twisted import reidemeister_number, twisted_classes


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class LatticeExtension:
    n: int
    F: FiniteGroup
    theta: tuple            # theta[f]: n x n unimodular matrix (tuple of tuples)

    def __post_init__(self):
        n, F = self.n, self.F
        if len(self.theta) != F.order:
            raise InvalidEndo(f"theta needs {F.order} matrices, got {len(self.theta)}")
        th = []
        for f, T in enumerate(self.theta):
            T = as_matrix(T)
            if len(T) != n or any(len(r) != n for r in T):
                raise InvalidEndo(f"theta({f}) must be {n}x{n}")
            if abs(det(T)) != 1:
                raise InvalidEndo(f"theta({f}) is not unimodular")
            th.append(tuple(tuple(r) for r in T))
        if th[0] != tuple(tuple(r) for r in identity(n)):
            raise InvalidEndo("theta(e) must be the identity")
        for a in range(F.order):
            for b in range(F.order):
                if matmul(th[a], th[b]) != [list(r) for r in th[F.mul[a][b]]]:
                    raise InvalidEndo(f"theta is not a homomorphism at ({a}, {b})")
        object.__setattr__(self, "theta", tuple(th))

    @property
    def theta_lists(self):
        return [[list(r) for r in T] for T in self.theta]

    def mul(self, x, y):
        (v1, f1), (v2, f2) = x, y
        return _vadd(v1, matvec(self.theta[f1], v2)), self.F.mul[f1][f2]

    def inv(self, x):
        v, f = x
        fi = self.F.inv[f]
        return tuple(-t for t in matvec(self.theta[fi], v)), fi


@dataclass(frozen=True)
class ExtensionEndo:
    ext: LatticeExtension
    M: tuple
    psi: FiniteEndo
    c: tuple               # c[f]: vector in Z^n

    def __call__(self, x):
        v, f = x
        return _vadd(matvec(self.M, v), self.c[f]), self.psi.map[f]

    @property
    def M_list(self):
        return [list(r) for r in self.M]


def validate_extension_endo(ext: LatticeExtension, M, psi, c) -> ExtensionEndo:
    """Check equivariance ``M theta(f) = theta(psi f) M`` and the cocycle identity."""
    n, F = ext.n, ext.F
    M = as_matrix(M)
    if len(M) != n or any(len(r) != n for r in M):
        raise InvalidEndo(f"M must be {n}x{n}")
    if not isinstance(psi, FiniteEndo):
        psi = validate_endo(F, psi)
    elif psi.group is not F:
        raise InvalidEndo("psi is not an endomorphism of F")
    if isinstance(c, dict):
        c = [c.get(f, [0] * n) for f in range(F.order)]
    c = [tuple(int(x) for x in v) for v in c]
    if len(c) != F.order or any(len(v) != n for v in c):
        raise InvalidEndo(f"c needs {F.order} vectors of length {n}")
    if any(c[0]):
        raise CocycleFailure(0, 0)
    th = ext.theta
    for f in range(F.order):
        if matmul(M, th[f]) != matmul(th[psi.map[f]], M):
            raise EquivarianceFailure(f)
    for f1 in range(F.order):
        for f2 in range(F.order):
            rhs = _vadd(c[f1], matvec(th[psi.map[f1]], c[f2]))
            if c[F.mul[f1][f2]] != rhs:
                raise CocycleFailure(f1, f2)
    return ExtensionEndo(ext, tuple(tuple(r) for r in M), psi, tuple(c))


def compose_ext(a: ExtensionEndo, b: ExtensionEndo) -> ExtensionEndo:
    """``a o b``, validated."""
    if a.ext is not b.ext:
        raise InputError("endomorphisms of different extensions")
    M = matmul(a.M, b.M)
    psi = validate_endo(a.ext.F, [a.psi.map[b.psi.map[f]] for f in range(a.ext.F.order)])
    c = [_vadd(matvec(a.M, b.c[f]), a.c[b.psi.map[f]]) for f in range(a.ext.F.order)]
    return validate_extension_endo(a.ext, M, psi, c)


def identity_ext_endo(ext: LatticeExtension) -> ExtensionEndo:
    F = ext.F
    return validate_extension_endo(ext, identity(ext.n), list(range(F.order)), [[0] * ext.n] * F.order)


def iterate_ext(phi: ExtensionEndo, k: int) -> ExtensionEndo:
    out = identity_ext_endo(phi.ext)
    for _ in range(k):
        out = compose_ext(phi, out)
    return out


def inner_ext(ext: LatticeExtension, g) -> ExtensionEndo:
    """``x -> g x g^-1`` for ``g = (u, h)``."""
    u, h = tuple(g[0]), g[1]
    F = ext.F
    conj = [F.mul[F.mul[h][f]][F.inv[h]] for f in range(F.order)]
    c = [sub([u], [matvec(ext.theta[conj[f]], u)])[0] for f in range(F.order)]
    return validate_extension_endo(ext, ext.theta[h], conj, c)


# fibers and finiteness ---------------------------------------------------------------


def fiber_matrix(phi: ExtensionEndo, f):
    """Matrix of the lattice action on the fiber ``Z^n x {f}``: ``theta(f) M``.

    The class of ``(w, f)`` under translations by the lattice is
    ``w + (I - theta(f) M) Z^n``.
    """
    return matmul(phi.ext.theta[f], phi.M)


def fiber_matrices(phi: ExtensionEndo) -> dict:
    """``{f: theta(f) M}`` over the twisted-class representatives of ``psi``."""
    reps = twisted_classes(phi.ext.F, phi.psi).reps
    return {f: fiber_matrix(phi, f) for f in reps}


@dataclass
class FinitenessReport:
    finite: bool
    determinants: dict              # fiber rep -> det(I - theta(f) M)
    witness: object = None          # a fiber with vanishing determinant
    growth: list = field(default_factory=list)   # (k, R on Z^n/kZ^n x| F)

    @property
    def verdict(self):
        return "FINITE" if self.finite else "INFINITE"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "determinants": {str(f): d for f, d in self.determinants.items()},
            "witness": self.witness,
            "growth": [{"k": k, "R": r} for k, r in self.growth],
        }


def reidemeister_finiteness(phi: ExtensionEndo, probe=(2, 3, 4)) -> FinitenessReport:
    """FINITE iff ``det(I - theta(f) M) != 0`` on every fiber representative.

    A fiber with singular ``I - theta(f) M`` has infinite cokernel, and the finite
    stabilizer of that fiber cannot merge it into finitely many classes. For the
    INFINITE verdict the class counts on ``Z^n / k Z^n`` are recorded as a probe.
    """
    n = phi.ext.n
    dets = {f: det(sub(identity(n), T)) for f, T in fiber_matrices(phi).items()}
    bad = [f for f, d in dets.items() if d == 0]
    rep = FinitenessReport(not bad, dets, bad[0] if bad else None)
    if bad:
        cap = get_caps().quotient
        for k in probe:
            L = Lattice.standard(n, k)
            if L.index * phi.ext.F.order > cap:
                break
            Q = materialize_quotient(phi, L)
            rep.growth.append((k, reidemeister_number(Q.group, Q.endo)))
    return rep


# finite quotients ---------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionQuotient:
    lattice: Lattice
    group: FiniteGroup
    endo: FiniteEndo
    lattice_quotient: LatticeQuotient = field(repr=False)

    def index_of(self, v, f) -> int:
        return f * self.lattice_quotient.order + self.lattice_quotient.index_of(v)

    def element(self, i):
        q = self.lattice_quotient.order
        f, j = divmod(i, q)
        return tuple(int(x) for x in self.lattice_quotient.reps[j]), f


def materialize_quotient(phi: ExtensionEndo, L: Lattice, cap=None) -> ExtensionQuotient:
    """``(Z^n / L) x| F`` with the endomorphism induced by ``phi``.

    Element ``f * [Z^n : L] + j`` is the pair ``(rep_j, f)``. ``L`` must be
    theta-invariant and M-invariant; both are checked.
    """
    ext = phi.ext
    F = ext.F
    cap = get_caps().quotient if cap is None else cap
    order = L.index * F.order
    if order > cap:
        raise CapExceeded("extension quotient order", cap)
    for f in range(F.order):
        if not L.is_invariant(ext.theta[f]):
            raise NotInvariant(f"lattice is not theta({f})-invariant")
    if not L.is_invariant(phi.M):
        raise NotInvariant("lattice is not M-invariant")

    LQ = LatticeQuotient(L)
    q = LQ.order
    reps = LQ.reps
    thetas = [np.array(T, dtype=np.int64) for T in ext.theta]
    Fmul = np.array(F.mul, dtype=np.int64).reshape(F.order, F.order)
    table = np.empty((order, order), dtype=np.int64)
    for f1 in range(F.order):
        rot = reps @ thetas[f1].T
        # enc[v1, v2] = index of rep_v1 + theta(f1) rep_v2
        enc = LQ.encode((reps[:, None, :] + rot[None, :, :]).reshape(q * q, ext.n)).reshape(q, q)
        for f2 in range(F.order):
            table[f1 * q:(f1 + 1) * q, f2 * q:(f2 + 1) * q] = Fmul[f1, f2] * q + enc
    inv = np.argmax(table == 0, axis=1)
    labels = [
        f"({','.join(str(int(x)) for x in reps[j])};{F.label(f)})" for f in range(F.order) for j in range(q)
    ]
    G = FiniteGroup(table.tolist(), inv.tolist(), labels)

    Mn = np.array(phi.M, dtype=np.int64)
    cvec = np.array(phi.c, dtype=np.int64).reshape(F.order, ext.n)
    image = np.empty(order, dtype=np.int64)
    base = reps @ Mn.T
    for f in range(F.order):
        image[f * q:(f + 1) * q] = phi.psi.map[f] * q + LQ.encode(base + cvec[f])
    endo = validate_endo(G, image.tolist())
    return ExtensionQuotient(L, G, endo, LQ)


@dataclass
class SeparatingQuotient:
    sublattice: Lattice
    fiber_lattices: dict            # fiber rep -> (I - theta(f) M) Z^n
    quotient: ExtensionQuotient
    refinement_steps: int           # extra intersections needed for M-invariance

    @property
    def quotient_group(self):
        return self.quotient.group

    @property
    def induced_endo(self):
        return self.quotient.endo

    @property
    def order(self):
        return self.quotient.group.order


def _theta_closure(ext, L):
    return reduce(Lattice.intersect, [L.image(T) for T in ext.theta])


def _preimage(M, L: Lattice) -> Lattice:
    """``{v : M v in L}``, from the kernel of ``[M | -B]``."""
    n = L.ambient_rank
    B = [list(r) for r in L.basis]
    stacked = [list(M[i]) + [-x for x in B[i]] for i in range(n)]
    return Lattice.from_generators(kernel_basis(stacked)[:n])


def separating_lattice(phi: ExtensionEndo):
    """``H'`` together with the per-fiber lattices and the number of refinement steps."""
    ext = phi.ext
    n = ext.n
    fibers = {}
    for f, T in fiber_matrices(phi).items():
        A = sub(identity(n), T)
        if det(A) == 0:
            raise InputError(f"fiber {f} has infinite cokernel; R(phi) is infinite")
        fibers[f] = Lattice.from_generators(A)
    H = reduce(Lattice.intersect, [_theta_closure(ext, L) for L in fibers.values()])
    # the theta-translates of all fiber lattices are the fiber lattices over all of F
    every = reduce(
        Lattice.intersect,
        [Lattice.from_generators(sub(identity(n), fiber_matrix(phi, f))) for f in range(ext.F.order)],
    )
    if every != H:
        raise VerificationError("theta-closure of fiber lattices differs from the all-fiber intersection")
    steps = 0
    M = phi.M_list
    while not H.is_invariant(M):
        H = H.intersect(_preimage(M, H))
        steps += 1
    return H, fibers, steps


def build_separating_quotient(phi: ExtensionEndo, cap=None) -> SeparatingQuotient:
    H, fibers, steps = separating_lattice(phi)
    for f in range(phi.ext.F.order):
        if not H.is_invariant(phi.ext.theta[f]):
            raise NotInvariant(f"H' is not theta({f})-invariant")
    if not H.is_invariant(phi.M_list):
        raise NotInvariant("H' is not M-invariant")
    for L in fibers.values():
        if not L.contains_lattice(H):
            raise NotInvariant("H' is not inside every fiber lattice")
    Q = materialize_quotient(phi, H, cap)
    return SeparatingQuotient(H, fibers, Q, steps)


def _components(N, src, dst) -> int:
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(N, N))
    return int(connected_components(graph, directed=True, connection="weak")[0])


def implicit_class_count(phi: ExtensionEndo, L: Lattice, cap=None) -> int:
    """Twisted classes of ``(Z^n / L) x| F`` without forming its Cayley table.

    Orbits of ``y -> x y phi(x)^-1`` are expanded over the generators
    ``(e_i, e)`` and ``(0, g)`` (``g`` a generator of F) of the whole group.
    """
    ext = phi.ext
    F, n = ext.F, ext.n
    cap = get_caps().orbit if cap is None else cap
    N = L.index * F.order
    if N > cap:
        raise CapExceeded("implicit quotient order", cap)
    LQ = LatticeQuotient(L)
    q = LQ.order
    reps = LQ.reps
    th = [np.array(T, dtype=np.int64) for T in ext.theta]
    Mn = np.array(phi.M, dtype=np.int64)
    gens = [(np.eye(n, dtype=np.int64)[i], 0) for i in range(n)]
    gens += [(np.zeros(n, dtype=np.int64), g) for g in F.generators]
    src, dst = [], []
    idx = np.arange(q, dtype=np.int64)
    for u, h in gens:
        ph = phi.psi.map[h]
        a = Mn @ u + np.array(phi.c[h], dtype=np.int64)
        b = -np.array(matvec(ext.theta[F.inv[ph]], [int(x) for x in a]), dtype=np.int64)
        moved = reps @ th[h].T
        for f in range(F.order):
            hf = F.mul[h][f]
            t = F.mul[hf][F.inv[ph]]
            shift = u + th[hf] @ b
            src.append(f * q + idx)
            dst.append(t * q + LQ.encode(moved + shift))
    return _components(N, np.concatenate(src), np.concatenate(dst))


MATERIALIZE_LIMIT = 1000


def quotient_class_count(phi: ExtensionEndo, L: Lattice) -> int:
    """Class count on ``(Z^n / L) x| F``; materialized when small, implicit otherwise."""
    if L.index * phi.ext.F.order <= min(MATERIALIZE_LIMIT, get_caps().quotient):
        Q = materialize_quotient(phi, L)
        return reidemeister_number(Q.group, Q.endo)
    return implicit_class_count(phi, L)


def fiber_orbit_count(phi: ExtensionEndo, cap=None) -> int:
    """``R(phi)`` as a sum over fibers of orbit counts on cokernels.

    For a twisted-class representative ``f`` of ``psi``, the classes meeting the
    fiber over ``f`` are the orbits on ``Z^n / (I - theta(f) M) Z^n`` of the
    affine maps ``w -> theta(h) w - theta(f) c(h)``, ``h`` ranging over
    ``{h : h f psi(h)^-1 = f}``.
    """
    ext = phi.ext
    F, n = ext.F, ext.n
    cap = get_caps().orbit if cap is None else cap
    total = 0
    for f, T in fiber_matrices(phi).items():
        A = sub(identity(n), T)
        if det(A) == 0:
            return INFINITE
        L = Lattice.from_generators(A)
        if L.index > cap:
            raise CapExceeded("fiber cokernel order", cap)
        LQ = LatticeQuotient(L)
        q = LQ.order
        stab = [h for h in range(F.order) if F.mul[F.mul[h][f]][F.inv[phi.psi.map[h]]] == f]
        src, dst = [], []
        idx = np.arange(q, dtype=np.int64)
        for h in stab:
            shift = -np.array(matvec(ext.theta[f], phi.c[h]), dtype=np.int64)
            src.append(idx)
            dst.append(LQ.encode(LQ.reps @ np.array(ext.theta[h], dtype=np.int64).T + shift))
        total += _components(q, np.concatenate(src), np.concatenate(dst))
    return total


@dataclass
class ExtensionReidemeister:
    value: object                   # int or INFINITE
    finiteness: FinitenessReport
    quotient_order: int = None
    stabilization: list = field(default_factory=list)   # (k, order, R)
    method: str = "quotient"

    def to_json(self):
        return {
            "R": self.value if self.value is not INFINITE else "infinite",
            "method": self.method,
            "finiteness": self.finiteness.to_json(),
            "quotient_order": self.quotient_order,
            "stabilization": [{"k": k, "order": o, "R": r} for k, o, r in self.stabilization],
        }


def reidemeister_extension_report(phi: ExtensionEndo, refinements=(2, 3)) -> ExtensionReidemeister:
    """Class count on the separating quotient, re-checked on ``k H'`` for each refinement."""
    fin = reidemeister_finiteness(phi)
    if not fin.finite:
        return ExtensionReidemeister(INFINITE, fin)
    H, _, _ = separating_lattice(phi)
    r = quotient_class_count(phi, H)
    stab = []
    for k in refinements:
        L = H.scaled(k)
        rk = quotient_class_count(phi, L)
        stab.append((k, L.index * phi.ext.F.order, rk))
        if rk != r:
            raise StabilizationFailure(k, r, rk)
    return ExtensionReidemeister(r, fin, H.index * phi.ext.F.order, stab)


def reidemeister_number_extension(phi: ExtensionEndo, power=1, method="auto"):
    """``R(phi^power)`` (a positive integer) or INFINITE.

    ``method`` is ``"quotient"`` (separating quotient with refinement checks),
    ``"fibers"`` (orbit counts on fiber cokernels) or ``"auto"``, which uses the
    quotient when ``3 H'`` stays under the orbit cap and the fibers otherwise.
    """
    if power != 1:
        phi = iterate_ext(phi, power)
    if method == "fibers":
        return fiber_orbit_count(phi)
    if method == "auto":
        if not reidemeister_finiteness(phi, probe=()).finite:
            return INFINITE
        H, _, _ = separating_lattice(phi)
        if H.index * 3 ** phi.ext.n * phi.ext.F.order > get_caps().orbit:
            return fiber_orbit_count(phi)
    elif method != "quotient":
        raise ValueError(f"unknown method {method!r}")
    return reidemeister_extension_report(phi).value


@dataclass
class Certificate:
    certified: bool
    R: int
    fixed_characters: int
    separated: bool
    sublattice: Lattice
    quotient_order: int
    report: ExtensionReidemeister

    def to_json(self):
        return {
            "certified": self.certified,
            "R": self.R,
            "fixed_characters": self.fixed_characters,
            "classes_separate": self.separated,
            "sublattice_hnf": [list(r) for r in self.sublattice.basis],
            "sublattice_index": self.sublattice.index,
            "quotient_order": self.quotient_order,
            "stabilization": self.report.to_json()["stabilization"],
        }


def tbft_ff_certify(phi: ExtensionEndo) -> Certificate:
    """Class count of ``phi`` against fixed irreducible characters of the separating quotient."""
    from tbf.characters import character_table, f_point_count

    rep = reidemeister_extension_report(phi)
    if rep.value is INFINITE:
        raise InputError("R(phi) is infinite; nothing to certify")
    sq = build_separating_quotient(phi)
    G, endo = sq.quotient.group, sq.quotient.endo
    table = character_table(G)
    fixed = f_point_count(G, endo, table, 1).count
    separated = all(r == rep.value for _, _, r in rep.stabilization)
    return Certificate(
        certified=separated and fixed == rep.value,
        R=rep.value,
        fixed_characters=fixed,
        separated=separated,
        sublattice=sq.sublattice,
        quotient_order=sq.order,
        report=rep,
    )


# shifts of classes ----------------------------------------------------------------------


@dataclass
class ShiftReport:
    group_order: int
    classes: int
    distinct_shifts: int
    stabilizer_indices: list        # per class: |G| / |{g : C g = C}|
    sampled: int


def shift_probe_finite(G: FiniteGroup, phi: FiniteEndo, sample_size=None) -> ShiftReport:
    """Distinct right shifts ``C g`` of all twisted classes ``C`` over sampled ``g``."""
    part = twisted_classes(G, phi)
    classes = [frozenset(c) for c in part.classes()]
    shifts = range(G.order)
    if sample_size is not None and sample_size < G.order:
        rng = np.random.default_rng(0)
        shifts = sorted(int(x) for x in rng.choice(G.order, size=sample_size, replace=False))
    mul = G.mul
    seen = set()
    stab = []
    for C in classes:
        fixed = 0
        for g in shifts:
            S = frozenset(mul[y][g] for y in C)
            seen.add(S)
            fixed += S == C
        stab.append(len(shifts) // fixed if fixed else None)
    return ShiftReport(G.order, len(classes), len(seen), stab, len(shifts))


def shift_finiteness_probe(phi: ExtensionEndo, sample_size=None) -> ShiftReport:
    sq = build_separating_quotient(phi)
    return shift_probe_finite(sq.quotient.group, sq.quotient.endo, sample_size)


# instances -------------------------------------------------------------------------------


def extension_from_generators(n, F, gen_images) -> LatticeExtension:
    """Extension with theta given on a generating set of ``F`` (the dict keys).

    theta is extended multiplicatively along a BFS; the result is validated
    as a homomorphism on all of ``F``.
    """
    gens = [g for g in gen_images if g != 0]
    th = {0: identity(n)}
    frontier = [0]
    while frontier:
        nxt = []
        for y in frontier:
            for g in gens:
                z = F.mul[y][g]
                if z not in th:
                    th[z] = matmul(th[y], gen_images[g])
                    nxt.append(z)
        frontier = nxt
    if len(th) != F.order:
        raise InvalidEndo("theta generator images do not reach every element")
    return LatticeExtension(n, F, tuple(tuple(tuple(r) for r in th[f]) for f in range(F.order)))


_ext = extension_from_generators


def example_instances() -> dict:
    """Small named instances; each entry is ``(description, ExtensionEndo)``."""
    from tbf.library import cyclic

    out = {}
    Z1, Z2, Z3, Z4 = cyclic(1), cyclic(2), cyclic(3), cyclic(4)

    neg = _ext(2, Z2, {1: [[-1, 0], [0, -1]]})
    out["neg_2I"] = ("Z^2 x| Z/2, theta = -I, M = 2I, psi = id", validate_extension_endo(neg, [[2, 0], [0, 2]], [0, 1], [[0, 0]] * 2))
    out["neg_hyperbolic"] = (
        "Z^2 x| Z/2, theta = -I, M = [[2,1],[1,1]], psi = id",
        validate_extension_endo(neg, [[2, 1], [1, 1]], [0, 1], [[0, 0]] * 2),
    )
    out["neg_trivial"] = ("trivial endomorphism of Z^2 x| Z/2, theta = -I", validate_extension_endo(neg, zeros(2, 2), [0, 0], [[0, 0]] * 2))

    flat2 = LatticeExtension(2, Z1, (((1, 0), (0, 1)),))
    out["flat_hyperbolic"] = ("F trivial, M = [[2,1],[1,1]]", validate_extension_endo(flat2, [[2, 1], [1, 1]], [0], [[0, 0]]))
    flat1 = LatticeExtension(1, Z1, (((1,),),))
    out["flat_minus_one"] = ("F trivial, M = [[-1]]", validate_extension_endo(flat1, [[-1]], [0], [[0]]))

    swap = _ext(2, Z2, {1: [[0, 1], [1, 0]]})
    out["swap_cocycle"] = (
        "Z^2 x| Z/2, theta = swap, M = [[3,1],[1,3]], psi = id, c(s) = (1,-1)",
        validate_extension_endo(swap, [[3, 1], [1, 3]], [0, 1], [[0, 0], [1, -1]]),
    )

    rot = _ext(2, Z4, {1: [[0, -1], [1, 0]]})
    out["rotation_z4"] = (
        "Z^2 x| Z/4 by rotation, M = diag(2,-2), psi = inversion",
        validate_extension_endo(rot, [[2, 0], [0, -2]], [0, 3, 2, 1], [[0, 0]] * 4),
    )

    perm3 = _ext(3, Z3, {1: [[0, 0, 1], [1, 0, 0], [0, 1, 0]]})
    out["cyclic_z3"] = (
        "Z^3 x| Z/3 by cyclic permutation P, M = I + P, psi = id",
        validate_extension_endo(perm3, [[1, 0, 1], [1, 1, 0], [0, 1, 1]], [0, 1, 2], [[0, 0, 0]] * 3),
    )

    pm = _ext(2, Z2, {1: [[1, 0], [0, -1]]})
    out["pm_finite_image"] = (
        "illustrative member of an R-infinity family: Z^2 x| Z/2 with theta = diag(1,-1); "
        "finite-image endomorphism M = 0, psi = id, c(s) = (0,1)",
        validate_extension_endo(pm, zeros(2, 2), [0, 1], [[0, 0], [0, 1]]),
    )
    out["pm_identity"] = (
        "identity of Z^2 x| Z/2 with theta = diag(1,-1) (infinite)",
        identity_ext_endo(pm),
    )
    return out
