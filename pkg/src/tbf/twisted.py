"""Twisted conjugacy (Reidemeister) classes of endomorphisms of finite groups.

Two elements ``y, y'`` are twisted conjugate under ``phi`` when
``y' = x y phi(x)^-1`` for some ``x``. The classes are the orbits of that
action of ``G`` on itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from tbf.errors import NonIntegerAverage, NotInvariant, NotNormal
from tbf.groups import (
    ClassPartition,
    FiniteEndo,
    FiniteGroup,
    build_from_cayley,
    compose,
    conjugacy_classes,
    induced_endo,
    inner_auto,
    is_normal,
    iterate,
    quotient,
    validate_endo,
)


@dataclass(frozen=True)
class ReidemeisterReport:
    partition: ClassPartition
    number: int
    endo_power: int

    def to_json(self):
        return {
            "R": self.number,
            "power": self.endo_power,
            "classes": self.partition.classes(),
            "reps": list(self.partition.reps),
        }


@dataclass
class PropertyReport:
    name: str
    passed: bool
    witness: object = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def _generator_moves(G: FiniteGroup, phi: FiniteEndo, gens):
    t = G.table
    inv = G.inv
    return [t[t[x], inv[phi.map[x]]].tolist() for x in gens]


def twisted_classes(G: FiniteGroup, phi: FiniteEndo) -> ClassPartition:
    """Orbits of ``y -> x y phi(x)^-1``, expanded over the generators of ``G`` only."""
    moves = _generator_moves(G, phi, G.generators)
    label = [-1] * G.order
    k = 0
    for seed in range(G.order):
        if label[seed] >= 0:
            continue
        label[seed] = k
        stack = [seed]
        while stack:
            y = stack.pop()
            for mv in moves:
                z = mv[y]
                if label[z] < 0:
                    label[z] = k
                    stack.append(z)
        k += 1
    # seeds are visited in increasing order, so ids are already canonical
    return ClassPartition(G.order, tuple(label), tuple(_first_of_each(label, k)))


def _first_of_each(label, k):
    reps = [-1] * k
    for x, c in enumerate(label):
        if reps[c] < 0:
            reps[c] = x
    return reps


def reidemeister_report(G: FiniteGroup, phi: FiniteEndo, n=1) -> ReidemeisterReport:
    if n < 1:
        raise ValueError("power must be positive")
    part = twisted_classes(G, iterate(phi, n))
    return ReidemeisterReport(part, part.count, n)


def reidemeister_number(G: FiniteGroup, phi: FiniteEndo, n=1) -> int:
    """``R(phi^n)``."""
    return reidemeister_report(G, phi, n).number


def burnside_average(G: FiniteGroup, phi: FiniteEndo) -> int:
    """Average number of fixed points of ``y -> g y phi(g)^-1`` over ``g``.

    This is the dimension of the fixed space of the permutation action on the
    group algebra, computed without ever forming an orbit.
    """
    t = G.table
    inv = G.inv
    ident = np.arange(G.order)
    total = 0
    for g in range(G.order):
        total += int(np.count_nonzero(t[t[g], inv[phi.map[g]]] == ident))
    q, r = divmod(total, G.order)
    if r:
        raise NonIntegerAverage(f"fixed-point total {total} not divisible by |G|={G.order}")
    return q


# checkable properties ----------------------------------------------------------


def kernel_coset_property(G: FiniteGroup, phi: FiniteEndo) -> PropertyReport:
    """Every class is a union of cosets ``K g`` of ``K = ker phi``."""
    part = twisted_classes(G, phi)
    K = phi.kernel()
    mul = G.mul
    for g in range(G.order):
        for k in K:
            h = mul[k][g]
            if not part.same_class(g, h):
                return PropertyReport("kernel_cosets", False, (h, g), {"kernel": K})
    return PropertyReport("kernel_cosets", True, None, {"kernel_order": len(K), "R": part.count})


def _maps_partition(part_a, part_b, f, n):
    """Check ``f`` sends every class of ``a`` into one class of ``b``, bijectively."""
    image = {}
    for y in range(n):
        ca, cb = part_a.class_of[y], part_b.class_of[f(y)]
        if image.setdefault(ca, cb) != cb:
            return False, y
    if len(set(image.values())) != part_a.count or part_a.count != part_b.count:
        return False, None
    return True, None


def shift_bijection_property(G: FiniteGroup, phi: FiniteEndo, g) -> PropertyReport:
    """Right shift by ``g`` carries classes of ``phi`` onto classes of ``tau_{g^-1} o phi``."""
    shifted = compose(inner_auto(G, G.inv[g]), phi)
    a = twisted_classes(G, phi)
    b = twisted_classes(G, shifted)
    ok, w = _maps_partition(a, b, lambda y: G.mul[y][g], G.order)
    return PropertyReport("right_shift", ok, w, {"g": g, "R": a.count, "R_shifted": b.count})


def epimorphism_of_classes_property(G: FiniteGroup, phi: FiniteEndo, H) -> PropertyReport:
    """Projection onto ``G/H`` maps classes onto classes of the induced endomorphism."""
    hs = set(H)
    if not is_normal(G, H):
        raise NotNormal("H is not a normal subgroup")
    if any(phi.map[h] not in hs for h in hs):
        raise NotInvariant("phi(H) is not contained in H")
    Q, proj = quotient(G, H)
    phiQ = induced_endo(phi, Q, proj)
    up = twisted_classes(G, phi)
    down = twisted_classes(Q, phiQ)
    image = {}
    for y in range(G.order):
        c, d = up.class_of[y], down.class_of[proj[y]]
        if image.setdefault(c, d) != d:
            return PropertyReport("epimorphism_of_classes", False, y)
    surjective = set(image.values()) == set(range(down.count))
    return PropertyReport(
        "epimorphism_of_classes",
        surjective and down.count <= up.count,
        None,
        {"R": up.count, "R_quotient": down.count, "H_order": len(hs)},
    )


def class_invariance_property(G: FiniteGroup, phi: FiniteEndo) -> PropertyReport:
    """``phi`` maps every class into itself."""
    part = twisted_classes(G, phi)
    for x in range(G.order):
        if not part.same_class(x, phi.map[x]):
            return PropertyReport("class_invariance", False, x)
    return PropertyReport("class_invariance", True)


def finite_image_finiteness_property(G: FiniteGroup, phi: FiniteEndo) -> PropertyReport:
    """``R(phi)`` equals ``R`` of the endomorphism induced on ``G / ker phi``."""
    K = phi.kernel()
    Q, proj = quotient(G, K)
    phiQ = induced_endo(phi, Q, proj)
    r, rq = reidemeister_number(G, phi), reidemeister_number(Q, phiQ)
    return PropertyReport("kernel_quotient_bijection", r == rq, None, {"R": r, "R_quotient": rq})


def subgroup_as_group(G: FiniteGroup, H):
    """``H`` as a standalone group; returns ``(group, embedding)``."""
    elems = sorted(set(H))
    pos = {h: i for i, h in enumerate(elems)}
    table = [[pos[G.mul[a][b]] for b in elems] for a in elems]
    labels = [G.label(h) for h in elems] if G.element_labels else None
    return build_from_cayley(table, identity=0, labels=labels), tuple(elems)


def restriction_bound_report(G: FiniteGroup, phi: FiniteEndo, H) -> PropertyReport:
    """Bound on ``R(phi|_H)`` through the fixed subgroup of the quotient map.

    Two readings are evaluated: against ``R(phi)`` and against the number of
    ordinary conjugacy classes of ``G``. ``passed`` tracks the first.
    """
    Hg, emb = subgroup_as_group(G, H)
    pos = {h: i for i, h in enumerate(emb)}
    if any(phi.map[h] not in pos for h in emb):
        raise NotInvariant("phi(H) is not contained in H")
    phiH = validate_endo(Hg, [pos[phi.map[h]] for h in emb])
    Q, proj = quotient(G, H)
    phiQ = induced_endo(phi, Q, proj)
    fixed = len(phiQ.fixed_points())
    r_h = reidemeister_number(Hg, phiH)
    r = reidemeister_number(G, phi)
    k = conjugacy_classes(G).count
    details = {
        "R_restricted": r_h,
        "R": r,
        "class_number": k,
        "fixed_quotient": fixed,
        "holds_with_R_phi": r_h <= r * fixed,
        "holds_with_class_number": r_h <= k * fixed,
    }
    return PropertyReport("restriction_bound", details["holds_with_R_phi"], None, details)
