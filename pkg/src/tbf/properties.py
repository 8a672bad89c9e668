"""Structural facts about twisted classes, checked exhaustively on one (G, phi)."""

from __future__ import annotations

from tbf.groups import (
    FiniteEndo,
    FiniteGroup,
    compose,
    conjugacy_classes,
    inner_auto,
    subgroup_closure,
    trivial_endo,
)
from tbf.twisted import (
    PropertyReport,
    burnside_average,
    class_invariance_property,
    epimorphism_of_classes_property,
    finite_image_finiteness_property,
    kernel_coset_property,
    reidemeister_number,
    restriction_bound_report,
    shift_bijection_property,
    twisted_classes,
)


def normal_closure(G: FiniteGroup, elems) -> tuple:
    mul, inv = G.mul, G.inv
    conj = {mul[mul[g][x]][inv[g]] for x in elems for g in range(G.order)}
    return subgroup_closure(G, conj)


def normal_subgroups(G: FiniteGroup) -> list:
    """All normal subgroups, as sorted tuples, ordered by size then elements."""
    cls = conjugacy_classes(G)
    minimal = {normal_closure(G, [r]) for r in cls.reps}
    found = set(minimal)
    frontier = set(minimal)
    while frontier:
        new = set()
        for A in frontier:
            for B in minimal:
                J = subgroup_closure(G, set(A) | set(B))
                if J not in found:
                    new.add(J)
        found |= new
        frontier = new
    return sorted(found, key=lambda H: (len(H), H))


def invariant_normal_subgroups(G: FiniteGroup, phi: FiniteEndo) -> list:
    return [H for H in normal_subgroups(G) if all(phi.map[h] in set(H) for h in H)]


def finite_property_suite(G: FiniteGroup, phi: FiniteEndo, subgroups=None) -> list:
    """Every check over every quantifier: all ``g`` for shifts and inner twists,
    every phi-invariant normal subgroup for quotients and restrictions.

    The restriction bound is reported under two readings; only its
    ``R(phi) * |Fix|`` reading counts toward ``passed``.
    """
    out = []
    r = reidemeister_number(G, phi)
    r_triv = twisted_classes(G, trivial_endo(G)).count
    out.append(PropertyReport("trivial_endo_single_class", r_triv == 1, None, {"R_trivial": r_triv}))
    out.append(kernel_coset_property(G, phi))
    out.append(finite_image_finiteness_property(G, phi))
    out.append(class_invariance_property(G, phi))
    ba = burnside_average(G, phi)
    out.append(PropertyReport("burnside_average", ba == r, None, {"R": r, "average": ba}))

    bad_shift = next((g for g in range(G.order) if not shift_bijection_property(G, phi, g).passed), None)
    out.append(PropertyReport("right_shift", bad_shift is None, bad_shift, {"checked": G.order}))
    bad_inner = next(
        (g for g in range(G.order) if reidemeister_number(G, compose(inner_auto(G, g), phi)) != r), None
    )
    out.append(PropertyReport("inner_twist_invariance", bad_inner is None, bad_inner, {"R": r}))

    subgroups = invariant_normal_subgroups(G, phi) if subgroups is None else subgroups
    epi_fail, bound = None, []
    for H in subgroups:
        if not epimorphism_of_classes_property(G, phi, H).passed and epi_fail is None:
            epi_fail = H
        bound.append(restriction_bound_report(G, phi, H))
    out.append(PropertyReport("epimorphism_of_classes", epi_fail is None, epi_fail, {"subgroups": len(subgroups)}))
    out.append(
        PropertyReport(
            "restriction_bound",
            all(b.passed for b in bound),
            next((H for H, b in zip(subgroups, bound) if not b.passed), None),
            {
                "subgroups": len(subgroups),
                "holds_with_R_phi": sum(b.details["holds_with_R_phi"] for b in bound),
                "holds_with_class_number": sum(b.details["holds_with_class_number"] for b in bound),
            },
        )
    )
    return out
