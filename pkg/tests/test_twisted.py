import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from oracles import table_twisted_count
from tbf.groups import (
    compose,
    enumerate_endomorphisms,
    identity_endo,
    induced_endo,
    inner_auto,
    iterate,
    quotient,
    trivial_endo,
    validate_endo,
)
from tbf.library import corpus_groups, cyclic, symmetric
from tbf.properties import finite_property_suite, invariant_normal_subgroups, normal_subgroups
from tbf.twisted import (
    burnside_average,
    reidemeister_number,
    reidemeister_report,
    shift_bijection_property,
    twisted_classes,
)

GOLDEN = json.loads((Path(__file__).parent / "goldens" / "finite_reidemeister.json").read_text())
GROUPS = corpus_groups()


def _endos(name):
    return list(enumerate_endomorphisms(GROUPS[name]))


def test_trivial_endo_single_class():
    for G in GROUPS.values():
        assert reidemeister_number(G, trivial_endo(G)) == 1


def test_identity_gives_conjugacy_classes():
    assert reidemeister_number(symmetric(3), identity_endo(symmetric(3))) == 3
    assert reidemeister_number(cyclic(5), identity_endo(cyclic(5))) == 5


def test_doubling_on_z4():
    G = cyclic(4)
    phi = validate_endo(G, [(2 * x) % 4 for x in range(4)])
    assert reidemeister_number(G, phi) == 1


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_matches_frozen_union_find(name):
    """Sequences R(phi^n), n <= 6, frozen from the every-x union-find oracle."""
    G = GROUPS[name]
    rows = {tuple(r["map"]): r["R"] for r in GOLDEN[name]["endomorphisms"]}
    endos = _endos(name)
    assert {e.map for e in endos} == set(rows)
    for phi in endos:
        assert [reidemeister_number(G, phi, n) for n in range(1, 7)] == rows[phi.map]


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_burnside_average(name):
    G = GROUPS[name]
    for phi in _endos(name):
        assert burnside_average(G, phi) == reidemeister_number(G, phi)


def test_report_partition_is_canonical():
    G = symmetric(3)
    rep = reidemeister_report(G, identity_endo(G))
    data = rep.to_json()
    assert data["R"] == 3 and data["reps"][0] == 0
    assert sorted(x for c in data["classes"] for x in c) == list(range(6))
    with pytest.raises(ValueError):
        reidemeister_report(G, identity_endo(G), 0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["S3", "D4", "Q8", "A4", "D6", "Z8"]), st.integers(0, 500), st.integers(0, 23))
def test_twisted_class_invariants(name, pick, g):
    G = GROUPS[name]
    endos = _endos(name)
    phi = endos[pick % len(endos)]
    g %= G.order
    part = twisted_classes(G, phi)
    # y and g*y*phi(g)^-1 always share a class
    for y in range(G.order):
        z = G.mul[G.mul[g][y]][G.inv[phi(g)]]
        assert part.same_class(y, z)
    # twisting by an inner automorphism keeps the count
    assert reidemeister_number(G, compose(inner_auto(G, g), phi)) == part.count
    assert shift_bijection_property(G, phi, g).passed


def test_generator_expansion_agrees_with_every_x():
    G = GROUPS["D6"]
    t = [list(r) for r in G.mul]
    for phi in _endos("D6")[:20]:
        assert reidemeister_number(G, phi) == table_twisted_count(t, list(phi.map))


def test_quotient_drops_count():
    # S3 -> S3/A3: identity has 3 classes upstairs and 2 downstairs
    G = symmetric(3)
    normals = normal_subgroups(G)
    assert [len(H) for H in normals] == [1, 3, 6]
    assert len(invariant_normal_subgroups(G, identity_endo(G))) == 3
    Q, proj = quotient(G, normals[1])
    phi_bar = induced_endo(identity_endo(G), Q, proj)
    assert reidemeister_number(G, identity_endo(G)) == 3
    assert reidemeister_number(Q, phi_bar) == 2


@pytest.mark.parametrize("name", ["S3", "Q8", "A4", "Z6"])
def test_property_suite(name):
    G = GROUPS[name]
    for phi in _endos(name):
        for p in finite_property_suite(G, phi):
            assert p.passed, (name, phi.map, p.name, p.witness)


def test_iterates_eventually_periodic():
    G = GROUPS["D4"]
    for phi in _endos("D4"):
        seq = [reidemeister_number(G, phi, n) for n in range(1, 9)]
        assert all(v >= 1 for v in seq)
        assert seq[7] == reidemeister_number(G, iterate(phi, 8))
