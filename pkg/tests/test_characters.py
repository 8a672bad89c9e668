import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tbf.characters import (
    build_rep,
    character_table,
    check_table,
    class_function_norm,
    dixon_prime,
    f_point_count,
    field_rank,
    intertwiner_class_function,
    irreducibility_persistence,
    linear_character_reps,
    tbft_verify,
    twisted_class_function_dimension,
)
from tbf.errors import CapExceeded, NotARepresentation, PreconditionNotFPoint
from tbf.groups import compose, enumerate_endomorphisms, identity_endo, inner_auto, trivial_endo
from tbf.library import alternating, corpus_groups, cyclic, named_group, quaternion, symmetric
from tbf.modp import is_prime
from tbf.twisted import reidemeister_number, twisted_classes

GROUPS = corpus_groups()
_TABLES = {}


def table(name):
    if name not in _TABLES:
        _TABLES[name] = character_table(GROUPS[name] if name in GROUPS else named_group(name))
    return _TABLES[name]


def test_dixon_prime():
    p = dixon_prime(6, 6)
    assert is_prime(p) and p % 6 == 1 and p * p > 4 * 6
    assert dixon_prime(6, 6, after=p) > p


def test_z2_table():
    T = character_table(cyclic(2))
    assert T.degrees == (1, 1)
    assert [[T.field.rational(v) for v in row] for row in T.values] == [[1, 1], [1, -1]]


def test_s3_table():
    T = table("S3")
    assert T.degrees == (1, 1, 2)
    G = T.group
    # standard character: 2 on the identity, 0 on transpositions, -1 on 3-cycles
    std = [T.field.rational(T.value(2, x)) for x in range(6)]
    orders = G.element_orders
    assert std == [{1: 2, 2: 0, 3: -1}[orders[x]] for x in range(6)]


@pytest.mark.parametrize(
    "name, degrees",
    [
        ("Q8", (1, 1, 1, 1, 2)),
        ("D4", (1, 1, 1, 1, 2)),
        ("A4", (1, 1, 1, 3)),
        ("D6", (1, 1, 1, 1, 2, 2)),
        ("Z5", (1, 1, 1, 1, 1)),
        ("S4", (1, 1, 2, 3, 3)),
        ("A5", (1, 3, 3, 4, 5)),
    ],
)
def test_degrees(name, degrees):
    T = table(name)
    assert T.degrees == degrees
    assert sum(d * d for d in T.degrees) == T.group.order
    check_table(T)


@pytest.mark.parametrize("name", ["S3", "Q8", "A4", "D6", "Z12", "S4", "A5"])
def test_orthogonality_numerically(name):
    T = table(name)
    X = np.array(T.complex_values())
    w = np.array(T.class_sizes) / T.group.order
    assert np.allclose((X * w) @ X.conj().T, np.eye(T.k), atol=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_permutation_character_decomposes(n):
    """Fixed-point count of S_n splits as trivial plus one irreducible."""
    G = named_group(f"S{n}")
    T = table(f"S{n}")
    # labels are cycle strings, so the moved points are the numbers in them
    moved = [len(G.element_labels[x].replace("(", " ").replace(")", " ").split()) for x in range(G.order)]
    fixed = [n - m for m in moved]
    X = np.array(T.complex_values())
    reps = T.classes.reps
    f = np.array([fixed[z] for z in reps], dtype=float)
    mult = (X.conj() * np.array(T.class_sizes)) @ f / G.order
    assert np.allclose(mult, np.round(mult.real))
    assert sorted(np.round(mult.real).astype(int).tolist()) == [0] * (T.k - 2) + [1, 1]


def test_table_cap():
    with pytest.raises(CapExceeded):
        character_table(symmetric(4), cap=10)


def test_f_points_identity_and_trivial():
    for name in ("S3", "Q8", "A4"):
        G, T = GROUPS[name], table(name)
        assert f_point_count(G, identity_endo(G), T).count == T.k
        assert f_point_count(G, trivial_endo(G), T).fixed_character_ids == (0,)


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "D6", "Z6", "Z8"])
def test_class_count_equals_fixed_characters(name):
    G, T = GROUPS[name], table(name)
    for phi in enumerate_endomorphisms(G):
        rep = tbft_verify(G, phi, max_power=4, table=T)
        assert rep.passed, rep.to_json()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S3", "D4", "Q8", "A4"]), st.integers(0, 100), st.integers(0, 11))
def test_fixed_count_invariant_under_inner_twist(name, pick, g):
    G, T = GROUPS[name], table(name)
    endos = list(enumerate_endomorphisms(G))
    phi = endos[pick % len(endos)]
    twisted = compose(inner_auto(G, g % G.order), phi)
    assert f_point_count(G, twisted, T).count == f_point_count(G, phi, T).count


def test_persistence_and_precondition():
    G, T = GROUPS["S3"], table("S3")
    phi = identity_endo(G)
    rep = irreducibility_persistence(G, phi, T, 2, 1)
    assert rep.passed and len(rep.norms) == 7
    collapse = next(e for e in enumerate_endomorphisms(G) if len(set(e.map)) == 2)
    assert f_point_count(G, collapse, T).count == reidemeister_number(G, collapse)
    with pytest.raises(PreconditionNotFPoint):
        irreducibility_persistence(G, collapse, T, 2, 1)


def test_norm_of_reducible_function():
    T = table("S3")
    F = T.field
    s = [F.add(a, b) for a, b in zip(T.values[0], T.values[2])]
    assert class_function_norm(T, s) == F.from_rational(2)


def test_twisted_class_function_dimension():
    G = GROUPS["A4"]
    for phi in enumerate_endomorphisms(G):
        assert twisted_class_function_dimension(G, phi) == twisted_classes(G, phi).count


def _s3_standard():
    G = symmetric(3)
    # action on the sum-zero plane, basis e1 - e2, e2 - e3
    t, c = G.generators
    assert G.element_labels[t] == "(1 2)" and G.element_labels[c] == "(1 2 3)"
    return G, build_rep(G, 3, {t: [[-1, 1], [0, 1]], c: [[0, -1], [1, -1]]})


def test_build_rep_and_intertwiner():
    G, rho = _s3_standard()
    assert rho.dimension == 2
    res = intertwiner_class_function(G, rho, identity_endo(G))
    assert res.found and res.dimension == 1
    T = character_table(G)
    vals = [rho.field.rational(v) for v in res.values]
    assert vals == [T.field.rational(T.value(2, x)) for x in range(6)]
    assert not intertwiner_class_function(G, rho, trivial_endo(G)).found


def test_intertwiner_values_constant_on_twisted_classes():
    G, rho = _s3_standard()
    for phi in enumerate_endomorphisms(G):
        res = intertwiner_class_function(G, rho, phi)
        if not res.found:
            continue
        part = twisted_classes(G, phi)
        for x in range(6):
            assert res.values[x] == res.values[part.reps[part.class_of[x]]]


def test_bad_rep():
    G = symmetric(3)
    t, c = G.generators
    with pytest.raises(NotARepresentation):
        build_rep(G, 1, {t: [[1, 0], [0, 1]], c: [[0, 1], [1, 0]]})


def test_linear_characters_independent():
    G, T = GROUPS["Z6"], table("Z6")
    F = T.field
    vectors = []
    for _, rho in linear_character_reps(T):
        res = intertwiner_class_function(G, rho, identity_endo(G))
        assert res.found
        vectors.append(res.values)
    assert len(vectors) == 6
    assert field_rank(F, vectors) == 6


def test_quaternion_sign_characters():
    T = character_table(quaternion())
    assert sorted(T.degrees) == [1, 1, 1, 1, 2]
    assert len(linear_character_reps(T)) == 4
    assert character_table(alternating(4)).k == 4
