import json
from itertools import product
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

import tbf.extension as extension
from oracles import naive_twisted_count, semidirect_endo, semidirect_mod
from tbf.abelian import abelian_separating_quotient, reidemeister_number_zn
from tbf.errors import CocycleFailure, EquivarianceFailure, InputError, InvalidEndo, StabilizationFailure
from tbf.extension import (
    LatticeExtension,
    build_separating_quotient,
    compose_ext,
    example_instances,
    extension_from_generators,
    fiber_matrices,
    fiber_orbit_count,
    identity_ext_endo,
    implicit_class_count,
    inner_ext,
    iterate_ext,
    materialize_quotient,
    reidemeister_extension_report,
    reidemeister_finiteness,
    reidemeister_number_extension,
    separating_lattice,
    shift_finiteness_probe,
    tbft_ff_certify,
    validate_extension_endo,
)
from tbf.formats import extension_to_json, parse_extension
from tbf.intlinalg import INFINITE, Lattice
from tbf.library import cyclic
from tbf.twisted import reidemeister_number

BRUTE = json.loads((Path(__file__).parent / "goldens" / "extension_bruteforce.json").read_text())
INSTANCES = example_instances()
FINITE = [k for k in INSTANCES if k != "pm_identity"]


def neg_ext():
    return extension_from_generators(2, cyclic(2), {1: [[-1, 0], [0, -1]]})


def neg_2I():
    return INSTANCES["neg_2I"][1]


def test_validation_errors():
    ext = neg_ext()
    with pytest.raises(InvalidEndo):
        LatticeExtension(2, cyclic(2), (((1, 0), (0, 1)), ((2, 0), (0, 1))))
    with pytest.raises(InvalidEndo):
        LatticeExtension(1, cyclic(3), (((1,),), ((-1,),), ((-1,),)))
    swap = extension_from_generators(2, cyclic(2), {1: [[0, 1], [1, 0]]})
    with pytest.raises(EquivarianceFailure):
        validate_extension_endo(swap, [[2, 0], [0, 3]], [0, 1], [[0, 0], [0, 0]])
    with pytest.raises(CocycleFailure):
        # c(s) + theta(s) c(s) must vanish for s of order 2 with theta = swap
        validate_extension_endo(swap, [[3, 1], [1, 3]], [0, 1], [[0, 0], [1, 0]])
    with pytest.raises(InvalidEndo):
        validate_extension_endo(ext, [[2, 0]], [0, 1], [[0, 0]] * 2)


def test_fiber_matrices_and_finiteness():
    phi = neg_2I()
    mats = fiber_matrices(phi)
    assert sorted(mats.values()) == sorted([[[2, 0], [0, 2]], [[-2, 0], [0, -2]]])
    rep = reidemeister_finiteness(phi)
    assert rep.finite and sorted(rep.determinants.values()) == [1, 9]
    bad = reidemeister_finiteness(INSTANCES["pm_identity"][1])
    assert bad.verdict == "INFINITE" and bad.witness is not None
    assert [r for _, r in bad.growth] == sorted(r for _, r in bad.growth)
    assert bad.growth[-1][1] > bad.growth[0][1]


def test_separating_quotient_for_neg_2I():
    sq = build_separating_quotient(neg_2I())
    assert sq.sublattice == Lattice.standard(2, 3)
    assert sq.order == 18 and sq.refinement_steps == 0
    assert reidemeister_number(sq.quotient_group, sq.induced_endo) == 6


@pytest.mark.parametrize("key, modulus", [("neg_2I", 3), ("neg_2I", 6), ("swap_cocycle", 6), ("swap_cocycle", 12)])
def test_frozen_brute_force(key, modulus):
    expected = BRUTE[f"{key}_mod{modulus}"]
    assert reidemeister_number_extension(INSTANCES[key][1]) == expected


def _brute(phi, modulus):
    ext = phi.ext
    F = ext.F
    el, mul, inv = semidirect_mod(ext.n, modulus, [list(r) for r in F.mul], ext.theta_lists)
    return naive_twisted_count(el, mul, inv, semidirect_endo(ext.n, modulus, phi.M_list, list(phi.psi.map), phi.c))


@pytest.mark.parametrize("key", FINITE)
@pytest.mark.parametrize("power", [1, 2])
def test_against_dictionary_semidirect_product(key, power):
    """Count on (Z/m)^n x| F, m the index of the separating lattice and its double."""
    phi = iterate_ext(INSTANCES[key][1], power)
    if reidemeister_finiteness(phi, probe=()).finite is False:
        assert reidemeister_number_extension(phi) is INFINITE
        return
    H, _, _ = separating_lattice(phi)
    value = reidemeister_number_extension(phi)
    for m in (H.index, 2 * H.index):
        if m ** phi.ext.n * phi.ext.F.order > 800:
            continue
        assert _brute(phi, max(m, 1)) == value


def test_closed_form_for_neg_2I():
    # both fibers: w -> -w on (Z/q)^2, q odd, with (q^2 + 1)/2 orbits; q = 2^n - 1 and 2^n + 1
    phi = neg_2I()
    for n in range(1, 6):
        assert reidemeister_number_extension(phi, n) == 4**n + 2
    assert [reidemeister_number_extension(phi, n, method="quotient") for n in range(1, 4)] == [6, 18, 66]


@pytest.mark.parametrize("key", FINITE)
def test_fibers_agree_with_quotient(key):
    phi = INSTANCES[key][1]
    compared = 0
    for n in range(1, 4):
        phi_n = iterate_ext(phi, n)
        a = reidemeister_number_extension(phi_n, method="fibers")
        if a is INFINITE:
            continue
        H, _, _ = separating_lattice(phi_n)
        if H.index * 3**phi.ext.n * phi.ext.F.order > 200000:
            continue
        assert reidemeister_number_extension(phi_n, method="quotient") == a, (key, n)
        compared += 1
    assert compared >= 1


def test_trivial_fiber_group_is_abelian_case():
    """F trivial: every 1x1 and 2x2 matrix with entries in [-3, 3] against the determinant."""
    flat1 = LatticeExtension(1, cyclic(1), (((1,),),))
    flat2 = LatticeExtension(2, cyclic(1), (((1, 0), (0, 1)),))
    for a in range(-3, 4):
        phi = validate_extension_endo(flat1, [[a]], [0], [[0]])
        assert reidemeister_number_extension(phi, method="quotient") == reidemeister_number_zn([[a]])
    for k, (a, b, c, d) in enumerate(product(range(-3, 4), repeat=4)):
        M = [[a, b], [c, d]]
        phi = validate_extension_endo(flat2, M, [0], [[0, 0]])
        assert reidemeister_number_extension(phi, method="fibers") == reidemeister_number_zn(M)
        if k % 7 == 0:
            assert reidemeister_number_extension(phi, method="quotient") == reidemeister_number_zn(M)


def test_degenerate_minus_one():
    phi = INSTANCES["flat_minus_one"][1]
    sq = build_separating_quotient(phi)
    ab = abelian_separating_quotient([[-1]])
    assert sq.sublattice == Lattice.standard(1, 2) == ab.lattice
    assert sq.order == 2
    cert = tbft_ff_certify(phi)
    assert cert.certified and cert.R == cert.fixed_characters == 2


def test_trivial_endo_of_extension():
    ext = neg_ext()
    phi = validate_extension_endo(ext, [[0, 0], [0, 0]], [0, 0], [[0, 0]] * 2)
    assert all(T == [[0, 0], [0, 0]] for T in fiber_matrices(phi).values())
    sq = build_separating_quotient(phi)
    assert sq.sublattice == Lattice.standard(2) and sq.order == 2
    cert = tbft_ff_certify(phi)
    assert cert.certified and cert.R == 1 and cert.fixed_characters == 1


def test_spec_validity_examples():
    ext = neg_ext()
    validate_extension_endo(ext, [[1, 1], [0, 1]], [0, 1], [[0, 0]] * 2)
    phi = validate_extension_endo(ext, [[1, 0], [0, 1]], [0, 1], [[0, 0]] * 2)
    assert reidemeister_finiteness(phi, probe=()).verdict == "INFINITE"
    assert reidemeister_number_extension(phi) is INFINITE


def test_inner_twist_invariance():
    phi = INSTANCES["swap_cocycle"][1]
    r = reidemeister_number_extension(phi)
    for g in [((1, 0), 0), ((0, 2), 1), ((-1, 3), 1)]:
        twisted = compose_ext(inner_ext(phi.ext, g), phi)
        assert reidemeister_number_extension(twisted) == r
    # the inner automorphism itself acts as conjugation
    ext = phi.ext
    g = ((1, 2), 1)
    c = inner_ext(ext, g)
    x = ((3, -1), 1)
    assert c(x) == ext.mul(ext.mul(g, x), ext.inv(g))


def test_inner_twist_invariance_downstairs():
    phi = neg_2I()
    sq = build_separating_quotient(phi)
    G, endo = sq.quotient_group, sq.induced_endo
    from tbf.groups import compose, inner_auto

    for g in range(G.order):
        assert reidemeister_number(G, compose(inner_auto(G, g), endo)) == 6


def test_composition_matches_pointwise():
    phi = INSTANCES["swap_cocycle"][1]
    ext = phi.ext
    sq = compose_ext(phi, phi)
    for x in [((1, 0), 0), ((2, -1), 1), ((0, 5), 1)]:
        assert sq(x) == phi(phi(x))
    assert iterate_ext(phi, 0) == identity_ext_endo(ext)


def test_certificates():
    certified = 0
    for key in FINITE:
        cert = tbft_ff_certify(INSTANCES[key][1])
        assert cert.certified, key
        assert cert.R == cert.fixed_characters
        certified += 1
    assert certified >= 5
    with pytest.raises(InputError):
        tbft_ff_certify(INSTANCES["pm_identity"][1])


def test_stabilization_guard(monkeypatch):
    # with the whole lattice in place of the separating one the counts must move
    monkeypatch.setattr(extension, "separating_lattice", lambda phi: (Lattice.standard(2), {}, 0))
    with pytest.raises(StabilizationFailure) as exc:
        reidemeister_extension_report(neg_2I())
    assert exc.value.args


def test_implicit_count_matches_materialized():
    phi = INSTANCES["rotation_z4"][1]
    for k in (3, 6):
        L = Lattice.standard(2, k)
        Q = materialize_quotient(phi, L)
        assert implicit_class_count(phi, L) == reidemeister_number(Q.group, Q.endo)


def test_preimage_refinement():
    M = [[0, 1], [1, 0]]
    L = Lattice.from_generators([[2, 0], [0, 1]])
    P = extension._preimage(M, L)
    assert all(L.contains([M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1]]) for v in [(1, 2), (3, 4)])
    assert P == Lattice.from_generators([[1, 0], [0, 2]])


def test_shift_probe():
    rep = shift_finiteness_probe(neg_2I())
    assert rep.group_order == 18 and rep.classes == 6
    assert rep.distinct_shifts >= rep.classes


def test_infinite_instance():
    assert reidemeister_number_extension(INSTANCES["pm_identity"][1]) is INFINITE
    assert reidemeister_number_extension(INSTANCES["flat_minus_one"][1], 2) is INFINITE


def test_json_round_trip():
    for key in ("neg_2I", "swap_cocycle", "rotation_z4"):
        phi = INSTANCES[key][1]
        back = parse_extension(json.loads(json.dumps(extension_to_json(phi))))
        assert reidemeister_number_extension(back) == reidemeister_number_extension(phi)


@settings(max_examples=20, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_random_neg_extension(a, b, c, d):
    """Every M commutes with -I, so any M with both fibers finite gives a valid instance."""
    M = [[a, b], [c, d]]
    phi = validate_extension_endo(neg_ext(), M, [0, 1], [[0, 0]] * 2)
    fin = reidemeister_finiteness(phi, probe=())
    r = reidemeister_number_extension(phi, method="fibers")
    if not fin.finite:
        assert r is INFINITE
        return
    H, _, _ = separating_lattice(phi)
    if H.index**2 * 2 <= 800:
        assert _brute(phi, H.index) == r
    assert r == fiber_orbit_count(phi)
