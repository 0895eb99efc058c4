import itertools
import random
from functools import lru_cache

import pytest

from qpgroups.gf import Field
from qpgroups.pd import (AutElement, Inadmissible, NoRoot, act, admissible_space, aut_solve, build_deformation,
                         deformation_map, enumerate_aut, family_ratio_group, equiv_pd_data, flow, in_aut, is_hopf_morphism,
                         orbit_same, permissible, point_datum, primitive_report, rank2_type, reduce_point,
                         representatives, transform_datum, type_labels, verify_pd_datum)

F9 = Field(3, 2)


@lru_cache(maxsize=None)
def brute_aut(label, tilde=False):
    return frozenset(enumerate_aut(rank2_type(F9, label), tilde))


@pytest.mark.parametrize("label", type_labels(3))
def test_aut_description_matches_brute_force(label):
    T = rank2_type(F9, label)
    assert frozenset(aut_solve(T).elements()) == brute_aut(label)


def test_aut_membership_rejects_singular_and_wrong_gamma():
    T = rank2_type(F9, "T5")
    assert in_aut(T, AutElement(1, ((1, 0), (0, 1))))
    assert not in_aut(T, AutElement(1, ((0, 0), (0, 1))))
    assert not in_aut(T, AutElement(0, ((1, 0), (0, 1))))


@pytest.mark.parametrize("label", ["T1", "T5", "T9", "T14"])
def test_action_is_a_group_action(label):
    T = rank2_type(F9, label)
    rng = random.Random(3)
    fam = aut_solve(T)
    space = admissible_space(T)
    for _ in range(10):
        phi, psi = fam.sample(rng), fam.sample(rng)
        if label == "T9" and (phi.G[0][1] or psi.G[0][1]):
            continue  # only the g12 = 0 subgroup acts on B+(T9)
        P = space.sample(rng)
        assert act(T, phi.then(psi, F9), P) == act(T, psi, act(T, phi, P))
        assert space.contains(act(T, phi, P))


def test_permissibility_needs_an_extension_field():
    with pytest.raises(ValueError):
        permissible(rank2_type(Field(3, 1), "T14"))


@pytest.mark.parametrize("label,expected", [("T1", False), ("T5", True), ("T6", True), ("T9", False),
                                            ("T14", True), ("T(0)", True)])
def test_permissibility(label, expected):
    assert permissible(rank2_type(F9, label)) == expected


@pytest.mark.parametrize("label", ["T3", "T11", "T13", "T(-1)"])
def test_empty_types_have_no_admissible_points(label):
    T = rank2_type(F9, label)
    assert admissible_space(T).empty
    with pytest.raises(Inadmissible):
        point_datum(T, (1, 0, 0) if flow(T) == "A3" else (0, 0, 1, 0, 0))


@pytest.mark.parametrize("label", ["T2", "T5", "T7", "T10", "T14", "T(1)"])
def test_representatives_give_hopf_deformations(label):
    T = rank2_type(F9, label)
    for rep in representatives(T):
        D = point_datum(T, rep.point(F9, 1 if rep.family else None))
        assert verify_pd_datum(D)["ok"]
        H = build_deformation(D)
        assert H.dim == 27
        rep_p = primitive_report(H, T)
        assert rep_p == {"dim_P": 2, "P_iso_h": True}


def test_inadmissible_point_names_failing_condition():
    T = rank2_type(F9, "T1")
    with pytest.raises(Inadmissible, match="chi_P = 0"):
        point_datum(T, (1, 0, 0, 0, 0))


def test_aut_transport_gives_isomorphic_deformations():
    T = rank2_type(F9, "T5")
    rng = random.Random(11)
    P = admissible_space(T).sample(rng)
    phi = aut_solve(T).sample(rng)
    D1 = point_datum(T, P)
    D2 = point_datum(T, act(T, phi, P))
    # phi.D1 and D2 come from the same admissible point, so they are equivalent
    assert equiv_pd_data(transform_datum(D1, phi), D2) is not None
    H1 = build_deformation(transform_datum(D1, phi))
    H0 = build_deformation(D1)
    assert is_hopf_morphism(H0, H1, deformation_map(H0, H1, T, phi))["ok"]


def _points(T):
    S = admissible_space(T)
    out = set()
    for c in itertools.product(range(F9.p), repeat=S.dim):
        P = S.point(list(c))
        if S.valid(P):
            out.add(P)
    return out


def _xi_class(T, name, xi):
    """A family parameter up to the ratios the family is claimed to be invariant under."""
    if xi is None:
        return None
    rep = next(r for r in representatives(T) if r.name == name)
    _, mu = family_ratio_group(T.label, rep, F9)
    return frozenset(F9.mul(xi, t) for t in mu)


@pytest.mark.parametrize("label", ["T5", "T7", "T8", "T10", "T12", "T14", "T(1)"])
def test_orbit_reduction_matches_brute_force_orbits(label):
    # brute-force orbits over GF(9); reduction may lack roots there, but when it
    # succeeds each orbit must get exactly one label and no two orbits share one
    T = rank2_type(F9, label)
    pts = _points(T)
    auts = brute_aut(label, True)
    seen, labels = set(), []
    for P in sorted(pts):
        if P in seen:
            continue
        orbit = {act(T, phi, P) for phi in auts}
        assert orbit <= pts
        seen |= orbit
        names = set()
        for Q in orbit:
            try:
                name, xi, _ = reduce_point(T, Q)
            except NoRoot:
                continue
            names.add((name, _xi_class(T, name, xi)))
        assert len(names) <= 1
        labels.extend(names)
    assert len(labels) == len(set(labels))
    assert len(labels) >= len(representatives(T))


def test_orbit_same_finds_witness():
    T = rank2_type(F9, "T14")
    rng = random.Random(2)
    P = admissible_space(T).sample(rng)
    phi = aut_solve(T).sample(rng)
    w = orbit_same(T, P, act(T, phi, P))
    assert w is not None and act(T, w, P) == act(T, phi, P)
    assert orbit_same(T, (1, 0, 0), (0, 1, 0)) is None
