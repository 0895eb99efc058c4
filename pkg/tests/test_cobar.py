import numpy as np
import pytest

from qpgroups.cobar import CobarComplex, TypeCobar, same_span, verify_cobar_identities
from qpgroups.gf import Field
from qpgroups.pd import H_KINDS, rank2_type

F3 = Field(3, 1)
F9 = Field(3, 2)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("kind", list(H_KINDS))
def test_low_degree_cohomology(p, kind):
    cx = CobarComplex.of(Field(p, 1), H_KINDS[kind])
    assert (cx.h1_dim, cx.h2_dim) == (2, 3)
    assert cx.ker_d1_is_h()


def test_d2_after_d1_vanishes():
    assert CobarComplex.of(F3, H_KINDS["C"]).d2_d1_zero()


def test_standard_classes_are_independent_noncoboundaries():
    cx = CobarComplex.of(F9, H_KINDS["B"])
    rng = np.random.default_rng(5)
    for _ in range(20):
        P = [int(c) for c in rng.integers(0, F9.q, 3)]
        t = cx.chi(P)
        assert cx.is_cocycle(t)
        assert cx.is_coboundary(t) == (not any(P))
        if any(P):
            assert cx.class_coords(t) == P


def test_coboundary_witness_solves_d1():
    cx = CobarComplex.of(F9, H_KINDS["A"])
    rng = np.random.default_rng(7)
    s = F9.encode(rng.integers(0, F9.q, cx.N))
    t = cx.apply_d1(s)
    w = cx.coboundary_witness(t)
    assert w is not None
    assert not ((cx.apply_d1(w) - t) % 3).any()


@pytest.mark.parametrize("label", ["T2", "T5", "T8", "T10", "T14", "T(-1)"])
def test_cobar_identities_on_samples(label):
    fails = verify_cobar_identities(rank2_type(F9, label), samples=15, seed=1)
    assert not any(fails.values()), fails


def test_phi_h_matches_definition_on_t14():
    # T14: h torus (x^[p] = x, y^[p] = y), lambda = 1, rho_z = 0, so Phi_z(t) = t^p - t
    T = rank2_type(F9, "T14")
    tc = TypeCobar.of(T)
    for t in ([1, 0], [4, 7], [F9.generator, 2]):
        expect = [F9.sub(F9.frob(c), c) for c in t]
        assert tc.phi_h(t) == expect


def test_image_of_phi_is_a_span_not_a_set():
    # over GF(9), t -> t^3 - t hits a proper F_3-subspace, but its GF(9)-span is all of h
    T = rank2_type(F9, "T14")
    tc = TypeCobar.of(T)
    assert tc.image_phi_h().shape[0] == 2
    assert same_span(F9, tc.image_phi_h(), tc.ker_rho_h())


def test_emptiness_rank_certificate():
    for label in ["T3", "T11", "T13", "T(-1)"]:
        tc = TypeCobar.of(rank2_type(F9, label))
        assert tc.class_map_rank() == 3 * F9.m
