import pytest

from qpgroups.gf import Field
from qpgroups.pd import H_KINDS, rank2_type, type_labels
from qpgroups.rla import (AbelianType, RestrictedLie, check_algebraic_rep, det2, inv2, is_algebraic,
                          matmul, matpow, restricted_iso, rm_zero, semiproduct)

F9 = Field(3, 2)


@pytest.mark.parametrize("label", type_labels(3))
def test_catalogue_types_are_algebraic(label):
    T = rank2_type(F9, label)
    assert rm_zero(T)
    assert all(check_algebraic_rep(T).values())


@pytest.mark.parametrize("label", ["T2", "T5", "T8", "T10", "T12", "T14", "T(1)"])
def test_semiproduct_satisfies_restricted_axioms(label):
    L = semiproduct(rank2_type(F9, label))
    assert L.dim == 3
    assert all(L.check_axioms(samples=20).values())


def test_nonalgebraic_rep_detected():
    # rho_z = x -> y with x^[p] = x violates R M = 0
    T = AbelianType(F9, 0, [[1, 0], [0, 0]], [[0, 1], [0, 0]])
    flags = check_algebraic_rep(T)
    assert not flags["pth_power"]
    assert not is_algebraic(T)
    with pytest.raises(ValueError):
        semiproduct(T)


def test_restriction_condition_detected():
    # M^p = lambda M fails for a unipotent M with lambda = 1
    T = AbelianType(F9, 1, [[0, 0], [0, 0]], [[0, 1], [0, 0]])
    assert not check_algebraic_rep(T)["restriction"]


def test_torus_detection():
    assert RestrictedLie.abelian(F9, H_KINDS["D"]).torus_check()
    for h in "ABC":
        assert not RestrictedLie.abelian(F9, H_KINDS[h]).torus_check()


def test_pmap_is_semilinear_on_abelian_kinds():
    for R in H_KINDS.values():
        L = RestrictedLie.abelian(F9, R)
        ok = L.check_axioms(samples=30)
        assert ok["scalar_pmap"] and ok["additive_pmap"]


def test_heisenberg_jacobson_formula():
    # [x, y] = w central, all p-maps zero: (x + y)^[p] = s_1 + ... + s_{p-1}
    F = Field(5, 1)
    n = 3
    br = [[[0] * n for _ in range(n)] for _ in range(n)]
    br[0][1] = [0, 0, 1]
    br[1][0] = [0, 0, F.p - 1]
    L = RestrictedLie(F, br, [[0] * n] * n)
    assert all(L.check_axioms(samples=10).values())
    assert L.derived_dim() == 1


def test_restricted_iso_between_abelian_kinds():
    L = RestrictedLie.abelian(F9, H_KINDS["C"])
    assert restricted_iso(L, L, [[1, 0], [0, 1]])
    assert not restricted_iso(L, L, [[0, 1], [1, 0]])
    B = RestrictedLie.abelian(F9, H_KINDS["B"])
    assert not any(restricted_iso(L, B, [[a, b], [c, d]])
                   for a in range(3) for b in range(3) for c in range(3) for d in range(3))


def test_small_matrix_helpers():
    G = [[2, 1], [1, 1]]
    assert det2(F9, G) == 1
    assert matmul(F9, G, inv2(F9, G)) == [[1, 0], [0, 1]]
    assert matpow(F9, G, 0) == [[1, 0], [0, 1]]
    assert matpow(F9, G, 3) == matmul(F9, G, matmul(F9, G, G))
