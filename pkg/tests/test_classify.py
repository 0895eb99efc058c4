import pytest

from qpgroups import classify as C
from qpgroups.gf import Field
from qpgroups.hopf import check_hopf_axioms
from qpgroups.pd import H_KINDS, build_u_T, rank2_type
from qpgroups.uenv import UH

F9 = Field(3, 2)


def test_guard_turns_exceptions_into_failures():
    c = C._guard("x", F9, lambda: 1 / 0)
    assert not c.ok and "ZeroDivisionError" in c.witness["error"]
    assert c.to_dict()["status"] == "fail" and c.to_dict()["field"] == "GF(3^2)"


def test_xi_samples_are_distinct_and_deterministic():
    F = Field(3, 12)
    xs = C.xi_samples(F, 8)
    assert len(set(xs)) == 8 and xs == C.xi_samples(F, 8)
    assert xs[:3] == [0, 1, 2]


def test_type_enumeration_p3():
    checks = C.check_type_enumeration(3)
    assert all(c.ok for c in checks), [c.to_dict() for c in checks if not c.ok]
    total = checks[-1]
    # zeta in {0, 1, -1}: three classes under zeta ~ 1/zeta
    assert total.witness["orbits"] == 14 + 3


def test_type_table_over_gf9():
    checks = C.verify_type_table(F9)
    assert len(checks) == 32
    assert all(c.ok for c in checks), [c.name for c in checks if not c.ok]


def test_corrupted_claim_is_reported_by_row():
    claims = dict(C.TYPE_TABLE_CLAIMS)
    claims["T7"] = (False,) + claims["T7"][1:]
    bad = [c.name for c in C.verify_type_table(F9, claims) if not c.ok]
    assert bad == ["types.table.T7.flags"]


def test_emptiness_checks():
    checks = C.verify_emptiness(F9, samples=20)
    assert len(checks) == 4 and all(c.ok for c in checks)


def test_parse_texpr_keeps_coefficients_on_pure_tensors():
    t = C.parse_texpr(F9, "2*x^2*y|x", ["x", "y", "z"])
    assert t == {((0, 0, 1), (0,)): 2}


def test_bucket_of_uh_and_u_T():
    assert C.bucket(UH(F9, H_KINDS["B"]).hopf()) == "T"
    assert C.bucket(build_u_T(rank2_type(F9, "T5"))) == "C"


def test_witt_carry_row_is_a_hopf_algebra_and_printed_a1_is_not():
    rows = {r.name: r for r in C.appendix_rows(F9, 1)}
    witt = rows["A1[witt]"].build(F9)
    assert check_hopf_axioms(witt)["ok"]
    assert C.algebra_flags(witt) == {"connected": True, "commutative": True, "semisimple": True,
                                     "local": False}
    printed = check_hopf_axioms(rows["A1"].build(F9))
    assert not printed["ok"] and not printed["coassociativity"]


@pytest.mark.parametrize("name", ["A2", "B1", "B2", "C5", "C9"])
def test_selected_appendix_rows(name):
    pres = next(r for r in C.appendix_rows(F9, 1) if r.name == name)
    c = C.check_appendix_row(F9, pres)
    assert c.ok, c.witness


def test_primitive_isomorphisms():
    checks = C.verify_primitive_isos(F9)
    assert [c.name for c in checks] == ["crosswalk.u(T3)=C", "crosswalk.u(T11)=C", "crosswalk.u(T13)=C",
                                        "crosswalk.u(T(-1))=C"]
    assert all(c.ok for c in checks), [c.witness for c in checks]


def test_c_family_swap_isomorphism():
    checks = C.check_c_family_iso(F9)
    assert checks and all(c.ok for c in checks)


def test_zeta_class_count():
    c = C.check_zeta_class_count(F9)
    assert c.ok and c.witness["classes"] == 2
