from dataclasses import replace

import pytest

from qpgroups.gf import Field
from qpgroups.hopf import (check_hopf_axioms, dumps, group_algebra_cyclic, invariant_vector, is_cocommutative,
                           is_commutative, is_connected, is_local, is_semisimple_connected, loads,
                           primitive_space, u_dim_primitive)
from qpgroups.pd import H_KINDS
from qpgroups.uenv import UH

F3 = Field(3, 1)
F9 = Field(3, 2)


@pytest.fixture(scope="module", params=list(H_KINDS))
def uh(request):
    return UH(F9, H_KINDS[request.param]).hopf(name=request.param), request.param


def test_uh_is_a_connected_local_hopf_algebra(uh):
    H, kind = uh
    res = check_hopf_axioms(H)
    assert res["ok"], res["failures"]
    assert is_connected(H)
    assert is_commutative(H) and is_cocommutative(H)
    # u(h) is local iff the p-map is nilpotent
    assert is_local(H) == (kind in "AC")
    assert is_semisimple_connected(H) == (kind == "D")


def test_primitive_space_recovers_h(uh):
    H, _ = uh
    basis, L = primitive_space(H)
    assert L.dim == 2
    assert u_dim_primitive(H) == 9


def test_generator_mode_agrees_with_full_mode():
    H = UH(F3, H_KINDS["C"]).hopf()
    gen = check_hopf_axioms(H, full=False)
    full = check_hopf_axioms(H, full=True)
    assert gen["mode"] == "generators" and full["mode"] == "full"
    assert gen["ok"] and full["ok"]


def test_group_algebra_is_not_connected():
    H = group_algebra_cyclic(F3, 3)
    assert check_hopf_axioms(H)["ok"]
    assert not is_connected(H)


def test_broken_structure_constants_detected():
    H = UH(F3, H_KINDS["A"]).hopf()
    mult = H.mult.copy()
    mult[1, 3, 4, 0] = (mult[1, 3, 4, 0] + 1) % 3  # x * y gets an extra x*y term
    mult[3, 1, 4, 0] = (mult[3, 1, 4, 0] + 1) % 3
    bad = replace(H, mult=mult, memo={})
    res = check_hopf_axioms(bad, full=True)
    assert not res["ok"]


def test_antipode_corruption_detected():
    H = UH(F3, H_KINDS["A"]).hopf()
    S = H.antipode.copy()
    S[1] = H.basis(1)  # S(x) = x instead of -x
    res = check_hopf_axioms(replace(H, antipode=S, memo={}), full=True)
    assert not res["antipode"]


def test_text_roundtrip_is_exact(uh):
    H, _ = uh
    text = dumps(H)
    H2 = loads(text)
    assert dumps(H2) == text
    assert (H2.mult == H.mult).all() and (H2.comult == H.comult).all()
    assert (H2.antipode == H.antipode).all()


def test_invariants_separate_kinds():
    vecs = {k: invariant_vector(UH(F9, R).hopf()) for k, R in H_KINDS.items()}
    assert len({repr(sorted(v.items())) for v in vecs.values()}) == 4
