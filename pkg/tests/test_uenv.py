import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpgroups.gf import Field
from qpgroups.pd import H_KINDS
from qpgroups.uenv import (UH, AlgElem, PBWAlgebra, TensorElem, coproduct, decompose_plus, omega,
                           parse_expr)

F3 = Field(3, 1)
F9 = Field(3, 2)


def heisenberg_like(F):
    # [y, x] = w central, x^p = y^p = w^p = 0
    names = ["x", "y", "w"]
    pth = [{}, {}, {}]
    comm = {(1, 0): parse_expr(F, "w", names)}
    return PBWAlgebra(F, names, pth, comm)


def test_dimension_and_basis_indexing():
    A = UH(F9, H_KINDS["C"])
    assert A.dim == 9
    for i in range(A.dim):
        assert A.index(A.exps(i)) == i
    with pytest.raises(ValueError):
        A.index((3, 0))


def test_pth_power_relation_in_uh():
    # kind C: x^[p] = y, y^[p] = 0
    A = UH(F9, H_KINDS["C"])
    x = AlgElem.generator(A, "x")
    y = AlgElem.generator(A, "y")
    assert x * x * x == y
    assert y * y * y == 0


def test_parse_and_print_roundtrip():
    A = UH(F9, H_KINDS["D"])
    e = AlgElem.parse(A, "1 + 2*x*y + (a)*y^2 - x^2")
    assert AlgElem.parse(A, e.to_text()) == e
    assert e.constant_term() == 1


def test_unknown_symbol_rejected():
    with pytest.raises(ValueError):
        parse_expr(F3, "q*x", ["x", "y"])


def test_commutator_relation_and_associativity():
    A = heisenberg_like(F3)
    x, y, w = (AlgElem.generator(A, n) for n in "xyw")
    assert y * x - x * y == w
    rng = np.random.default_rng(0)
    for _ in range(10):
        u, v, t = (AlgElem.from_dense(A, F3.encode(rng.integers(0, 3, A.dim))) for _ in range(3))
        assert (u * v) * t == u * (v * t)


def test_dense_mul_matches_sparse_mul():
    A = heisenberg_like(F3)
    rng = np.random.default_rng(3)
    for _ in range(5):
        u = F3.encode(rng.integers(0, 3, A.dim))
        v = F3.encode(rng.integers(0, 3, A.dim))
        dense = AlgElem.from_dense(A, A.mul(u, v))
        assert dense == AlgElem.from_dense(A, u) * AlgElem.from_dense(A, v)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=2, max_size=2), st.lists(st.integers(0, 8), min_size=2, max_size=2))
def test_generators_are_primitive_and_delta_is_multiplicative(a, b):
    A = UH(F9, H_KINDS["B"])
    H = A.hopf()
    r = AlgElem.from_dense(A, A.linear_part(a))
    s = AlgElem.from_dense(A, A.linear_part(b))
    d = coproduct(r, H)
    unit = (0, 0)
    expect = {}
    for e, c in r.coeffs.items():
        expect[(e, unit)] = c
        expect[(unit, e)] = c
    assert d == TensorElem(A, 2, expect)
    # Delta(rs) = Delta(r) Delta(s)
    lhs = H.delta((r * s).dense())
    rhs = H.tensor_mul(H.delta(r.dense()), H.delta(s.dense()))
    assert (lhs == rhs).all()


def test_omega_is_frobenius_semilinear():
    A = UH(F9, H_KINDS["A"])
    r = AlgElem.from_dense(A, A.linear_part([1, 2]))
    c = F9.from_code(5)
    lhs = omega(r.scale(c))
    assert lhs == omega(r).scale(c ** 3)


def test_omega_rejects_nonlinear_input():
    A = UH(F9, H_KINDS["A"])
    with pytest.raises(ValueError):
        omega(AlgElem.parse(A, "x*y"))


def test_tensor_text_roundtrip():
    A = UH(F9, H_KINDS["A"])
    t = TensorElem.parse(A, "2*x|y + (a)*x^2|y - y|x*y")
    assert TensorElem.parse(A, t.to_text()) == t


def test_decompose_plus():
    A = UH(F3, H_KINDS["A"])
    lin, tail = decompose_plus(AlgElem.parse(A, "x + 2*y + x*y^2"))
    assert lin == AlgElem.parse(A, "x + 2*y")
    assert tail == AlgElem.parse(A, "x*y^2")
    with pytest.raises(ValueError):
        decompose_plus(AlgElem.parse(A, "1 + x"))


def test_antipode_on_generators_is_negation():
    A = UH(F9, H_KINDS["D"])
    H = A.hopf()
    for g in H.generators:
        assert (H.antipode[g] == (-H.basis(g)) % 3).all()
