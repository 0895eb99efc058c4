import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpgroups.gf import Field, fp_nullspace, fp_rank, fp_solve, is_irreducible, mu_n, solve_power

FIELDS = [(3, 1), (3, 2), (3, 4), (5, 2), (7, 3)]


@pytest.fixture(params=FIELDS, ids=lambda pm: f"GF({pm[0]}^{pm[1]})")
def F(request):
    return Field(*request.param)


def codes(F):
    return st.integers(0, F.q - 1)


def test_p2_rejected():
    with pytest.raises(ValueError):
        Field(2, 3)
    with pytest.raises(ValueError):
        Field(9, 1)


def test_fields_are_cached():
    assert Field(3, 4) is Field(3, 4)


def test_modulus_irreducible(F):
    assert len(F.modulus) == F.m + 1
    assert is_irreducible(list(F.modulus), F.p)


def test_irreducibility_brute_force_gf9():
    # x^2 + bx + c over F_3 is irreducible iff it has no root
    for b, c in itertools.product(range(3), repeat=2):
        has_root = any((x * x + b * x + c) % 3 == 0 for x in range(3))
        assert is_irreducible([c, b, 1], 3) == (not has_root)


def test_field_axioms_exhaustive_gf9():
    F = Field(3, 2)
    els = range(F.q)
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in els:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in (0, 1, 5, 8):
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_ring_laws(data):
    F = Field(*data.draw(st.sampled_from(FIELDS)))
    a, b, c = (data.draw(codes(F)) for _ in range(3))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_frobenius_is_additive_and_multiplicative(data):
    F = Field(*data.draw(st.sampled_from(FIELDS)))
    a, b = data.draw(codes(F)), data.draw(codes(F))
    assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
    assert F.inv_frob(F.frob(a)) == a
    assert F.frob(a, F.m) == a


def test_generator_has_full_order(F):
    g = F.generator
    assert F.element_order(g) == F.q - 1
    seen = {F.pow(g, k) for k in range(F.q - 1)} if F.q < 5000 else None
    if seen is not None:
        assert len(seen) == F.q - 1


def test_prime_field_detection(F):
    for a in range(F.p):
        assert F.in_prime_field(a)
    for a in range(F.p, min(F.q, 60)):
        assert F.in_prime_field(a) == (F.frob(a) == a)


def test_mu_n_and_roots():
    F = Field(3, 2)
    for n in (1, 2, 4, 8):
        mu = mu_n(F, n)
        assert len(mu) == n
        assert all(z ** n == F.one for z in mu)
    # cubes in GF(9): x -> x^3 is bijective, so every element has exactly one cube root
    for c in range(1, F.q):
        roots = solve_power(3, F.from_code(c))
        assert len(roots) == 1
    sq = {F.mul(a, a) for a in range(1, F.q)}
    for c in range(1, F.q):
        assert F.is_nth_power(c, 2) == (c in sq)
        assert len(solve_power(2, F.from_code(c))) == (2 if c in sq else 0)


def test_solve_power_matches_brute_force_gf81():
    F = Field(3, 4)
    for n in (2, 4, 5, 16):
        for c in (1, 2, F.generator, F.pow(F.generator, 10)):
            brute = {x for x in range(1, F.q) if F.pow(x, n) == c}
            assert {s.code for s in solve_power(n, F.from_code(c))} == brute


def test_fmt_parse_roundtrip(F):
    for a in range(min(F.q, 400)):
        assert F.parse(F.fmt(a)) == a


def test_scalar_operators():
    F = Field(5, 2)
    x, y = F.from_code(7), F.from_code(13)
    assert (x + y) - y == x
    assert (x * y) / y == x
    assert x ** (F.q - 1) == F.one
    assert -x + x == F.zero
    assert x.frobenius().inv_frobenius() == x
    assert F(7) == F(2)
    with pytest.raises(ValueError):
        F.from_code(F.q)


def test_vectorised_ops_agree_with_scalar_ops(F):
    rng = np.random.default_rng(1)
    a = rng.integers(0, F.q, 50)
    b = rng.integers(0, F.q, 50)
    A, B = F.encode(a), F.encode(b)
    prod = F.decode(F.vmul(A, B))
    assert [int(v) for v in prod] == [F.mul(int(u), int(v)) for u, v in zip(a, b)]
    fr = F.decode(F.vfrob(A))
    assert [int(v) for v in fr] == [F.frob(int(u)) for u in a]


def test_matmul_rank_nullspace_solve(F):
    rng = np.random.default_rng(2)
    A = F.encode(rng.integers(0, F.q, (4, 6)))
    B = F.encode(rng.integers(0, F.q, (6, 3)))
    C = F.matmul(A, B)
    # reference product entry by entry
    a, b, c = F.decode(A), F.decode(B), F.decode(C)
    for i in range(4):
        for j in range(3):
            acc = 0
            for k in range(6):
                acc = F.add(acc, F.mul(int(a[i, k]), int(b[k, j])))
            assert int(c[i, j]) == acc
    N = F.nullspace(A)
    assert F.rank(A) + len(N) == 6
    if len(N):
        assert not F.matmul(A, N.transpose(1, 0, 2)).any()
    x = F.solve(A, C[:, 0])
    assert x is not None
    assert (F.matmul(A, x[:, None])[:, 0] == C[:, 0]).all()


def test_prime_field_linear_algebra():
    p = 7
    A = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert fp_rank(A, p) == 2
    N = fp_nullspace(A, p)
    assert N.shape[0] == 1
    assert not ((A @ N.T) % p).any()
    x = fp_solve(A, np.array([[6], [5], [2]]) % p, p)
    assert x is not None
    assert not ((A @ x - np.array([[6], [5], [2]])) % p).any()
