"""Restricted Lie algebras, algebraic representations and semiproducts.

Vectors are lists of field codes in a fixed basis.  Matrices act on row
vectors from the right: ``rho_z(x_i) = sum_j M[i][j] x_j``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import Field, fp_rank


# -- small dense helpers over a Field (lists of codes) -----------------------


def vadd(F, u, v):
    return [F.add(a, b) for a, b in zip(u, v)]


def vsub(F, u, v):
    return [F.sub(a, b) for a, b in zip(u, v)]


def vscale(F, c, u):
    return [F.mul(c, a) for a in u]


def vfrob(F, u):
    return [F.frob(a) for a in u]


def vecmat(F, v, M):
    n = len(M[0]) if M else 0
    out = [0] * n
    for i, a in enumerate(v):
        if a:
            for j, b in enumerate(M[i]):
                if b:
                    out[j] = F.add(out[j], F.mul(a, b))
    return out


def matmul(F, A, B):
    return [vecmat(F, row, B) for row in A]


def matpow(F, A, e):
    n = len(A)
    R = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(e):
        R = matmul(F, R, A)
    return R


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(n):
    return [[0] * n for _ in range(n)]


def e_mat(n, i, j):
    """Matrix unit e_ij with 1-based indices."""
    M = zero_matrix(n)
    M[i - 1][j - 1] = 1
    return M


def as_codes(F, M):
    return [[F.elem(x) for x in row] for row in M]


def mat_eq(A, B):
    return [list(r) for r in A] == [list(r) for r in B]


def det2(F, G):
    return F.sub(F.mul(G[0][0], G[1][1]), F.mul(G[0][1], G[1][0]))


def inv2(F, G):
    d = det2(F, G)
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    di = F.inv(d)
    return [
        [F.mul(di, G[1][1]), F.mul(di, F.neg(G[0][1]))],
        [F.mul(di, F.neg(G[1][0])), F.mul(di, G[0][0])],
    ]


def transpose(M):
    return [list(r) for r in zip(*M)]


def mat_frob(F, G):
    return [[F.frob(x) for x in row] for row in G]


def mat_scale(F, c, A):
    return [[F.mul(c, x) for x in row] for row in A]


# -- restricted Lie algebras -------------------------------------------------


class RestrictedLie:
    """Finite-dimensional restricted Lie algebra given by structure constants.

    ``bracket[i][j]`` is the coefficient vector of [x_i, x_j];
    ``pmap_basis[i]`` is the coefficient vector of x_i^[p].
    """

    def __init__(self, F: Field, bracket, pmap_basis, names=None):
        self.F = F
        self.dim = len(pmap_basis)
        n = self.dim
        self.bracket_table = [[list(bracket[i][j]) for j in range(n)] for i in range(n)]
        self.pmap_basis = [list(v) for v in pmap_basis]
        self.names = list(names) if names else [f"x{i + 1}" for i in range(n)]

    @classmethod
    def abelian(cls, F, R, names=None):
        n = len(R)
        zero = [[[0] * n for _ in range(n)] for _ in range(n)]
        return cls(F, zero, as_codes(F, R), names)

    @property
    def is_abelian(self):
        return not any(any(v) for row in self.bracket_table for v in row)

    def basis_vector(self, i):
        v = [0] * self.dim
        v[i] = 1
        return v

    def bracket(self, u, v):
        F = self.F
        out = [0] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                c = F.mul(a, b)
                for k, s in enumerate(self.bracket_table[i][j]):
                    if s:
                        out[k] = F.add(out[k], F.mul(c, s))
        return out

    def ad_power(self, a, y, k):
        """a (ad y)^k with the right action a(ad y) = [a, y]."""
        for _ in range(k):
            a = self.bracket(a, y)
        return a

    def jacobson_si(self, a, x):
        """s_1..s_{p-1} with i*s_i the coefficient of t^{i-1} in a (ad(t a + x))^{p-1}."""
        F, p = self.F, self.F.p
        poly = [list(a)]  # coefficients in the formal variable t
        for _ in range(p - 1):
            new = [[0] * self.dim for _ in range(len(poly) + 1)]
            for k, c in enumerate(poly):
                new[k] = vadd(F, new[k], self.bracket(c, x))
                new[k + 1] = vadd(F, new[k + 1], self.bracket(c, a))
            poly = new
        out = []
        for i in range(1, p):
            c = poly[i - 1] if i - 1 < len(poly) else [0] * self.dim
            out.append(vscale(F, pow(i, -1, p), c))
        return out

    def pmap(self, v):
        """v^[p] via semilinearity on multiples of basis vectors and Jacobson sums."""
        F = self.F
        acc = [0] * self.dim
        accp = [0] * self.dim
        for i, a in enumerate(v):
            if not a:
                continue
            term = [0] * self.dim
            term[i] = a
            termp = vscale(F, F.frob(a), self.pmap_basis[i])
            total = vadd(F, accp, termp)
            for s in self.jacobson_si(acc, term):
                total = vadd(F, total, s)
            acc = vadd(F, acc, term)
            accp = total
        return accp

    def random_element(self, rng):
        return [rng.randrange(self.F.q) for _ in range(self.dim)]

    def check_axioms(self, samples=50, seed=0):
        """Antisymmetry, Jacobi and the restricted axioms. Returns {name: bool}."""
        F, n, p = self.F, self.dim, self.F.p
        basis = [self.basis_vector(i) for i in range(n)]
        rng = random.Random(seed)
        ok = {"antisymmetry": True, "jacobi": True, "scalar_pmap": True,
              "additive_pmap": True, "ad_pmap": True}
        for u in basis:
            if any(self.bracket(u, u)):
                ok["antisymmetry"] = False
            for v in basis:
                if vadd(F, self.bracket(u, v), self.bracket(v, u)) != [0] * n:
                    ok["antisymmetry"] = False
                for w in basis:
                    j = vadd(F, vadd(F, self.bracket(u, self.bracket(v, w)),
                                     self.bracket(v, self.bracket(w, u))),
                             self.bracket(w, self.bracket(u, v)))
                    if any(j):
                        ok["jacobi"] = False
        pairs = [(u, v) for u in basis for v in basis]
        pairs += [(self.random_element(rng), self.random_element(rng)) for _ in range(samples)]
        for u, v in pairs:
            c = rng.randrange(F.q)
            if self.pmap(vscale(F, c, u)) != vscale(F, F.frob(c), self.pmap(u)):
                ok["scalar_pmap"] = False
            rhs = vadd(F, self.pmap(u), self.pmap(v))
            for s in self.jacobson_si(u, v):
                rhs = vadd(F, rhs, s)
            if self.pmap(vadd(F, u, v)) != rhs:
                ok["additive_pmap"] = False
            # [u, v^[p]] = u (ad v)^p
            if self.bracket(u, self.pmap(v)) != self.ad_power(u, v, p):
                ok["ad_pmap"] = False
        return ok

    def fp_linearized_pmap(self):
        """F_p matrix of v -> v^[p] on GF(q)^n viewed as F_p^(n m) (abelian case)."""
        F = self.F
        rows = []
        for i in range(self.dim):
            for k in range(F.m):
                v = [0] * self.dim
                v[i] = F._alpha_code_pow(k)
                img = self.pmap(v)
                rows.append([d for c in img for d in F.digits(c)])
        return np.array(rows, dtype=np.int64)

    def torus_check(self):
        """True iff no nonzero v has v^[p] = 0 (abelian case)."""
        if not self.is_abelian:
            return False
        A = self.fp_linearized_pmap()
        return fp_rank(A, self.F.p) == A.shape[0]

    def derived_dim(self):
        """Dimension of [L, L]."""
        vecs = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                vecs.append(self.bracket(self.basis_vector(i), self.basis_vector(j)))
        return _gf_rank(self.F, vecs)

    def pmap_rank(self):
        """GF(q)-rank of the image of the p-map (abelian case: span of basis images)."""
        return _gf_rank(self.F, [self.pmap_basis[i] for i in range(self.dim)])


def _gf_rank(F, vecs):
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return 0
    arr = F.encode(np.array(vecs, dtype=object if F.q > 1 << 62 else np.int64))
    return F.rank(arr)


# -- abelian types -------------------------------------------------------------


@dataclass
class AbelianType:
    """A triple (lambda, R, M): z^[p] = lambda z, x^[p] = R x, rho_z(x) = M x."""

    F: Field
    lam: int
    R: list
    M: list
    label: str = ""
    g_kind: str = ""
    h_kind: str = ""
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.lam = self.F.elem(self.lam)
        self.R = as_codes(self.F, self.R)
        self.M = as_codes(self.F, self.M)

    @property
    def n(self):
        return len(self.R)

    def h(self, names=None):
        return RestrictedLie.abelian(self.F, self.R, names or default_names(self.n))

    def with_field(self, F):
        """Same type over another field (entries must lie in F_p)."""
        def conv(M):
            return [[self._down(x, F) for x in row] for row in M]
        return AbelianType(F, self._down(self.lam, F), conv(self.R), conv(self.M),
                           self.label, self.g_kind, self.h_kind, dict(self.meta))

    def _down(self, x, F):
        if x >= self.F.p:
            raise ValueError("entry not in the prime field")
        return x

    def rho(self, v):
        return vecmat(self.F, v, self.M)

    def describe(self):
        F = self.F
        return {
            "label": self.label,
            "lambda": F.fmt(self.lam),
            "R": [[F.fmt(x) for x in r] for r in self.R],
            "M": [[F.fmt(x) for x in r] for r in self.M],
        }


def default_names(n):
    return ["x", "y", "w"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]


def rm_zero(T: AbelianType):
    F = T.F
    return not any(any(r) for r in matmul(F, T.R, T.M))


def pth_power_condition(T: AbelianType):
    F = T.F
    return mat_eq(matpow(F, T.M, F.p), mat_scale(F, T.lam, T.M))


@dataclass
class AlgebraicRep:
    """Representation of the one-dimensional algebra k z on an abelian h."""

    T: AbelianType

    def check(self):
        return check_algebraic_rep(self.T)


def check_algebraic_rep(T: AbelianType):
    """Conditions (i)-(iv) of an algebraic representation, per condition.

    For one-dimensional abelian g and abelian h, (i) and (iii) hold trivially;
    (ii) reads M^p = lambda M and (iv) reads rho_z(x_i^[p]) = 0, i.e. R M = 0.
    All four are evaluated on basis tuples rather than assumed.
    """
    F, n, p = T.F, T.n, T.F.p
    if any(len(r) != n for r in T.R) or len(T.M) != n or any(len(r) != n for r in T.M):
        raise ValueError("dimension mismatch between R and M")
    h = T.h()
    # (i): rho_[z,z] = [rho_z, rho_z]
    comm = [[F.sub(a, b) for a, b in zip(r1, r2)]
            for r1, r2 in zip(matmul(F, T.M, T.M), matmul(F, T.M, T.M))]
    cond_i = not any(any(r) for r in comm)
    cond_ii = pth_power_condition(T)
    cond_iii = True
    cond_iv = True
    for i in range(n):
        a = h.basis_vector(i)
        for j in range(n):
            b = h.basis_vector(j)
            lhs = T.rho(h.bracket(a, b))
            rhs = vadd(F, h.bracket(T.rho(a), b), h.bracket(a, T.rho(b)))
            if lhs != rhs:
                cond_iii = False
        lhs = T.rho(h.pmap(a))
        rhs = h.ad_power(T.rho(a), a, p - 1)
        if lhs != rhs:
            cond_iv = False
    return {"bracket": cond_i, "restriction": cond_ii, "derivation": cond_iii,
            "pth_power": cond_iv}


def is_algebraic(T):
    return all(check_algebraic_rep(T).values())


def semiproduct(T: AbelianType, check=True):
    """h x| g with basis (x_1..x_n, z): [z, a] = rho_z(a), z^[p] = lambda z."""
    if check and not is_algebraic(T):
        raise ValueError("not an algebraic representation")
    F, n = T.F, T.n
    d = n + 1
    br = [[[0] * d for _ in range(d)] for _ in range(d)]
    for i in range(n):
        img = T.rho([1 if k == i else 0 for k in range(n)])
        br[n][i] = img + [0]
        br[i][n] = [F.neg(c) for c in img] + [0]
    pm = [list(T.R[i]) + [0] for i in range(n)]
    zrow = [0] * d
    zrow[n] = T.lam
    pm.append(zrow)
    return RestrictedLie(F, br, pm, default_names(n) + ["z"])


def restricted_iso(L1: RestrictedLie, L2: RestrictedLie, G):
    """Is the linear map x_i -> sum_j G[i][j] y_j a restricted Lie isomorphism?"""
    F = L1.F
    n = L1.dim
    if L2.dim != n:
        return False
    arr = F.encode(np.array(G, dtype=np.int64))
    if F.rank(arr) != n:
        return False
    for i in range(n):
        a = L1.basis_vector(i)
        if vecmat(F, L1.pmap(a), G) != L2.pmap(vecmat(F, a, G)):
            return False
        for j in range(n):
            b = L1.basis_vector(j)
            if vecmat(F, L1.bracket(a, b), G) != L2.bracket(vecmat(F, a, G), vecmat(F, b, G)):
                return False
    return True
