"""Cobar complex of u(h) in degrees <= 3, cohomology coordinates and Phi_z.

Cochains are dense digit arrays indexed by augmentation monomials: a degree-d
cochain has shape (N,)*d + (m,) with N = p^n - 1, and slot index a stands for
the PBW monomial with index a + 1.  The differentials have F_p entries.
"""

from __future__ import annotations

import math
import random
from functools import cached_property, lru_cache
from itertools import product

import numpy as np
import scipy.sparse as sp

from .gf import Field, FpSolver, fp_nullspace, fp_rank
from .rla import AbelianType, matpow, vadd, vecmat, vfrob, vsub
from .uenv import UH, apply_slot, omega_texpr, omega_coeffs


class CobarComplex:
    """Differentials and cohomology of Omega u(h); independent of the restriction."""

    def __init__(self, uh: UH):
        self.uh = uh
        self.F = uh.F
        self.p = uh.p
        self.n = uh.n
        self.d = uh.dim
        self.N = self.d - 1

    @classmethod
    def of(cls, F: Field, R):
        return _complex(F, tuple(tuple(F.elem(c) for c in row) for row in R))

    # reduced coproduct on augmentation monomials: Dbar[a, i, j]
    @cached_property
    def dbar(self):
        D = self.uh.binom_coproduct
        return np.ascontiguousarray(D[1:, 1:, 1:])

    @cached_property
    def d1(self):
        """(N, N*N) F_p matrix: s -> -Delta_bar(s) (row convention)."""
        return (-self.dbar.reshape(self.N, self.N * self.N)) % self.p

    @cached_property
    def d1_solver(self):
        return FpSolver(self.d1.T, self.p)

    @cached_property
    def d2(self):
        """Sparse (N^2, N^3) F_p matrix of the second differential."""
        N, p = self.N, self.p
        rows, cols, vals = [], [], []
        nz = [list(zip(*np.nonzero(self.dbar[a]))) for a in range(N)]
        for i in range(N):
            for j in range(N):
                r = i * N + j
                for k, l in nz[i]:
                    rows.append(r)
                    cols.append((k * N + l) * N + j)
                    vals.append(-int(self.dbar[i, k, l]))
                for k, l in nz[j]:
                    rows.append(r)
                    cols.append((i * N + k) * N + l)
                    vals.append(int(self.dbar[j, k, l]))
        M = sp.coo_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(N * N, N**3)).tocsr()
        M.sum_duplicates()
        M.data %= p
        M.eliminate_zeros()
        return M

    def multideg(self, a):
        return self.uh.exps(a + 1)

    # applying differentials to digit-array cochains
    def apply_d1(self, s):
        F = self.F
        return (self.d1.T @ s % F.p).reshape(self.N, self.N, F.m)

    def apply_d2(self, t):
        F = self.F
        flat = t.reshape(self.N * self.N, F.m)
        out = (self.d2.T @ flat) % F.p
        return np.asarray(out, dtype=np.int64).reshape(self.N, self.N, self.N, F.m)

    # cohomology dimensions
    @cached_property
    def rank_d1(self):
        return fp_rank(self.d1, self.p)

    @cached_property
    def rank_d2(self):
        """Rank of d2 computed block by block over multidegrees."""
        N = self.N
        blocks = {}
        for i in range(N):
            for j in range(N):
                key = tuple(a + b for a, b in zip(self.multideg(i), self.multideg(j)))
                blocks.setdefault(key, []).append(i * N + j)
        M = self.d2.tocsr()
        total = 0
        for key, rows in blocks.items():
            sub = M[rows]
            cols = np.unique(sub.indices)
            if cols.size == 0:
                continue
            dense = sub[:, cols].toarray() % self.p
            total += fp_rank(dense, self.p)
        return total

    @property
    def h1_dim(self):
        return self.N - self.rank_d1

    @property
    def h2_dim(self):
        return self.N * self.N - self.rank_d2 - self.rank_d1

    def d2_d1_zero(self):
        prod = (self.d2.T @ self.d1.T) % self.p
        return not np.asarray(prod).any()

    def ker_d1_is_h(self):
        """ker d1 on u+ is spanned by the generators."""

        K = fp_nullspace(self.d1.T, self.p)
        gens = [self.uh._pw[k] - 1 for k in range(self.n)]
        if K.shape[0] != self.n:
            return False
        return all(set(np.nonzero(row)[0]) <= set(gens) for row in K)

    # standard cocycles
    def lin_index(self, k):
        return self.uh._pw[k] - 1

    def xx(self, i, j):
        """x_i (x) x_j as an F_p array (N, N)."""
        t = np.zeros((self.N, self.N), dtype=np.int64)
        t[self.lin_index(i), self.lin_index(j)] = 1
        return t

    def omega(self, r):
        """omega of r = sum r_k x_k (codes) as a digit cochain (N, N, m)."""
        F = self.F
        expr = {(k,): c for k, c in enumerate(r) if c}
        full = self.uh.dense_texpr(omega_texpr(F, expr))
        return full[1:, 1:]

    def pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def chi(self, P):
        """chi_P = sum a_ij x_i (x) x_j + omega(sum b_k x_k); P = (a_ij..., b_k...)."""
        F = self.F
        prs = self.pairs()
        out = self.omega(list(P[len(prs):]))
        for (i, j), a in zip(prs, P[: len(prs)]):
            if a:
                out = (out + F.lift(self.xx(i, j)) @ F.mul_matrix(a) % F.p) % F.p
        return out

    @cached_property
    def class_basis(self):
        """F_p matrix whose columns are x_i (x) x_j (i<j), omega(x_k), then d1 columns."""
        cols = [self.xx(i, j).ravel() for i, j in self.pairs()]
        for k in range(self.n):
            e = [0] * self.n
            e[k] = 1
            cols.append(self.omega(e)[..., 0].ravel())
        A = np.array(cols, dtype=np.int64).T
        return np.concatenate([A, self.d1.T], axis=1)

    @cached_property
    def class_solver(self):
        return FpSolver(self.class_basis, self.p)

    def is_cocycle(self, t):
        return not self.apply_d2(t).any()

    def class_coords_linear(self, t):
        """(a_ij, c_k) digit rows with [t] = sum a [x_i x_j] + sum c [omega(x_k)]."""
        F = self.F
        sol = self.class_solver.solve(t.reshape(self.N * self.N, F.m))
        if sol is None:
            raise ValueError("not a cocycle")
        k = len(self.pairs()) + self.n
        return sol[:k]

    def class_coords(self, t):
        """Point P = (a_ij..., b_k...) with [t] = [chi_P]; codes."""
        F = self.F
        if not self.is_cocycle(t):
            raise ValueError("not a cocycle")
        lin = self.class_coords_linear(t)
        npair = len(self.pairs())
        codes = [F.from_digits(r) for r in lin]
        return codes[:npair] + [F.inv_frob(c) for c in codes[npair:]]

    def coboundary_witness(self, t):
        """s in u+ with d1(s) = t, or None."""
        F = self.F
        sol = self.d1_solver.solve(t.reshape(self.N * self.N, F.m))
        return sol

    def is_coboundary(self, t):
        return bool(self.d1_solver.consistent(t.reshape(self.N * self.N, self.F.m)).all())


@lru_cache(maxsize=None)
def _complex(F, R):
    return CobarComplex(UH(F, [list(r) for r in R]))


class TypeCobar:
    """Type-dependent operators rho_z and Phi_z on the cobar complex."""

    def __init__(self, T: AbelianType):
        self.T = T
        self.F = T.F
        self.p = T.F.p
        self.cx = CobarComplex.of(T.F, T.R)
        self.uh = self.cx.uh
        self.N = self.cx.N

    @classmethod
    def of(cls, T):
        key = (T.F, T.lam, tuple(map(tuple, T.R)), tuple(map(tuple, T.M)))
        return _type_cobar(key, T)

    @cached_property
    def D_full(self):
        """rho_z as a derivation of u(h): (d, d, m)."""
        uh = self.uh
        images = [uh.linear_part(self.T.M[k]) for k in range(self.T.n)]
        return uh.derivation(images)

    @cached_property
    def D(self):
        return np.ascontiguousarray(self.D_full[1:, 1:])

    @cached_property
    def D_pm1(self):
        F = self.F
        out = F.lift(np.eye(self.N, dtype=np.int64))
        for _ in range(self.p - 1):
            out = F.matmul(out, self.D)
        return out

    @cached_property
    def pow_full(self):
        """b -> b^p on the basis of u(h): (d, d, m)."""
        uh, F = self.uh, self.F
        out = F.zeros((uh.dim, uh.dim))
        for b in range(uh.dim):
            e = F.zeros(uh.dim)
            e[b, 0] = 1
            out[b] = uh.power(e, self.p)
        return out

    @cached_property
    def Pow(self):
        return np.ascontiguousarray(self.pow_full[1:, 1:])

    @property
    def prime_rational(self):
        F = self.F
        return F.is_prime_rational(self.D) and F.is_prime_rational(self.Pow)

    # rho and Phi on cochains of any degree
    def rho(self, t):
        F = self.F
        deg = t.ndim - 1
        out = F.zeros(t.shape[:-1])
        for s in range(deg):
            out = (out + apply_slot(F, t, self.D, s)) % F.p
        return out

    def rho_power(self, t, k):
        for _ in range(k):
            t = self.rho(t)
        return t

    def phi(self, t):
        """Phi_z(t) = t^p (componentwise) - lambda t + rho^(p-1)(t)."""
        F = self.F
        deg = t.ndim - 1
        out = F.vfrob(t)
        for s in range(deg):
            out = apply_slot(F, out, self.Pow, s)
        out = (out - F.vscale(t, self.T.lam)) % F.p
        out = (out + self.rho_power(t, self.p - 1)) % F.p
        return out

    # Phi and rho restricted to h (length-n code vectors)
    def phi_h(self, t):
        F, T = self.F, self.T
        a = vecmat(F, vfrob(F, t), T.R)
        b = [F.mul(T.lam, c) for c in t]
        c = vecmat(F, t, matpow(F, T.M, self.p - 1))
        return vadd(F, vsub(F, a, b), c)

    @cached_property
    def phi_h_linear(self):
        """F_p matrix (n m, n m) of t -> Phi_z(t) on h (row convention)."""
        F, n = self.F, self.T.n
        rows = []
        for i in range(n):
            for k in range(F.m):
                t = [0] * n
                t[i] = F._alpha_code_pow(k)
                rows.append([dg for c in self.phi_h(t) for dg in F.digits(c)])
        return np.array(rows, dtype=np.int64)

    def image_phi_h(self):
        """GF(q)-span of Phi_z(h): rref rows (r, n, m)."""
        F, n = self.F, self.T.n
        vecs = []
        for i in range(n):
            for k in range(F.m):
                t = [0] * n
                t[i] = F._alpha_code_pow(k)
                vecs.append(self.phi_h(t))
        return _span(F, vecs, n)

    def ker_rho_h(self):
        F, n = self.F, self.T.n
        A = F.encode(np.array(self.T.M, dtype=np.int64)).transpose(1, 0, 2)  # v M = 0 <=> M^T v^T = 0
        ns = F.nullspace(A)
        return _span(F, [[int(c) for c in F.decode(v)] for v in ns], n)

    def omega_h(self, r):
        return self.cx.omega(r)

    def chi(self, P):
        return self.cx.chi(P)

    # memberships
    def _stacked_solver(self, cols):
        key = tuple(cols)
        cache = self.__dict__.setdefault("_solvers", {})
        if key not in cache:
            A = np.concatenate([self.cx.d1.T, self.D[..., 0].T], axis=0)[:, cols]
            cache[key] = FpSolver(A, self.p)
        return cache[key]

    def solve_theta(self, target, rho_rhs=None, cols=None):
        """Theta over monomials ``cols`` with d1(Theta) = target and rho(Theta) = rho_rhs."""
        F, N = self.F, self.N
        cols = list(range(N)) if cols is None else list(cols)
        rho_rhs = F.zeros(N) if rho_rhs is None else rho_rhs
        B = np.concatenate([target.reshape(N * N, F.m), rho_rhs], axis=0)
        if self.prime_rational:
            sol = self._stacked_solver(cols).solve(B)
        else:
            A = np.concatenate([F.lift(self.cx.d1.T), self.D.transpose(1, 0, 2)], axis=0)[:, cols]
            sol = F.solve(A, B)
        if sol is None:
            return None
        out = F.zeros(N)
        out[cols] = sol
        return out

    def aplus_witness(self, P):
        """Theta with Phi_z(chi_P) = d1(Theta), rho_z(Theta) = 0, or None."""
        return self.solve_theta(self.phi(self.chi(P)))

    @cached_property
    def high_cols(self):
        return [a for a in range(self.N) if sum(self.cx.multideg(a)) >= 2]

    def bplus_witness(self, theta_lin, P):
        """Psi in u_{>=2} with Phi_z(chi_P) = d1(Psi), rho(Psi + Theta_P) = 0, or None."""
        F = self.F
        thetaP = self.uh.linear_part(theta_lin)[1:]
        return self.solve_theta(self.phi(self.chi(P)), (-self.rho(thetaP)) % F.p, self.high_cols)

    def class_map_linear(self):
        """F_p matrix of the additive map P -> [Phi_z(chi_P)] in (a, c = b^p) coordinates."""
        F = self.F
        k = len(self.cx.pairs()) + self.T.n
        rows = []
        npair = len(self.cx.pairs())
        for i in range(k):
            for e in range(F.m):
                P = [0] * k
                c = F._alpha_code_pow(e)
                # the c-coordinate parametrizes b = c^(1/p); the map is F_p-linear in (a, c)
                P[i] = c if i < npair else F.inv_frob(c)
                lin = self.cx.class_coords_linear(self.phi(self.chi(P)))
                rows.append(lin.ravel())
        return np.array(rows, dtype=np.int64)

    def class_map_rank(self):
        return fp_rank(self.class_map_linear(), self.p)


_TC = {}


def _type_cobar(key, T):
    hit = _TC.get(key)
    if hit is None:
        hit = TypeCobar(T)
        _TC[key] = hit
    return hit


def _span(F, vecs, n):
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return F.zeros((0, n))
    R, piv = F.rref(F.encode(np.array(vecs, dtype=np.int64)))
    return R[: len(piv)]


def same_span(F, A, B):
    if A.shape[0] != B.shape[0]:
        return False
    if A.shape[0] == 0:
        return True
    return F.rank(np.concatenate([A, B])) == A.shape[0]


# -- identity suite -------------------------------------------------------------


def _rand_aug(F, N, rng):
    return F.encode(np.array([rng.randrange(F.q) for _ in range(N)], dtype=np.int64))


def _rand_h(F, n, rng):
    return [rng.randrange(F.q) for _ in range(n)]


def multinomial_mod(parts, p):
    tot = math.factorial(sum(parts))
    for k in parts:
        tot //= math.factorial(k)
    return tot % p


def verify_cobar_identities(T: AbelianType, samples=100, seed=0):
    """Random-sample checks of the cobar/Phi_z identities; returns {name: failures}."""
    tc = TypeCobar.of(T)
    cx, F, p, N, n = tc.cx, tc.F, tc.p, tc.N, T.n
    uh = tc.uh
    rng = random.Random(seed)
    fails = {k: 0 for k in ["d1_phi", "d1_rho", "d2_phi", "d2_rho", "rho_phi_1", "rho_phi_2",
                            "rho_omega", "omega_semilinear", "omega_additive", "phi_omega_class"]}
    lam_root = F.inv_frob(T.lam)

    def h_elem(r):
        return uh.linear_part(r)

    def hmul(*els):
        acc = F.zeros(uh.dim)
        acc[0, 0] = 1
        for e in els:
            acc = uh.mul(acc, e)
        return acc

    for _ in range(samples):
        s = _rand_aug(F, N, rng)
        chi = F.encode(np.array([[rng.randrange(F.q) for _ in range(N)] for _ in range(N)], dtype=np.int64))
        ds = cx.apply_d1(s)
        if ((cx.apply_d1(tc.phi(s)) - tc.phi(ds)) % p).any():
            fails["d1_phi"] += 1
        if ((cx.apply_d1(tc.rho(s)) - tc.rho(ds)) % p).any():
            fails["d1_rho"] += 1
        if ((cx.apply_d2(tc.phi(chi)) - tc.phi(cx.apply_d2(chi))) % p).any():
            fails["d2_phi"] += 1
        if ((cx.apply_d2(tc.rho(chi)) - tc.rho(cx.apply_d2(chi))) % p).any():
            fails["d2_rho"] += 1
        if tc.rho(tc.phi(s)).any():
            fails["rho_phi_1"] += 1
        if tc.rho(tc.phi(chi)).any():
            fails["rho_phi_2"] += 1

        r = _rand_h(F, n, rng)
        r2 = _rand_h(F, n, rng)
        a = rng.randrange(1, F.q)
        om = cx.omega(r)
        # (iii): rho^(i+1) omega(r) = d1(-sum multinomial prod rho^{i_k}(r) ... rho^{1+i_p}(r))
        rho_pows = [r]
        for _k in range(4):
            rho_pows.append(T.rho(rho_pows[-1]))
        for i in range(3):
            acc = F.zeros(uh.dim)
            for comp in product(range(i + 1), repeat=p):
                if sum(comp) != i:
                    continue
                c = multinomial_mod(comp, p)
                if not c:
                    continue
                facs = [h_elem(rho_pows[k]) for k in comp[:-1]] + [h_elem(rho_pows[1 + comp[-1]])]
                acc = (acc + c * hmul(*facs)) % p
            rhs = cx.apply_d1((-acc[1:]) % p)
            if ((tc.rho_power(om, i + 1) - rhs) % p).any():
                fails["rho_omega"] += 1
        # (iv)
        ar = [F.mul(a, c) for c in r]
        if ((cx.omega(ar) - F.vscale(om, F.frob(a))) % p).any():
            fails["omega_semilinear"] += 1
        # (v)
        rs = [F.add(u, v) for u, v in zip(r, r2)]
        lhs = (om + cx.omega(r2) - cx.omega(rs)) % p
        acc = F.zeros(uh.dim)
        for i, c in enumerate(omega_coeffs(p), start=1):
            acc = (acc + c * hmul(*([h_elem(r)] * i + [h_elem(r2)] * (p - i)))) % p
        if ((lhs - cx.apply_d1(acc[1:])) % p).any():
            fails["omega_additive"] += 1
        # Phi_z[omega(r)] = [omega(r^[p] - lambda^(1/p) r)]
        rp = vecmat(F, vfrob(F, r), T.R)
        target = [F.sub(u, F.mul(lam_root, v)) for u, v in zip(rp, r)]
        diff = (tc.phi(om) - cx.omega(target)) % p
        if not cx.is_coboundary(diff):
            fails["phi_omega_class"] += 1
    return fails
