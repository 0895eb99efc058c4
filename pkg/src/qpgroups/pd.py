"""Primitive deformations of u(T) for abelian types T, Aut(T) and its orbits.

Conventions: rank-2 types act by rho_z(x_i) = sum_j M_ij x_j, the restriction
is x_i^[p] = sum_j R_ij x_j and an automorphism phi = (gamma, G) sends
z -> gamma z, x_i -> sum_j G_ij x_j.  Points P of A^3 encode
chi_P = a x(x)y + omega(b x + c y); points of A^5 additionally carry
Theta_P = a x + b y and chi_P = c x(x)y + omega(d x + e y).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .cobar import TypeCobar, same_span
from .gf import Field, FpSolver, Scalar, _fp_matpow, fp_nullspace, fp_rank, fp_rref
from .hopf import HopfAlgebra, check_hopf_axioms, primitive_space
from .rla import (AbelianType, det2, e_mat, identity, inv2, mat_frob, matmul,
                  restricted_iso, zero_matrix)
from .uenv import AlgElem, PBWAlgebra, TensorElem, apply_slot, primitive_texpr

# -- the rank-2 catalogue ---------------------------------------------------------

H_KINDS = {"A": zero_matrix(2), "B": e_mat(2, 1, 1), "C": e_mat(2, 1, 2), "D": identity(2)}
G_KINDS = {"N": 0, "S": 1}


def _m(*units):
    M = zero_matrix(2)
    for i, j in units:
        M[i - 1][j - 1] = 1
    return M


TYPE_TABLE = {
    "T1": ("N", "A", _m()),
    "T2": ("N", "A", _m((1, 2))),
    "T3": ("S", "A", _m()),
    "T4": ("N", "B", _m()),
    "T5": ("N", "B", _m((2, 1))),
    "T6": ("S", "B", _m()),
    "T7": ("S", "B", _m((2, 2))),
    "T8": ("S", "B", _m((2, 1), (2, 2))),
    "T9": ("N", "C", _m()),
    "T10": ("N", "C", _m((1, 2))),
    "T11": ("S", "C", _m()),
    "T12": ("S", "C", _m((1, 1))),
    "T13": ("N", "D", _m()),
    "T14": ("S", "D", _m()),
}

_ZETA = re.compile(r"^T\((-?\d+)\)$")


def zeta_label(zeta, p):
    """Label T(s) with s the signed residue of zeta."""
    z = zeta % p
    return f"T({z if z <= p // 2 else z - p})"


def parse_zeta(label, p):
    m = _ZETA.match(label)
    return None if m is None else int(m.group(1)) % p


def rank2_type(F: Field, label: str) -> AbelianType:
    z = parse_zeta(label, F.p)
    if z is not None:
        M = [[1, 0], [0, z]]
        return AbelianType(F, 1, H_KINDS["A"], M, zeta_label(z, F.p), "S", "A", {"zeta": z})
    if label not in TYPE_TABLE:
        raise KeyError(f"unknown type {label!r}")
    g, h, M = TYPE_TABLE[label]
    return AbelianType(F, G_KINDS[g], H_KINDS[h], M, label, g, h)


def type_labels(p):
    """T1..T14 followed by T(zeta) for every zeta in F_p."""
    return list(TYPE_TABLE) + [zeta_label(z, p) for z in range(p)]


# -- PD data ---------------------------------------------------------------------


@dataclass(eq=False)
class PDDatum:
    """(T, Theta, chi) with Theta (N, m) and chi (N, N, m) over the augmentation monomials."""

    T: AbelianType
    theta: np.ndarray
    chi: np.ndarray
    point: tuple | None = None

    @property
    def tc(self):
        return TypeCobar.of(self.T)

    def theta_elem(self):
        uh = self.tc.uh
        full = uh.F.zeros(uh.dim)
        full[1:] = self.theta
        return AlgElem.from_dense(uh, full)

    def chi_elem(self):
        return TensorElem.from_dense(self.tc.uh, self.chi, offset=1)

    def to_dict(self):
        F = self.T.F
        return {
            "type": self.T.label,
            "theta": self.theta_elem().to_text(),
            "chi": self.chi_elem().to_text(),
            "point": None if self.point is None else [F.fmt(c) for c in self.point],
        }


def verify_pd_datum(D: PDDatum) -> dict:
    tc = D.tc
    cx, p = tc.cx, tc.p
    cocycle = cx.is_cocycle(D.chi)
    rep = {
        "cocycle": bool(cocycle),
        "not_coboundary": bool(cocycle and not cx.is_coboundary(D.chi)),
        "rho_theta_zero": not tc.rho(D.theta).any(),
        "phi_chi_eq_d1_theta": not ((tc.phi(D.chi) - cx.apply_d1(D.theta)) % p).any(),
    }
    rep["ok"] = all(rep.values())
    return rep


def permissible(T: AbelianType) -> bool:
    # over F_p itself the Artin-Schreier part of Phi_z collapses (t^p = t), so
    # the image is only meaningful once the field is a proper extension
    if T.F.m < 2:
        raise ValueError("permissibility is decided over GF(p^m) with m >= 2")
    tc = TypeCobar.of(T)
    return same_span(T.F, tc.image_phi_h(), tc.ker_rho_h())


def flow(T):
    return "A3" if permissible(T) else "A5"


def forced_zero_coords(T):
    """Coordinates k of Theta_P forced to vanish because x_k lies in Im Phi_z."""
    F, n = T.F, T.n
    img = TypeCobar.of(T).image_phi_h()
    out = []
    for k in range(n):
        e = F.zeros((1, n))
        e[0, k, 0] = 1
        if img.shape[0] and F.rank(np.concatenate([img, e])) == img.shape[0]:
            out.append(k)
    return out


def aplus_membership(T: AbelianType, P):
    """Theta with Phi_z(chi_P) = d1(Theta), rho_z(Theta) = 0, or None."""
    if not any(P):
        return None
    return TypeCobar.of(T).aplus_witness(list(P))


def bplus_membership(T: AbelianType, P):
    """Psi_P in u_{>=2} for a point of A^5, or None."""
    n = T.n
    theta_lin, rest = list(P[:n]), list(P[n:])
    if not any(rest) or any(theta_lin[k] for k in forced_zero_coords(T)):
        return None
    return TypeCobar.of(T).bplus_witness(theta_lin, rest)


def _codes(P):
    """Point coordinates as field codes (Scalars or ints)."""
    return tuple(c.code if isinstance(c, Scalar) else int(c) for c in P)


class Inadmissible(ValueError):
    pass


def point_datum(T: AbelianType, P, kind=None) -> PDDatum:
    """The PD datum attached to an admissible point; raises Inadmissible otherwise."""
    tc = TypeCobar.of(T)
    F, n = T.F, T.n
    kind = kind or flow(T)
    P = _codes(P)
    if kind == "A3":
        theta = aplus_membership(T, P)
        if theta is None:
            raise Inadmissible(_failure(T, tc.chi(list(P)), None))
        return PDDatum(T, theta, tc.chi(list(P)), P)
    psi = bplus_membership(T, P)
    chi = tc.chi(list(P[n:]))
    if psi is None:
        raise Inadmissible(_failure(T, chi, list(P[:n])))
    theta = (psi + tc.uh.linear_part(list(P[:n]))[1:]) % F.p
    return PDDatum(T, theta, chi, P)


def _failure(T, chi, theta_lin):
    tc = TypeCobar.of(T)
    cx = tc.cx
    if not chi.any():
        return "chi_P = 0"
    if not cx.is_cocycle(chi) or cx.is_coboundary(chi):
        return "condition (i): chi_P is not a non-trivial cocycle"
    if theta_lin is not None and any(theta_lin[k] for k in forced_zero_coords(T)):
        return "Theta_P has a coordinate in Im Phi_z"
    if not cx.is_coboundary(tc.phi(chi)):
        return "condition (iii): [Phi_z(chi_P)] != 0"
    return "conditions (ii)+(iii): no Theta with rho_z(Theta) = 0 and Phi_z(chi_P) = d1(Theta)"


def datum_from_texts(T, theta_text, chi_text, params=None) -> PDDatum:
    uh = TypeCobar.of(T).uh
    th = AlgElem.parse(uh, theta_text, params).dense()[1:]
    ch = TensorElem.parse(uh, chi_text, 2, params).dense(offset=1)
    return PDDatum(T, th, ch)


# -- the deformed Hopf algebra ---------------------------------------------------------


def deformed_pbw(T: AbelianType, theta=None, label=None) -> PBWAlgebra:
    """u(h)<z> with [z, x_i] = rho_z(x_i) and z^p = lambda z - Theta."""
    tc = TypeCobar.of(T)
    uh, F, n = tc.uh, T.F, T.n
    pth = [dict(e) for e in uh.pth]
    zp = {}
    if T.lam:
        zp[(n,)] = T.lam
    if theta is not None:
        full = F.zeros(uh.dim)
        full[1:] = theta
        for idx, c in uh.sparse(full).items():
            w = uh.word(idx)
            zp[w] = F.sub(zp.get(w, 0), c)
    pth.append(zp)
    comm = {}
    for i in range(n):
        row = {(j,): c for j, c in enumerate(T.M[i]) if c}
        if row:
            comm[(n, i)] = row
    return PBWAlgebra(F, list(uh.names) + ["z"], pth, comm, label or f"u({T.label})")


def build_u_T(T: AbelianType, check=False) -> HopfAlgebra:
    H = deformed_pbw(T).hopf(None, f"u({T.label})")
    if check:
        _require_hopf(H)
    return H


def build_deformation(D: PDDatum, check=True, name=None) -> HopfAlgebra:
    T, tc = D.T, D.tc
    F, n, N = T.F, T.n, tc.N
    A = deformed_pbw(T, D.theta, name)
    d = A.dim
    dz = A.dense_texpr(primitive_texpr(n))
    # u(h) monomials keep their indices inside u(h)<z> (z is the last PBW letter)
    dz[1:N + 1, 1:N + 1] = (dz[1:N + 1, 1:N + 1] + D.chi) % F.p
    H = A.hopf([None] * n + [dz], name or f"u_z({T.label})")
    if check:
        _require_hopf(H)
        if H.dim != d:
            raise AssertionError("dimension check failed")
    return H


def _require_hopf(H):
    rep = check_hopf_axioms(H)
    if not rep["ok"]:
        bad = sorted(k for k, v in rep.items() if v is False)
        raise AssertionError(f"Hopf axioms fail for {H.name}: {bad}")
    return rep


def primitive_report(H: HopfAlgebra, T: AbelianType) -> dict:
    """dim P(H) and whether P(H) = span(x_i) is isomorphic to h as a restricted Lie algebra."""
    F, n = T.F, T.n
    basis, L = primitive_space(H)
    gens = H.generators[:n]
    iso = False
    if basis.shape[0] == n:
        mask = np.ones(H.dim, dtype=bool)
        mask[gens] = False
        if not basis[:, mask].any():
            G = [[F.from_digits(basis[i, g]) for g in gens] for i in range(n)]
            iso = restricted_iso(L, T.h(), G)
    return {"dim_P": int(basis.shape[0]), "P_iso_h": bool(iso)}


def delta_identity(H: HopfAlgebra, D: PDDatum) -> bool:
    """Delta(z)^p - lambda Delta(z) + Delta(Theta) = 0 in H (x) H."""
    T = D.T
    F = T.F
    z = H.basis(H.generators[T.n])
    Dz = H.delta(z)
    acc = H.delta(H.one())
    for _ in range(F.p):
        acc = H.tensor_mul(acc, Dz)
    acc = (acc - F.vscale(Dz, T.lam)) % F.p
    th = F.zeros(H.dim)
    th[1:D.theta.shape[0] + 1] = D.theta
    acc = (acc + H.delta(th)) % F.p
    return not acc.any()


def equiv_pd_data(D1: PDDatum, D2: PDDatum):
    """s in u(h)+ with Theta2 - Theta1 = Phi_z(s) and chi2 - chi1 = d1(s), or None."""
    tc = D1.tc
    cx, F, n = tc.cx, tc.F, D1.T.n
    s0 = cx.coboundary_witness((D2.chi - D1.chi) % F.p)
    if s0 is None:
        return None
    r = (D2.theta - D1.theta - tc.phi(s0)) % F.p
    lin = [cx.lin_index(k) for k in range(n)]
    rest = np.ones(tc.N, dtype=bool)
    rest[lin] = False
    if r[rest].any():
        return None
    t = FpSolver(tc.phi_h_linear.T, F.p).solve(r[lin].reshape(-1))
    if t is None:
        return None
    s = s0.copy()
    s[lin] = (s[lin] + t.reshape(n, F.m)) % F.p
    assert not ((tc.phi(s) - (D2.theta - D1.theta)) % F.p).any()
    assert not ((cx.apply_d1(s) - (D2.chi - D1.chi)) % F.p).any()
    return s


# -- Aut(T) --------------------------------------------------------------------------


@dataclass(frozen=True)
class AutElement:
    gamma: int
    G: tuple

    @classmethod
    def make(cls, gamma, G):
        code = lambda x: x.code if isinstance(x, Scalar) else int(x)
        return cls(code(gamma), tuple(tuple(code(x) for x in row) for row in G))

    def then(self, other, F):
        """other o self: (gamma' gamma, G G')."""
        return AutElement(F.mul(other.gamma, self.gamma), _tup(matmul(F, self.G, other.G)))

    def inverse(self, F):
        return AutElement(F.inv(self.gamma), _tup(inv2(F, self.G)))

    def to_dict(self, F):
        return {"gamma": F.fmt(self.gamma), "G": [[F.fmt(x) for x in r] for r in self.G]}


def _tup(G):
    return tuple(tuple(int(x) for x in row) for row in G)


def identity_aut(n=2):
    return AutElement(1, _tup(identity(n)))


def in_aut(T: AbelianType, phi: AutElement, tilde=False) -> bool:
    F = T.F
    g, G = phi.gamma, phi.G
    if g == 0 or det2(F, G) == 0:
        return False
    if matmul(F, mat_frob(F, G), T.R) != matmul(F, T.R, G):
        return False
    if F.mul(F.frob(g), T.lam) != F.mul(g, T.lam):
        return False
    MG = matmul(F, T.M, G)
    if matmul(F, G, T.M) != [[F.mul(g, x) for x in r] for r in MG]:
        return False
    if tilde and T.label == "T9" and G[0][1]:
        return False
    return True


def enumerate_aut(T: AbelianType, tilde=False):
    """Brute force over k^x x GL_2(k); small fields only."""
    F = T.F
    if F.q > 27:
        raise ValueError("enumerate_aut is meant for fields with at most 27 elements")
    out = []
    for g in range(1, F.q):
        for a, b, c, d in np.ndindex(F.q, F.q, F.q, F.q):
            phi = AutElement(g, ((int(a), int(b)), (int(c), int(d))))
            if in_aut(T, phi, tilde):
                out.append(phi)
    return out


class AutFamily:
    """Finitely parametrized description of Aut(T) with a sampler and an enumerator."""

    def __init__(self, T, description, params, build):
        self.T = T
        self.description = description
        self.params = params  # [(name, domain)] with domain in {"k", "kx", "Fp", "Fpx", "one"}
        self._build = build

    def _domain(self, dom):
        F = self.T.F
        return {"k": range(F.q), "kx": range(1, F.q), "Fp": range(F.p),
                "Fpx": range(1, F.p), "one": [1]}[dom]

    def sample(self, rng):
        F = self.T.F
        while True:
            vals = {nm: rng.choice(self._domain(dom)) for nm, dom in self.params}
            phi = self._build(F, vals)
            if phi is not None:
                return phi

    def elements(self):
        F = self.T.F
        doms = [list(self._domain(dom)) for _, dom in self.params]
        names = [nm for nm, _ in self.params]
        seen = set()
        for combo in _product(doms):
            phi = self._build(F, dict(zip(names, combo)))
            if phi is not None and phi not in seen:
                seen.add(phi)
                yield phi


def _product(doms):
    if not doms:
        yield ()
        return
    for x in doms[0]:
        for rest in _product(doms[1:]):
            yield (x,) + rest


def _gl(F, a, b, c, d):
    G = ((a, b), (c, d))
    return G if det2(F, G) else None


def _mk(g, G):
    return None if G is None or g == 0 else AutElement(g, _tup(G))


def aut_solve(T: AbelianType) -> AutFamily:
    lab = T.label
    z = parse_zeta(lab, T.F.p)
    four = [("g11", "k"), ("g12", "k"), ("g21", "k"), ("g22", "k")]
    if z is not None:
        def build(F, v):
            g = v["gamma"]
            M = T.M
            G = [[v[f"g{i + 1}{j + 1}"] if F.sub(M[j][j], F.mul(g, M[i][i])) == 0 else 0
                  for j in range(2)] for i in range(2)]
            return _mk(g, _gl(F, *G[0], *G[1]))
        return AutFamily(T, "gamma in F_p^x; g_ij free iff g_ij (M_jj - gamma M_ii) = 0",
                         [("gamma", "Fpx")] + four, build)
    table = {
        "T1": ("gamma in k^x, G in GL_2(k)", [("gamma", "kx")] + four,
               lambda F, v: _mk(v["gamma"], _gl(F, v["g11"], v["g12"], v["g21"], v["g22"]))),
        "T2": ("G = [[alpha gamma, beta], [0, alpha]], alpha, gamma in k^x",
               [("gamma", "kx"), ("alpha", "kx"), ("beta", "k")],
               lambda F, v: _mk(v["gamma"], ((F.mul(v["alpha"], v["gamma"]), v["beta"]), (0, v["alpha"])))),
        "T3": ("gamma in F_p^x, G in GL_2(k)", [("gamma", "Fpx")] + four,
               lambda F, v: _mk(v["gamma"], _gl(F, v["g11"], v["g12"], v["g21"], v["g22"]))),
        "T4": ("gamma in k^x, G = diag(alpha, beta), alpha in F_p^x, beta in k^x",
               [("gamma", "kx"), ("alpha", "Fpx"), ("beta", "kx")],
               lambda F, v: _mk(v["gamma"], ((v["alpha"], 0), (0, v["beta"])))),
        "T5": ("G = diag(alpha, alpha gamma), alpha in F_p^x, gamma in k^x",
               [("gamma", "kx"), ("alpha", "Fpx")],
               lambda F, v: _mk(v["gamma"], ((v["alpha"], 0), (0, F.mul(v["alpha"], v["gamma"]))))),
        "T6": ("gamma in F_p^x, G = diag(alpha, beta), alpha in F_p^x, beta in k^x",
               [("gamma", "Fpx"), ("alpha", "Fpx"), ("beta", "kx")],
               lambda F, v: _mk(v["gamma"], ((v["alpha"], 0), (0, v["beta"])))),
        "T7": ("gamma = 1, G = diag(alpha, beta), alpha in F_p^x, beta in k^x",
               [("gamma", "one"), ("alpha", "Fpx"), ("beta", "kx")],
               lambda F, v: _mk(1, ((v["alpha"], 0), (0, v["beta"])))),
        "T8": ("gamma = 1, G = alpha I, alpha in F_p^x", [("gamma", "one"), ("alpha", "Fpx")],
               lambda F, v: _mk(1, ((v["alpha"], 0), (0, v["alpha"])))),
        "T9": ("gamma in k^x, G = [[g, s], [0, g^p]], g in k^x",
               [("gamma", "kx"), ("g", "kx"), ("s", "k")],
               lambda F, v: _mk(v["gamma"], ((v["g"], v["s"]), (0, F.frob(v["g"]))))),
        "T10": ("gamma = g^(1-p), G = [[g, s], [0, g^p]], g in k^x", [("g", "kx"), ("s", "k")],
                lambda F, v: _mk(F.pow(v["g"], 1 - F.p), ((v["g"], v["s"]), (0, F.frob(v["g"]))))),
        "T11": ("gamma in F_p^x, G = [[g, s], [0, g^p]], g in k^x",
                [("gamma", "Fpx"), ("g", "kx"), ("s", "k")],
                lambda F, v: _mk(v["gamma"], ((v["g"], v["s"]), (0, F.frob(v["g"]))))),
        "T12": ("gamma = 1, G = diag(g, g^p), g in k^x", [("g", "kx")],
                lambda F, v: _mk(1, ((v["g"], 0), (0, F.frob(v["g"]))))),
        "T13": ("gamma in k^x, G in GL_2(F_p)",
                [("gamma", "kx")] + [(n, "Fp") for n, _ in four],
                lambda F, v: _mk(v["gamma"], _gl(F, v["g11"], v["g12"], v["g21"], v["g22"]))),
        "T14": ("gamma in F_p^x, G in GL_2(F_p)",
                [("gamma", "Fpx")] + [(n, "Fp") for n, _ in four],
                lambda F, v: _mk(v["gamma"], _gl(F, v["g11"], v["g12"], v["g21"], v["g22"]))),
    }
    desc, params, build = table[lab]
    return AutFamily(T, desc, params, build)


def tilde_subgroup(T: AbelianType, phi: AutElement) -> bool:
    """Membership in the acting group on B+(T): all of Aut(T), or K (g12 = 0) for T9."""
    return in_aut(T, phi, tilde=True)


# -- affine actions ---------------------------------------------------------------------


def act_A3(F: Field, phi: AutElement, P):
    g, G = phi.gamma, phi.G
    d = F.inv_frob(g)
    a, b, c = P
    return (
        F.mul(F.mul(g, det2(F, G)), a),
        F.mul(d, F.add(F.mul(G[0][0], b), F.mul(G[1][0], c))),
        F.mul(d, F.add(F.mul(G[0][1], b), F.mul(G[1][1], c))),
    )


def act_A5(F: Field, phi: AutElement, P, T: AbelianType | None = None):
    if T is not None and not tilde_subgroup(T, phi):
        raise ValueError(f"{phi} is not in the acting group of {T.label}")
    g, G = phi.gamma, phi.G
    gp, d = F.frob(g), F.inv_frob(g)
    a, b, c, dd, e = P
    return (
        F.mul(gp, F.add(F.mul(G[0][0], a), F.mul(G[1][0], b))),
        F.mul(gp, F.add(F.mul(G[0][1], a), F.mul(G[1][1], b))),
        F.mul(F.mul(g, det2(F, G)), c),
        F.mul(d, F.add(F.mul(G[0][0], dd), F.mul(G[1][0], e))),
        F.mul(d, F.add(F.mul(G[0][1], dd), F.mul(G[1][1], e))),
    )


def act(T: AbelianType, phi: AutElement, P):
    return act_A3(T.F, phi, P) if len(P) == 3 else act_A5(T.F, phi, P, T)


def uh_automorphism(T: AbelianType, G) -> np.ndarray:
    """Matrix (d, d, m) of the algebra map of u(h) with x_i -> sum_j G_ij x_j."""
    uh = TypeCobar.of(T).uh
    F = uh.F
    imgs = [uh.linear_part(list(G[i])) for i in range(T.n)]
    out = F.zeros((uh.dim, uh.dim))
    out[0, 0, 0] = 1
    for b in range(1, uh.dim):
        k = uh.last_gen(b)
        out[b] = uh.mul(out[b - uh._pw[k]], imgs[k])
    return out


def transform_datum(D: PDDatum, phi: AutElement) -> PDDatum:
    """(gamma^p phi_2(Theta), gamma (phi_2 (x) phi_2)(chi))."""
    F = D.T.F
    A = uh_automorphism(D.T, phi.G)[1:, 1:]
    th = F.vscale(F.matmul(D.theta[None], A)[0], F.frob(phi.gamma))
    ch = apply_slot(F, apply_slot(F, D.chi, A, 0), A, 1)
    return PDDatum(D.T, th, F.vscale(ch, phi.gamma))


def deformation_map(H1: HopfAlgebra, H2: HopfAlgebra, T: AbelianType, phi: AutElement) -> np.ndarray:
    """x_i -> sum_j G_ij x_j, z -> z / gamma from u_z(D) to u_z(phi.D), extended multiplicatively."""
    F, n = T.F, T.n
    imgs = []
    for i in range(n):
        v = F.zeros(H2.dim)
        for j in range(n):
            v[H2.generators[j]] = F.digits(phi.G[i][j])
        imgs.append(v)
    zi = F.zeros(H2.dim)
    zi[H2.generators[n]] = F.digits(F.inv(phi.gamma))
    imgs.append(zi)
    return extend_multiplicatively(H1, H2, imgs)


def extend_multiplicatively(H1: HopfAlgebra, H2: HopfAlgebra, gen_images) -> np.ndarray:
    """Linear map on the PBW basis of H1 sending each ordered monomial to the product of images."""
    eng = H1.engine
    F = H1.F
    out = F.zeros((H1.dim, H2.dim))
    out[0] = H2.one()
    for b in range(1, H1.dim):
        k = eng.last_gen(b)
        out[b] = H2.mul(out[b - eng._pw[k]], gen_images[k])
    return out


def is_hopf_morphism(H1: HopfAlgebra, H2: HopfAlgebra, Phi: np.ndarray, bijective=True) -> dict:
    F, d = H1.F, H1.dim
    p = F.p
    rep = {}
    gens = H1.generators or range(d)
    ok = True
    for b in gens:
        lhs = F.matmul(H1.mult[:, b], Phi)  # Phi(e_a e_b) for every a
        if ((lhs - F.matmul(Phi, H2.right_mat(Phi[b]))) % p).any():
            ok = False
            break
    rep["multiplicative"] = ok
    rep["unital"] = not ((Phi[H1.unit] - H2.one()) % p).any()
    # (Phi (x) Phi) Delta_1 = Delta_2 Phi on the whole basis
    left = apply_slot(F, apply_slot(F, H1.comult, Phi, 1), Phi, 2)
    right = F.matmul(Phi, H2.comult.reshape(d, -1, F.m)).reshape(left.shape)
    rep["comultiplicative"] = not ((left - right) % p).any()
    rep["counital"] = not ((F.matmul(Phi, H2.counit[:, None, :])[:, 0] - H1.counit) % p).any()
    if bijective:
        rep["bijective"] = F.rank(Phi) == d
    rep["ok"] = all(rep.values())
    return rep


# -- admissible points as F_p-subspaces ----------------------------------------------
#
# Phi_z is additive and p-semilinear, so P -> Phi_z(chi_P) is F_p-linear in the
# coordinates (a, b^p, c^p) of A^3 (resp. (a, b, c, d^p, e^p) of A^5).  The
# admissible points together with 0 therefore form an F_p-subspace in those
# coordinates, which we compute as a kernel.


def _lin_frob_coords(kind):
    return (1, 2) if kind == "A3" else (3, 4)


def lin_to_point(F, kind, lin):
    fr = _lin_frob_coords(kind)
    return tuple(F.inv_frob(c) if i in fr else c for i, c in enumerate(lin))


def point_to_lin(F, kind, P):
    fr = _lin_frob_coords(kind)
    return tuple(F.frob(c) if i in fr else c for i, c in enumerate(P))


def _subfield_rows(F, s, k):
    """Rows cutting out GF(p^s) in each of k coordinates."""
    if s is None or s == F.m:
        return np.zeros((0, k * F.m), dtype=np.int64)
    Fr = _fp_matpow(F.frob_matrix, s, F.p)
    C = ((Fr - np.eye(F.m, dtype=np.int64)) % F.p).T  # digits x: C x = 0
    rows = np.zeros((k * F.m, k * F.m), dtype=np.int64)
    for i in range(k):
        rows[i * F.m:(i + 1) * F.m, i * F.m:(i + 1) * F.m] = C
    return rows


@dataclass
class AdmissibleSpace:
    T: AbelianType
    kind: str
    basis: np.ndarray  # F_p rows over the linear coordinates, (r, k m)
    subfield: int | None = None

    @property
    def dim(self):
        return int(self.basis.shape[0])

    @property
    def empty(self):
        return self.dim == 0

    def point(self, coeffs):
        F = self.T.F
        v = np.asarray(coeffs, dtype=np.int64) @ self.basis % F.p
        k = self.basis.shape[1] // F.m
        lin = [F.from_digits(v[i * F.m:(i + 1) * F.m]) for i in range(k)]
        return lin_to_point(F, self.kind, lin)

    def valid(self, P):
        return any(P[-3:]) if self.kind == "A5" else any(P)

    def sample(self, rng):
        if self.empty:
            raise ValueError(f"no admissible points for {self.T.label}")
        while True:
            P = self.point([rng.randrange(self.T.F.p) for _ in range(self.dim)])
            if self.valid(P):
                return P

    def contains(self, P):
        F = self.T.F
        lin = point_to_lin(F, self.kind, P)
        v = np.array([dg for c in lin for dg in F.digits(c)], dtype=np.int64)
        return fp_rank(np.vstack([self.basis, v]), F.p) == self.dim


_SPACES = {}


def admissible_space(T: AbelianType, subfield=None, kind=None) -> AdmissibleSpace:
    """Admissible points of T (A^3 for permissible T, A^5 otherwise unless ``kind`` is forced)."""
    F = T.F
    kind = kind or flow(T)
    key = (F, T.label, kind, subfield)
    if key in _SPACES:
        return _SPACES[key]
    tc = TypeCobar.of(T)
    cx, N, m, p, n = tc.cx, tc.N, F.m, F.p, T.n
    cols = list(range(N)) if kind == "A3" else tc.high_cols
    # s enters digitwise through C = [d1^T; D^T]; kill its column space with a left kernel
    C = np.concatenate([cx.d1.T, tc.D[..., 0].T], axis=0)[:, cols] % p
    L = fp_nullspace(C.T, p)  # rows l with l C = 0
    k = 3 if kind == "A3" else 5
    rows = []
    for i in range(k):
        for e in range(m):
            lin = [0] * k
            lin[i] = F._alpha_code_pow(e)
            P = lin_to_point(F, kind, lin)
            if kind == "A3":
                top = tc.phi(tc.chi(list(P)))
                bottom = F.zeros(N)
            else:
                top = tc.phi(tc.chi(list(P[n:])))
                bottom = tc.rho(tc.uh.linear_part(list(P[:n]))[1:])
            V = np.concatenate([top.reshape(N * N, m), bottom], axis=0)
            rows.append((L @ V % p).ravel())
    B = np.array(rows, dtype=np.int64)  # x B = 0 for admissible linear coordinates x
    cons = [B.T]
    if kind == "A5":
        for c in forced_zero_coords(T):
            Z = np.zeros((m, k * m), dtype=np.int64)
            Z[:, c * m:(c + 1) * m] = np.eye(m, dtype=np.int64)
            cons.append(Z)
    cons.append(_subfield_rows(F, subfield, k))
    basis = fp_nullspace(np.concatenate(cons, axis=0), p)
    if basis.shape[0]:
        R, piv = fp_rref(basis, p)
        basis = R[: len(piv)]
    sp_ = AdmissibleSpace(T, kind, basis, subfield)
    _SPACES[key] = sp_
    return sp_


# -- orbit decision ------------------------------------------------------------------
#
# Each admissible point is moved to a listed representative by an explicit
# phi built from roots of power equations; the zero pattern of a few
# Aut-covariant quantities decides which representative.  Families are
# compared through their stabilisers.


class NoRoot(ValueError):
    """A required root does not exist in the configured field."""


def _root(n, c: Scalar) -> Scalar:
    F = c.field
    sols = F.solve_power(n, c.code)
    if not sols:
        raise NoRoot(f"x^{n} = {F.fmt(c.code)} has no solution in GF({F.p}^{F.m})")
    return F.from_code(sols[0])


@dataclass(frozen=True)
class Rep:
    name: str  # e.g. "(1,0,0)" or "(xi,0,1)"
    coords: tuple  # ints, or "xi" in the family slot
    modulus: str | None = None  # class-count descriptor for families

    @property
    def family(self):
        return "xi" in self.coords

    def point(self, F, xi=None):
        return tuple(xi if c == "xi" else F.elem(c) for c in self.coords)


def _reps(*items):
    out = []
    for it in items:
        coords, mod = (it, None) if not isinstance(it[-1], str) or it[-1] == "xi" else (it[:-1], it[-1])
        name = "(" + ",".join(str(c) for c in coords) + ")"
        out.append(Rep(name, tuple(coords), mod))
    return out


REPRESENTATIVES = {
    "T1": _reps((0, 0, 1, 0, 0), (1, 0, 1, 0, 0), (0, 0, 0, 1, 0), (1, 0, 0, 1, 0), (0, 1, 0, 1, 0),
                (0, 0, 1, 1, 0), (1, 0, 1, 1, 0), (0, 1, 1, 1, 0)),
    "T2": _reps((0, 0, 1, 0, 0), (0, 1, 1, 0, 0), (0, 0, 0, 1, 0), (0, 1, 0, 1, 0), (0, 0, 0, 0, 1),
                (0, 1, 0, 0, 1), (0, "xi", 1, 1, 0, "k/mu_2"), (0, "xi", 1, 0, 1, "k")),
    "T4": _reps((0, 0, 1, 0, 0), (0, 1, 1, 0, 0), (0, 0, 0, 0, 1), (0, 1, 0, 0, 1),
                (0, "xi", 1, 0, 1, "k/mu_{(p-1)/2}")),
    "T5": _reps((1, 0, 0), ("xi", 0, 1, "k/mu_{(p^2-1)/2}")),
    "T6": _reps((0, 1, 0)),
    "T7": _reps((1, 0, 0), (0, 1, 0), (1, 1, 0)),
    "T8": _reps(("xi", 0, 0, "k^x/mu_{(p-1)/2}"), ("xi", 1, 0, "k")),
    "T9": _reps((0, 0, 1, 0, 0), (1, 0, 1, 0, 0), (0, 0, 0, 0, 1), (1, 0, 0, 0, 1),
                ("xi", 0, 1, 0, 1, "k/mu_{p^2-p-1}")),
    "T10": _reps((1, 0, 0), ("xi", 0, 1, "k/mu_{p^2-p+1}")),
    "T12": _reps((1, 0, 0)),
    "T14": _reps((1, 0, 0), (0, 1, 0), (1, 1, 0)),
}
ZETA_REPS = _reps((1, 0, 0))
EMPTY_TYPES = ("T3", "T11", "T13")


def representatives(T: AbelianType):
    if parse_zeta(T.label, T.F.p) is not None:
        return [] if parse_zeta(T.label, T.F.p) == T.F.p - 1 else ZETA_REPS
    return REPRESENTATIVES.get(T.label, [])


def family_ratio_group(label, rep: Rep, F: Field):
    """Ratios tau with (xi) ~ (tau xi) claimed for a family (nonzero xi)."""
    p = F.p
    n = {
        ("T5", "(xi,0,1)"): (p * p - 1) // 2,
        ("T10", "(xi,0,1)"): p * p - p + 1,
        ("T9", "(xi,0,1,0,1)"): p * p - p - 1,
        ("T4", "(0,xi,1,0,1)"): (p - 1) // 2,
        ("T2", "(0,xi,1,1,0)"): 2,
        ("T2", "(0,xi,1,0,1)"): 1,
        ("T8", "(xi,0,0)"): (p - 1) // 2,
        ("T8", "(xi,1,0)"): 1,
    }[(label, rep.name)]
    return n, F.mu(n)


# root degrees each reduction may need (for the subfield choice)
ROOT_DEGREES = {
    "T1": lambda p: [p - 1, p * p - 1, p * p - p + 1],
    "T2": lambda p: [2, p * p - p - 1, 2 * p - 2, p * p - 1, p - 1],
    "T4": lambda p: [p - 1, p * p - 1],
    "T5": lambda p: [p + 1, 2],
    "T9": lambda p: [p * p - p - 1, p * p + p - 1, p**3 - 1],
    "T10": lambda p: [p * p - p + 1, 2 * p],
    "T12": lambda p: [p + 1],
}


def subfield_degree(T: AbelianType):
    """Largest s | m such that every needed root of an element of GF(p^s) lies in GF(p^m)."""
    F = T.F
    p, q = F.p, F.q
    degs = ROOT_DEGREES.get(T.label, lambda p: [])(p)
    for s in sorted((d for d in range(1, F.m + 1) if F.m % d == 0), reverse=True):
        if all(((q - 1) // math.gcd(n, q - 1)) % (p**s - 1) == 0 for n in degs):
            return s
    return None


def _S(F, c):
    return F.from_code(c)


def _aut(gamma, G):
    return AutElement.make(gamma, G)


def _v_normalizer(F, d, e):
    """(G^T rows) sending (d, e) != 0 to (1, 0), as a matrix G."""
    one, zero = F.one, F.zero
    if d:
        GT = [[one / d, zero], [-e / d, one]]
    else:
        GT = [[zero, one / e], [one, zero]]
    return [[GT[0][0], GT[1][0]], [GT[0][1], GT[1][1]]]


# invariants: map a point to the representative name of its orbit

def _inv_T1(F, P):
    a, b, c, d, e = P
    if not (d or e):
        return "(0,0,1,0,0)" if not (a or b) else "(1,0,1,0,0)"
    det = F.sub(F.mul(a, e), F.mul(b, d))
    head = "(0,0,{},1,0)" if not (a or b) else ("(1,0,{},1,0)" if det == 0 else "(0,1,{},1,0)")
    return head.format(0 if c == 0 else 1)


def _inv_T2(F, P):
    _, b, c, d, e = P
    bb = 0 if b == 0 else 1
    if d:
        return "(0,xi,1,1,0)" if c else f"(0,{bb},0,1,0)"
    if e:
        return "(0,xi,1,0,1)" if c else f"(0,{bb},0,0,1)"
    return f"(0,{bb},1,0,0)"


def _inv_T4(F, P):
    _, b, c, _, e = P
    bb = 0 if b == 0 else 1
    if c and e:
        return "(0,xi,1,0,1)"
    return f"(0,{bb},1,0,0)" if c else f"(0,{bb},0,0,1)"


def _inv_T9(F, P):
    a, _, c, _, e = P
    aa = 0 if a == 0 else 1
    if c and e:
        return "(xi,0,1,0,1)"
    return f"({aa},0,1,0,0)" if c else f"({aa},0,0,0,1)"


def _inv_T5(F, P):
    return "(xi,0,1)" if P[2] else "(1,0,0)"


def _inv_T7(F, P):
    a, b, _ = P
    return {(True, True): "(1,1,0)", (False, True): "(0,1,0)", (True, False): "(1,0,0)"}[(a != 0, b != 0)]


def _inv_T8(F, P):
    return "(xi,1,0)" if P[1] else "(xi,0,0)"


def _inv_T10(F, P):
    return "(xi,0,1)" if P[2] else "(1,0,0)"


def _inv_T14(F, P):
    a, b, c = P
    if not (b or c):
        return "(1,0,0)"
    return "(1,1,0)" if a else "(0,1,0)"


def _const(name):
    return lambda F, P: name


INVARIANTS = {
    "T1": _inv_T1, "T2": _inv_T2, "T4": _inv_T4, "T9": _inv_T9, "T5": _inv_T5,
    "T6": _const("(0,1,0)"), "T7": _inv_T7, "T8": _inv_T8, "T10": _inv_T10,
    "T12": _const("(1,0,0)"), "T14": _inv_T14,
}


def orbit_invariant(T: AbelianType, P):
    if parse_zeta(T.label, T.F.p) is not None:
        return "(1,0,0)"
    return INVARIANTS[T.label](T.F, tuple(P))


# reductions: return (phi, xi or None) with act(phi, P) = representative


def _red_T1(F, P):
    a, b, c, d, e = (_S(F, x) for x in P)
    one = F.one
    phi = identity_aut()
    if d or e:
        phi = _aut(1, _v_normalizer(F, d, e))
    elif c:
        phi = _aut(1, [[one / c, 0], [0, one]])
    Q = act_A5(F, phi, P)
    a, b, c, d, e = (_S(F, x) for x in Q)
    if (d or e) and c and c != one:
        step = _aut(1, [[one, 0], [0, one / c]])
        phi = phi.then(step, F)
        Q = act_A5(F, step, Q)
        a, b, c, d, e = (_S(F, x) for x in Q)
    if not (a or b):
        return phi, None
    if not d:  # (a, b, 1, 0, 0)
        if a:
            t = _root(F.p - 1, a)
            step = _aut(one / t, [[t, -b / a], [0, one]])
        else:
            t = _root(F.p - 1, -b)
            step = _aut(one / t, [[0, one], [-t, 0]])
    elif not c:  # (a, b, 0, 1, 0)
        if b:
            step = _aut(1, [[one, 0], [-a / b, one / b]])
        else:
            t = _root(F.p**2 - 1, a)
            step = _aut((one / t) ** F.p, [[t, 0], [0, one]])
    else:  # (a, b, 1, 1, 0)
        if b:
            t = _root(F.p**2 - F.p + 1, b)
            step = _aut((one / t) ** F.p, [[t, 0], [-a * t / b, t ** (F.p - 1)]])
        else:
            t = _root(F.p**2 - 1, a)
            step = _aut((one / t) ** F.p, [[t, 0], [0, t ** (F.p - 1)]])
    return phi.then(step, F), None


def _t2_elem(F, delta, alpha, beta):
    g = delta ** F.p
    return _aut(g, [[alpha * g, beta], [0, alpha]])


def _red_T2(F, P):
    _, b, c, d, e = (_S(F, x) for x in P)
    one, p = F.one, F.p
    if d:
        if c:
            delta = _root(2, c / (d * d))
            g = delta**p
            alpha = one / (d * delta * g)
            phi = _t2_elem(F, delta, alpha, -alpha * e / d)
            return phi, act_A5(F, phi, P)[1]
        delta = _root(p * p - p - 1, d / b) if b else one
        g = delta**p
        alpha = one / (delta * g * d)
        return _t2_elem(F, delta, alpha, -alpha * e / d), None
    if e:
        if c:
            delta = _root(2 * p - 2, e * e / c)
            phi = _t2_elem(F, delta, one / (delta * e), F.zero)
            return phi, act_A5(F, phi, P)[1]
        delta = _root(p * p - 1, e / b) if b else one
        return _t2_elem(F, delta, one / (delta * e), F.zero), None
    s = _root(2, one / c)
    if not b:
        return _aut(1, [[s, 0], [0, s]]), None
    g = _root(p - 1, one / (s * b))
    alpha = s / g
    return _aut(g, [[alpha * g, 0], [0, alpha]]), None


def _red_T4(F, P):
    _, b, c, _, e = (_S(F, x) for x in P)
    one, p = F.one, F.p
    if c and e:
        delta = _root(p - 1, e / c)
        g = delta**p
        beta = one / (delta * e)
        phi = _aut(g, [[1, 0], [0, beta]])
        return phi, act_A5(F, phi, P)[1]
    if c:
        if not b:
            return _aut(one / c, [[1, 0], [0, 1]]), None
        g = _root(p - 1, c / b)
        return _aut(g, [[1, 0], [0, one / (g * c)]]), None
    delta = _root(p * p - 1, e / b) if b else one
    return _aut(delta**p, [[1, 0], [0, one / (delta * e)]]), None


def _t9_elem(F, gamma, g):
    return _aut(gamma, [[g, 0], [0, g**F.p]])


def _red_T9(F, P):
    a, _, c, _, e = (_S(F, x) for x in P)
    one, p = F.one, F.p
    if c and e:
        delta = _root(p * p - p - 1, e ** (p + 1) / c**p)
        g = e / (c * delta ** (p - 1))
        phi = _t9_elem(F, delta**p, g)
        return phi, act_A5(F, phi, P)[0]
    if c:
        if not a:
            return _t9_elem(F, one / c, one), None
        g = _root(p * p + p - 1, a / c**p)
        return _t9_elem(F, one / (g ** (p + 1) * c), g), None
    if not a:
        return _t9_elem(F, one, (one / e).inv_frobenius()), None
    delta = _root(p**3 - 1, e / a**p)
    g = (one / (delta * e)).inv_frobenius()
    return _t9_elem(F, delta**p, g), None


def _red_T5(F, P):
    a, _, c = (_S(F, x) for x in P)
    one, p = F.one, F.p
    if c:
        delta = _root(p + 1, one / c)
        g = delta**p
        phi = _aut(g, [[1, 0], [0, g]])
        return phi, act_A3(F, phi, P)[0]
    g = _root(2, one / a)
    return _aut(g, [[1, 0], [0, g]]), None


def _red_T6(F, P):
    b = _S(F, P[1])
    return _aut(1, [[F.one / b, 0], [0, 1]]), None


def _red_T7(F, P):
    a, b, _ = (_S(F, x) for x in P)
    one = F.one
    if a and b:
        al = one / b
        return _aut(1, [[al, 0], [0, b / a]]), None
    if b:
        return _aut(1, [[one / b, 0], [0, 1]]), None
    return _aut(1, [[1, 0], [0, one / a]]), None


def _red_T8(F, P):
    a, b, _ = (_S(F, x) for x in P)
    if b:
        al = F.one / b
        phi = _aut(1, [[al, 0], [0, al]])
        return phi, act_A3(F, phi, P)[0]
    return identity_aut(), P[0]


def _red_T10(F, P):
    a, _, c = (_S(F, x) for x in P)
    one, p = F.one, F.p
    if c:
        u = _root(p * p - p + 1, one / c)
    else:
        u = _root(2 * p, one / a)
    g = u**p
    phi = _aut(g ** (1 - p), [[g, 0], [0, g**p]])
    return phi, (act_A3(F, phi, P)[0] if c else None)


def _red_T12(F, P):
    a = _S(F, P[0])
    g = _root(F.p + 1, F.one / a)
    return _aut(1, [[g, 0], [0, g**F.p]]), None


def _red_T14(F, P):
    a, b, c = (_S(F, x) for x in P)
    one = F.one
    if not (b or c):
        return _aut(1, [[one / a, 0], [0, 1]]), None
    G = _v_normalizer(F, b, c)
    if a:
        det = G[0][0] * G[1][1] - G[0][1] * G[1][0]
        t = one / (det * a)
        G = [[G[0][0], G[0][1] * t], [G[1][0], G[1][1] * t]]
    return _aut(1, G), None


def _red_zeta(F, P):
    return _aut(1, [[F.one / _S(F, P[0]), 0], [0, 1]]), None


REDUCERS = {
    "T1": _red_T1, "T2": _red_T2, "T4": _red_T4, "T9": _red_T9, "T5": _red_T5, "T6": _red_T6,
    "T7": _red_T7, "T8": _red_T8, "T10": _red_T10, "T12": _red_T12, "T14": _red_T14,
}


def reduce_point(T: AbelianType, P):
    """(representative name, xi or None, phi) with act(phi, P) the representative point."""
    F = T.F
    P = _codes(P)
    name = orbit_invariant(T, P)
    red = _red_zeta if parse_zeta(T.label, F.p) is not None else REDUCERS[T.label]
    phi, xi = red(F, P)
    rep = next(r for r in representatives(T) if r.name == name)
    target = rep.point(F, xi)
    if not tilde_subgroup(T, phi):
        raise AssertionError(f"{T.label}: reduction produced phi outside Aut(T)")
    if act(T, phi, P) != target:
        raise AssertionError(f"{T.label}: reduction of {P} missed {rep.name}")
    return name, xi, phi


# family stabiliser solutions: phi with (xi1) -> (xi2), enumerated over finitely many roots

def _fam_T5(F, x1, x2):
    p = F.p
    for al in range(1, p):
        for d in F.solve_power(p + 1, F.inv(al)):
            g = F.frob(d)
            yield _aut(g, [[al, 0], [0, F.mul(al, g)]])


def _fam_T10(F, x1, x2):
    p = F.p
    for u in F.mu(p * p - p + 1):
        g = F.frob(u)
        yield _aut(F.pow(g, 1 - p), [[g, 0], [0, F.frob(g)]])


def _fam_T9(F, x1, x2):
    p = F.p
    for g in F.mu(p * p - p - 1):
        yield _aut(F.inv(F.frob(g, 2)), [[g, 0], [0, F.frob(g)]])


def _fam_T4(F, x1, x2):
    p = F.p
    for al in range(1, p):
        for d in F.solve_power(p - 1, F.inv(al)):
            yield _aut(F.frob(d), [[al, 0], [0, F.inv(d)]])


def _fam_T2_110(F, x1, x2):
    for eps in (1, F.neg(1)):
        yield _aut(eps, [[eps, 0], [0, 1]])


def _fam_T2_101(F, x1, x2):
    for d in F.solve_power(2 * F.p - 2, 1):
        g = F.frob(d)
        al = F.inv(d)
        yield _aut(g, [[F.mul(al, g), 0], [0, al]])


def _fam_T8_00(F, x1, x2):
    for al in range(1, F.p):
        yield _aut(1, [[al, 0], [0, al]])


def _fam_T8_10(F, x1, x2):
    yield identity_aut()


FAMILY_SOLVERS = {
    ("T5", "(xi,0,1)"): _fam_T5,
    ("T10", "(xi,0,1)"): _fam_T10,
    ("T9", "(xi,0,1,0,1)"): _fam_T9,
    ("T4", "(0,xi,1,0,1)"): _fam_T4,
    ("T2", "(0,xi,1,1,0)"): _fam_T2_110,
    ("T2", "(0,xi,1,0,1)"): _fam_T2_101,
    ("T8", "(xi,0,0)"): _fam_T8_00,
    ("T8", "(xi,1,0)"): _fam_T8_10,
}


def family_solve(T: AbelianType, name, xi1, xi2):
    """phi in the stabiliser of the family's fixed coordinates with xi1 -> xi2, or None."""
    F = T.F
    rep = next(r for r in representatives(T) if r.name == name)
    P, Q = rep.point(F, xi1), rep.point(F, xi2)
    for phi in FAMILY_SOLVERS[(T.label, name)](F, xi1, xi2):
        if tilde_subgroup(T, phi) and act(T, phi, P) == Q:
            return phi
    return None


def orbit_same(T: AbelianType, P, Q):
    """phi with act(phi, P) = Q over the configured field, or None."""
    F = T.F
    P = _codes(P)
    Q = _codes(Q)
    if orbit_invariant(T, P) != orbit_invariant(T, Q):
        return None
    nP, xP, fP = reduce_point(T, P)
    _, xQ, fQ = reduce_point(T, Q)
    if xP is None or xP == xQ:
        mid = identity_aut()
    else:
        mid = family_solve(T, nP, xP, xQ)
        if mid is None:
            return None
    phi = fP.then(mid, F).then(fQ.inverse(F), F)
    assert act(T, phi, P) == Q
    return phi
