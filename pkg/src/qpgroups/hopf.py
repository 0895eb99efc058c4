"""Finite-dimensional Hopf algebras given by structure constants.

Every tensor is a digit array over the field: ``mult[a, b]`` and
``comult[a][i, j]`` are vectors/coefficients with a trailing digit axis.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import Field, fp_rank
from .rla import RestrictedLie, _gf_rank


@dataclass
class HopfAlgebra:
    F: Field
    mult: np.ndarray  # (d, d, d, m): e_a e_b
    comult: np.ndarray  # (d, d, d, m): Delta(e_a) = sum comult[a, i, j] e_i (x) e_j
    counit: np.ndarray  # (d, m)
    antipode: np.ndarray  # (d, d, m), row convention
    unit: int = 0
    labels: list = None
    generators: list = None  # basis indices generating the algebra (PBW algebras)
    gen_names: list = None
    name: str = ""
    engine: object = dc_field(default=None, repr=False, compare=False)
    memo: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self):
        return self.mult.shape[0]

    # -- basic linear algebra in H and H (x) H ----------------------------------

    def basis(self, i):
        e = self.F.zeros(self.dim)
        e[i, 0] = 1
        return e

    def one(self):
        return self.basis(self.unit)

    def mul(self, u, v):
        return self.F.matmul(u[None], self.right_mat(v))[0]

    def left_mats(self):
        """L_a with e_b L_a = e_a e_b: (d, d, d, m)."""
        return self.mult

    def right_mat(self, v):
        """Matrix of x -> x v (row convention)."""
        F, d = self.F, self.dim
        return F.matmul(v[None], self.mult.transpose(1, 0, 2, 3).reshape(d, d * d, F.m)).reshape(d, d, F.m)

    def delta(self, v):
        F, d = self.F, self.dim
        return F.matmul(v[None], self.comult.reshape(d, d * d, F.m))[0].reshape(d, d, F.m)

    def tensor_mul(self, X, Y):
        """(X Y) in H (x) H for dense (d, d, m) tensors."""
        F, d = self.F, self.dim
        acc = F.zeros((d, d))
        rows = {}
        for u, v in zip(*np.nonzero(Y.any(axis=-1))):
            rows.setdefault(int(u), []).append(int(v))
        Rb = self.mult.transpose(1, 0, 2, 3)  # Rb[b] = right multiplication by e_b
        for u, vs in rows.items():
            W = F.zeros((d, d))
            for v in vs:
                W = (W + F.vscale(Rb[v], F.from_digits(Y[u, v]))) % F.p
            acc = (acc + F.matmul(F.matmul(Rb[u].transpose(1, 0, 2), X), W)) % F.p
        return acc

    def tensor_mul_batch(self, Xs, Y):
        """X Y for every X in the stack Xs (k, d, d, m)."""
        F, d = self.F, self.dim
        k = Xs.shape[0]
        acc = F.zeros((k, d, d))
        Rb = self.mult.transpose(1, 0, 2, 3)
        for u, v in zip(*np.nonzero(Y.any(axis=-1))):
            c = F.from_digits(Y[u, v])
            W = F.matmul(Xs.reshape(k * d, d, F.m), Rb[v]).reshape(k, d, d, F.m)  # [a, i, l]
            W = F.matmul(W.transpose(0, 2, 1, 3).reshape(k * d, d, F.m), Rb[u])  # [(a, l), k]
            W = W.reshape(k, d, d, F.m).transpose(0, 2, 1, 3)
            acc = (acc + F.vscale(W, c)) % F.p
        return acc

    # -- axioms --------------------------------------------------------------------

    def check_axioms(self, full=None):
        return check_hopf_axioms(self, full)

    def primitive_space(self):
        return primitive_space(self)


def _memo(fn):
    """Cache a structural query on the algebra (structure tensors are never mutated)."""
    @functools.wraps(fn)
    def wrapper(H):
        key = fn.__name__
        if key not in H.memo:
            H.memo[key] = fn(H)
        return H.memo[key]
    return wrapper


def _eq(a, b, p):
    return not ((np.asarray(a) - np.asarray(b)) % p).any()


def _full_mode(H):
    return H.dim ** 4 * H.F.m <= 2_000_000


def check_hopf_axioms(H: HopfAlgebra, full=None):
    """Evaluate the Hopf axioms; returns {axiom: bool, 'failures': {...}, 'mode': ...}.

    With generators available, associativity, multiplicativity of Delta and
    coassociativity are checked on (basis, generator) pairs, which implies
    the full statements by induction on PBW words.  Otherwise (or when
    ``full``) all basis pairs/triples are checked.
    """
    F, d, p = H.F, H.dim, H.F.p
    if full is None:
        full = H.generators is None or _full_mode(H)
    fails = {}
    res = {}
    e1 = H.one()
    Rb = H.mult.transpose(1, 0, 2, 3)  # right multiplication by basis elements

    # unit
    eye = F.lift(np.eye(d, dtype=np.int64))
    res["unit"] = _eq(H.mult[H.unit], eye, p) and _eq(H.mult[:, H.unit], eye, p)

    # associativity
    if full or H.generators is None:
        # (e_a e_b) e_c versus e_a (e_b e_c) for all triples
        AB = H.mult.reshape(d * d, d, F.m)  # [(a,b), k]
        left = F.matmul(AB, H.mult.reshape(d, d * d, F.m))  # [(a,b), (c, out)]
        BC = H.mult.reshape(d * d, d, F.m)  # [(b,c), k]
        right = F.matmul(BC, H.mult.transpose(1, 0, 2, 3).reshape(d, d * d, F.m))
        left = left.reshape(d, d, d, d, F.m)  # a b c out
        right = right.reshape(d, d, d, d, F.m).transpose(2, 0, 1, 3, 4)  # (b c a out) -> a b c out
        bad = np.nonzero(((left - right) % p).any(axis=-1))
        ok = bad[0].size == 0
        if not ok:
            fails["associativity"] = tuple(int(x[0]) for x in bad[:3])
    else:
        ok = True
        for g in H.generators:
            for b in range(d):
                lhs = F.matmul(Rb[b], Rb[g])
                bg = H.mult[b, g]
                rhs = F.zeros((d, d))
                for k in np.nonzero(bg.any(axis=-1))[0]:
                    rhs = (rhs + F.vscale(Rb[k], F.from_digits(bg[k]))) % p
                if not _eq(lhs, rhs, p):
                    ok = False
                    fails.setdefault("associativity", (b, g))
                    break
            if not ok:
                break
    res["associativity"] = ok

    # counit
    eps = H.counit
    ok = True
    for a in range(d):
        X = H.comult[a]
        l = F.matmul(eps[None], X)[0]
        r = F.matmul(X, eps[:, None, :])[:, 0]
        if not (_eq(l, H.basis(a), p) and _eq(r, H.basis(a), p)):
            ok = False
            fails.setdefault("counit", a)
            break
    res["counit"] = ok
    # counit is an algebra map
    ok = True
    ee = F.matmul(H.mult.reshape(d * d, d, F.m), eps[:, None, :]).reshape(d, d, F.m)
    outer = F.vmul(eps[:, None, :], eps[None, :, :])
    res["counit_multiplicative"] = _eq(ee, outer, p)

    # Delta multiplicative
    targets = range(d) if (full or H.generators is None) else H.generators
    ok = True
    flatD = H.comult.reshape(d, d * d, F.m)
    for g in targets:
        lhs = H.tensor_mul_batch(H.comult, H.comult[g])
        rhs = F.matmul(H.mult[:, g], flatD).reshape(d, d, d, F.m)
        bad = np.nonzero(((lhs - rhs) % p).any(axis=(1, 2, 3)))[0]
        if bad.size:
            ok = False
            fails.setdefault("comult_multiplicative", (int(bad[0]), int(g)))
            break
    res["comult_multiplicative"] = ok

    # coassociativity
    targets = range(d) if (full or H.generators is None) else [H.unit] + list(H.generators)
    ok = True
    for a in targets:
        X = H.comult[a]
        # (Delta (x) 1): sum X[i,j] Delta(e_i) (x) e_j -> [k, l, j]
        left = F.matmul(X.transpose(1, 0, 2), H.comult.reshape(d, d * d, F.m))  # [j, (k,l)]
        left = left.reshape(d, d, d, F.m).transpose(1, 2, 0, 3)
        right = F.matmul(X, H.comult.reshape(d, d * d, F.m)).reshape(d, d, d, F.m)  # [i, k, l]
        if not _eq(left, right, p):
            ok = False
            fails.setdefault("coassociativity", a)
            break
    res["coassociativity"] = ok

    # antipode: m(S (x) 1) Delta = u eps = m(1 (x) S) Delta
    S = H.antipode
    SL = F.matmul(S.reshape(d, d, F.m), H.mult.reshape(d, d * d, F.m)).reshape(d, d, d, F.m)  # S(e_i) e_j
    SR = F.matmul(S, H.mult.transpose(1, 0, 2, 3).reshape(d, d * d, F.m))
    SR = SR.reshape(d, d, d, F.m).transpose(1, 0, 2, 3)  # e_i S(e_j) indexed [i, j]
    lhs1 = F.matmul(H.comult.reshape(d, d * d, F.m), SL.reshape(d * d, d, F.m))
    lhs2 = F.matmul(H.comult.reshape(d, d * d, F.m), SR.reshape(d * d, d, F.m))
    target = F.vmul(eps[:, None, :], e1[None, :, :])
    ok = _eq(lhs1, target, p) and _eq(lhs2, target, p)
    if not ok:
        fails["antipode"] = True
    res["antipode"] = ok
    res["mode"] = "full" if (full or H.generators is None) else "generators"
    res["failures"] = fails
    res["ok"] = all(v for k, v in res.items() if isinstance(v, bool))
    return res


def hopf_ok(H, full=None):
    return check_hopf_axioms(H, full)["ok"]


# -- primitive space -----------------------------------------------------------


@_memo
def primitive_space(H: HopfAlgebra):
    """(basis rows (r, d, m), RestrictedLie on that basis)."""
    F, d = H.F, H.dim
    # Delta(e_a) - e_a (x) 1 - 1 (x) e_a for each a, as rows of length d*d
    rows = H.comult.copy()
    a = np.arange(d)
    rows[a, a, H.unit, 0] -= 1
    rows[a, H.unit, a, 0] -= 1
    rows %= F.p
    mat = rows.reshape(d, d * d, F.m).transpose(1, 0, 2)  # (d*d, d): x -> columns
    basis = F.nullspace(mat)
    r = basis.shape[0]
    # express products back in the basis: solve basis^T c = v
    BT = basis.transpose(1, 0, 2)

    def coords(v):
        sol = F.solve(BT, v)
        if sol is None:
            raise ValueError("primitive space not closed")
        return [int(c) for c in F.decode(sol)]

    bracket = [[None] * r for _ in range(r)]
    pm = []
    for i in range(r):
        for j in range(r):
            v = (H.mul(basis[i], basis[j]) - H.mul(basis[j], basis[i])) % F.p
            bracket[i][j] = coords(v)
        v = basis[i]
        acc = H.one()
        for _ in range(F.p):
            acc = H.mul(acc, v)
        pm.append(coords(acc))
    return basis, RestrictedLie(F, bracket, pm, [f"v{i + 1}" for i in range(r)])


# -- locality and connectedness ----------------------------------------------------


def _nilpotent(F, V, prod, right=None):
    """Is the span of rows V (k, d, m) nilpotent under the bilinear product ``prod``?

    ``right`` may give fewer rows W with V^k V = V^k W for every k.
    """
    right = V if right is None else right
    cur = V
    for _ in range(V.shape[1] + 1):
        if cur.shape[0] == 0:
            return True
        new = prod(cur, right)
        if new.shape[0] == 0:
            return True
        R, piv = F.rref(new)
        nxt = R[: len(piv)]
        if len(piv) == cur.shape[0] and F.rank(np.concatenate([cur, nxt])) == len(piv):
            return False
        cur = nxt
    return cur.shape[0] == 0


def _span_rows(F, rows):
    R, piv = F.rref(rows)
    return R[: len(piv)]


def _struct_product(F, Tstruct):
    """Bilinear product of row spans: rows s*r of sum A[r,i] B[s,j] Tstruct[i,j]."""
    d = Tstruct.shape[0]

    def prod(A, B):
        t = F.matmul(A, Tstruct.reshape(d, d * d, F.m)).reshape(A.shape[0], d, d, F.m)  # [r, j, out]
        out = F.matmul(B, t.transpose(1, 0, 2, 3).reshape(d, A.shape[0] * d, F.m))  # [s, (r, out)]
        return out.reshape(B.shape[0] * A.shape[0], d, F.m)

    return prod


@_memo
def is_local(H: HopfAlgebra):
    """Augmentation ideal ker(eps) nilpotent."""
    F = H.F
    I = _span_rows(F, F.nullspace(H.counit[None]))
    gens = None
    if H.generators is not None and _eq(H.counit[H.generators], 0, F.p):
        # PBW monomials are products ending in a generator, so ker(eps) = sum H g
        # and (ker eps)^k ker(eps) = sum (ker eps)^k g
        gens = np.stack([H.basis(g) for g in H.generators])
    return _nilpotent(F, I, _struct_product(F, H.mult), gens)


@_memo
def is_connected(H: HopfAlgebra):
    """Dual algebra H* is local: {f : f(1) = 0} is nilpotent under convolution."""
    F, d = H.F, H.dim
    if not _eq(H.one(), H.basis(H.unit), F.p):
        raise ValueError("unit is not a basis vector")
    I = F.zeros((d - 1, d))
    for k, a in enumerate(a for a in range(d) if a != H.unit):
        I[k, a, 0] = 1
    # (f g)(e_a) = sum_ij Delta(e_a)[i,j] f_i g_j
    return _nilpotent(F, I, _struct_product(F, H.comult.transpose(1, 2, 0, 3)))


def is_commutative(H: HopfAlgebra):
    return _eq(H.mult, H.mult.transpose(1, 0, 2, 3), H.F.p)


def is_cocommutative(H: HopfAlgebra):
    return _eq(H.comult, H.comult.transpose(0, 2, 1, 3), H.F.p)


def is_semisimple_connected(H: HopfAlgebra, connected=None):
    """For connected H: semisimple iff the primitive space is a torus."""
    if connected is None:
        connected = is_connected(H)
    if not connected:
        raise ValueError("semisimplicity test requires a connected Hopf algebra")
    _, L = primitive_space(H)
    return L.torus_check()


def invariant_vector(H: HopfAlgebra, samples=8, seed=0, extended=True):
    """Isomorphism invariants used to separate algebras.

    ``extended=False`` stops after the cheap structural invariants.
    """
    F = H.F
    conn = is_connected(H)
    basis, L = primitive_space(H)
    if not extended:
        return _base_invariants(H, L, conn)
    rng = random.Random(seed)
    # span of all v^[p]: basis images plus random samples
    imgs = [L.pmap(L.basis_vector(i)) for i in range(L.dim)]
    imgs += [L.pmap(L.random_element(rng)) for _ in range(samples)]
    prank = _gf_rank(F, imgs)
    center = _center_basis(L)
    zker = _pmap_kernel_dim(L, center)
    return {
        **_base_invariants(H, L, conn),
        "pmap_rank": prank,
        "center_pmap_kernel": zker,
        "pmap_ranks": _iterated_pmap_ranks(L, rng, samples),
        "derived_pmap_rank": _derived_pmap_rank(L, rng, samples),
        "power_span_dims": _power_span_dims(H, rng, samples),
    }


def _base_invariants(H, L, conn):
    return {
        "dim": H.dim,
        "commutative": is_commutative(H),
        "cocommutative": is_cocommutative(H),
        "local": is_local(H),
        "semisimple": L.torus_check() if conn else None,
        "dim_P": L.dim,
        "derived_dim": L.derived_dim(),
    }


def _sample_span(L, vecs, rng, samples):
    """vecs plus random combinations of them."""
    F = L.F
    out = list(vecs)
    for _ in range(samples if vecs else 0):
        acc = [0] * L.dim
        for v in vecs:
            c = rng.randrange(F.q)
            acc = [F.add(a, F.mul(c, b)) for a, b in zip(acc, v)]
        out.append(acc)
    return out


def _iterated_pmap_ranks(L, rng, samples, levels=3):
    """Ranks of the spans of v^[p]^k, k = 1..levels."""
    elems = _sample_span(L, [L.basis_vector(i) for i in range(L.dim)], rng, samples)
    out = []
    for _ in range(levels):
        elems = [L.pmap(v) for v in elems]
        out.append(_gf_rank(L.F, elems))
    return out


def _derived_pmap_rank(L, rng, samples):
    """Rank of the span of p-th powers of elements of [L, L]."""
    brackets = [L.bracket(L.basis_vector(i), L.basis_vector(j))
                for i in range(L.dim) for j in range(i + 1, L.dim)]
    brackets = [b for b in brackets if any(b)]
    return _gf_rank(L.F, [L.pmap(v) for v in _sample_span(L, brackets, rng, samples)])


def _power_span_dims(H, rng, samples, levels=2):
    """Dimensions of the spans of h^(p^k) over basis and random elements of H."""
    F, d = H.F, H.dim
    elems = [H.basis(a) for a in range(d)]
    for _ in range(samples):
        elems.append(F.encode(np.array([rng.randrange(F.q) for _ in range(d)], dtype=np.int64)))
    out = []
    for _ in range(levels):
        nxt = []
        for v in elems:
            acc = H.one()
            for _ in range(F.p):
                acc = H.mul(acc, v)
            nxt.append(acc)
        elems = nxt
        out.append(int(F.rank(np.stack(elems))))
    return out


def _center_basis(L: RestrictedLie):
    F, n = L.F, L.dim
    if n == 0:
        return []
    # v in center iff [v, x_j] = 0 for all j: linear in v
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.extend(L.bracket_table[i][j])
        rows.append(row)
    A = F.encode(np.array(rows, dtype=np.int64)).transpose(1, 0, 2)
    ns = F.nullspace(A)
    return [[int(c) for c in F.decode(v)] for v in ns]


def _pmap_kernel_dim(L: RestrictedLie, center):
    """k-dimension of ker(p-map) on the center (semilinear there)."""
    F = L.F
    if not center:
        return 0
    rows = []
    for v in center:
        for k in range(F.m):
            a = F._alpha_code_pow(k)
            w = [F.mul(a, c) for c in v]
            img = L.pmap(w)
            rows.append([dgt for c in img for dgt in F.digits(c)])
    A = np.array(rows, dtype=np.int64)
    return (A.shape[0] - fp_rank(A, F.p)) // F.m


def u_dim_primitive(H: HopfAlgebra):
    """dim u(P(H)) = p^{dim P(H)}."""
    basis, _ = primitive_space(H)
    return H.F.p ** basis.shape[0]


# -- text format -------------------------------------------------------------------


def dumps(H: HopfAlgebra):
    """Structure-constant text: header 'p m dim', then sparse blocks."""
    F, d = H.F, H.dim
    lines = [f"{F.p} {F.m} {d}", "modulus " + " ".join(map(str, F.modulus)), f"unit {H.unit}"]

    def block(name, arr, nidx):
        codes = F.decode(arr)
        nz = list(zip(*np.nonzero(codes)))
        lines.append(f"{name} {len(nz)}")
        for key in nz:
            lines.append(" ".join(str(int(k)) for k in key) + " " + F.fmt(int(codes[key])))

    block("mult", H.mult, 3)
    block("comult", H.comult, 3)
    block("counit", H.counit, 1)
    block("antipode", H.antipode, 2)
    return "\n".join(lines) + "\n"


def loads(text):
    lines = [l for l in text.splitlines() if l.strip()]
    p, m, d = map(int, lines[0].split())
    F = Field(p, m)
    mod = tuple(int(x) for x in lines[1].split()[1:])
    if mod != tuple(F.modulus):
        raise ValueError("modulus mismatch")
    unit = int(lines[2].split()[1])
    pos = 3
    shapes = {"mult": (d, d, d), "comult": (d, d, d), "counit": (d,), "antipode": (d, d)}
    arrs = {}
    while pos < len(lines):
        name, cnt = lines[pos].split()
        cnt = int(cnt)
        codes = np.zeros(shapes[name], dtype=object if F.q > 1 << 62 else np.int64)
        for l in lines[pos + 1: pos + 1 + cnt]:
            parts = l.split()
            key = tuple(int(x) for x in parts[:-1])
            codes[key] = F.parse(parts[-1])
        arrs[name] = F.encode(codes)
        pos += 1 + cnt
    return HopfAlgebra(F, arrs["mult"], arrs["comult"], arrs["counit"], arrs["antipode"], unit=unit)


def group_algebra_cyclic(F: Field, n):
    """k[C_n] with grouplike basis g^0..g^{n-1} (negative control for connectedness)."""
    d = n
    mult = F.zeros((d, d, d))
    comult = F.zeros((d, d, d))
    S = F.zeros((d, d))
    for a in range(d):
        for b in range(d):
            mult[a, b, (a + b) % n, 0] = 1
        comult[a, a, a, 0] = 1
        S[a, (-a) % n, 0] = 1
    counit = F.zeros(d)
    counit[:, 0] = 1
    return HopfAlgebra(F, mult, comult, counit, S, name=f"k[C{n}]")
