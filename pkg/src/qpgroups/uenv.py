"""PBW algebras: restricted enveloping algebras and their deformations.

An algebra is presented by ordered generators g_0 < g_1 < ..., commutators
``g_j g_i - g_i g_j`` for j > i and p-th power relations ``g_k^p = r_k``.  The
PBW basis consists of ordered monomials with exponents < p; the monomial with
exponents (e_0, e_1, ...) has index sum e_k p^k.

Symbolic expressions are dicts mapping words (tuples of generator indices) to
field codes; tensor expressions map pairs of words to codes.  Dense elements
are digit arrays of shape (dim, m).
"""

from __future__ import annotations

import math
import re
from functools import cached_property

import numpy as np

from .gf import Field
from .hopf import HopfAlgebra

# -- symbolic expressions ----------------------------------------------------


def expr_add(F, *exprs):
    out = {}
    for e in exprs:
        for w, c in e.items():
            v = F.add(out.get(w, 0), c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def expr_scale(F, c, e):
    c = F.elem(c)
    if not c:
        return {}
    return {w: F.mul(c, v) for w, v in e.items()}


def expr_mul(F, a, b):
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            v = F.add(out.get(w, 0), F.mul(c1, c2))
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def expr_pow(F, a, e):
    out = {(): 1}
    for _ in range(e):
        out = expr_mul(F, out, a)
    return out


def gen(k, c=1):
    return {(k,): c}


def const(c=1):
    return {(): c} if c else {}


def texpr_add(F, *ts):
    return expr_add(F, *ts)


def texpr_mul(F, a, b):
    out = {}
    for (l1, r1), c1 in a.items():
        for (l2, r2), c2 in b.items():
            key = (l1 + l2, r1 + r2)
            v = F.add(out.get(key, 0), F.mul(c1, c2))
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def texpr_pow(F, a, e):
    out = {((), ()): 1}
    for _ in range(e):
        out = texpr_mul(F, out, a)
    return out


def tensor_of(F, left, right):
    """Pure tensor of two expressions."""
    out = {}
    for w1, c1 in left.items():
        for w2, c2 in right.items():
            v = F.add(out.get((w1, w2), 0), F.mul(c1, c2))
            if v:
                out[(w1, w2)] = v
    return out


def primitive_texpr(k):
    """g_k (x) 1 + 1 (x) g_k."""
    return {((k,), ()): 1, ((), (k,)): 1}


def omega_coeffs(p):
    """(p-1)!/(i!(p-i)!) mod p for i = 1..p-1."""
    f = math.factorial
    return [f(p - 1) // (f(i) * f(p - i)) % p for i in range(1, p)]


def omega_texpr(F, r):
    """omega(r) = sum_i c_i r^i (x) r^(p-i) for an expression r."""
    p = F.p
    out = {}
    for i, c in enumerate(omega_coeffs(p), start=1):
        term = tensor_of(F, expr_pow(F, r, i), expr_pow(F, r, p - i))
        out = expr_add(F, out, expr_scale(F, c, term))
    return out


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+|\([^)]*\)[^+-]*)")


def _split_terms(s):
    """Split at top-level + and - (parentheses protect residue coefficients)."""
    terms, depth, cur, sign = [], 0, "", 1
    s = s.strip()
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith("^"):
            terms.append((sign, cur.strip()))
            sign = 1 if ch == "+" else -1
            cur = ""
        elif depth == 0 and ch in "+-" and not cur.strip():
            sign *= 1 if ch == "+" else -1
        else:
            cur += ch
        i += 1
    if cur.strip():
        terms.append((sign, cur.strip()))
    return terms


def parse_expr(F, s, names, params=None):
    """Parse 'c*x^a*y^b + ...'; coefficients are ints, parameter names or '(residue)'."""
    params = params or {}
    index = {n: k for k, n in enumerate(names)}
    out = {}
    if s.strip() in ("", "0"):
        return out
    for sign, term in _split_terms(s):
        coef = 1
        word = ()
        for fac in _split_factors(term):
            if fac.startswith("("):
                coef = F.mul(coef, F.parse(fac[1:-1]))
                continue
            base, _, e = fac.partition("^")
            e = int(e) if e else 1
            if base in index:
                word += (index[base],) * e
            elif base in params:
                coef = F.mul(coef, F.pow(F.elem(params[base]), e))
            elif re.fullmatch(r"\d+", base):
                coef = F.mul(coef, F.pow(int(base) % F.p, e))
            else:
                raise ValueError(f"unknown symbol {base!r} in {s!r}")
        if sign < 0:
            coef = F.neg(coef)
        v = F.add(out.get(word, 0), coef)
        if v:
            out[word] = v
        else:
            out.pop(word, None)
    return out


def _split_factors(term):
    out, depth, cur = [], 0, ""
    for ch in term:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


# -- the PBW engine ------------------------------------------------------------


class PBWAlgebra:
    """Algebra with truncated ordered-monomial basis.

    ``pth[k]`` is the expression for g_k^p; ``comm[(j, i)]`` (j > i) is the
    expression for g_j g_i - g_i g_j (missing pairs commute).
    """

    def __init__(self, F: Field, names, pth, comm=None, label=""):
        self.F = F
        self.p = F.p
        self.names = list(names)
        self.ngen = len(self.names)
        self.dim = self.p**self.ngen
        self.pth = [dict(e) for e in pth]
        self.comm = {k: dict(v) for k, v in (comm or {}).items()}
        for (j, i) in self.comm:
            if not j > i:
                raise ValueError("commutator keys must be (j, i) with j > i")
        self.label = label
        self._pw = [self.p**k for k in range(self.ngen)]
        self._tg = {}
        self._busy = set()
        self._word_cache = {}

    # monomials
    def exps(self, idx):
        out = []
        for _ in range(self.ngen):
            idx, r = divmod(idx, self.p)
            out.append(r)
        return tuple(out)

    def index(self, exps):
        if any(not 0 <= e < self.p for e in exps):
            raise ValueError(f"exponent out of range in {exps}")
        return sum(e * w for e, w in zip(exps, self._pw))

    def word(self, idx):
        w = ()
        for k, e in enumerate(self.exps(idx)):
            w += (k,) * e
        return w

    def degree(self, idx):
        return sum(self.exps(idx))

    def monomial_str(self, idx):
        parts = []
        for n, e in zip(self.names, self.exps(idx)):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return "*".join(parts) if parts else "1"

    # rewriting
    def _vadd(self, acc, vec, scale=1):
        F = self.F
        for k, c in vec.items():
            v = F.add(acc.get(k, 0), F.mul(scale, c) if scale != 1 else c)
            if v:
                acc[k] = v
            else:
                acc.pop(k, None)
        return acc

    def times_gen(self, idx, k):
        """Normal form of (basis monomial idx) * g_k as a sparse dict."""
        key = (idx, k)
        hit = self._tg.get(key)
        if hit is not None:
            return hit
        if key in self._busy:
            raise RecursionError(f"rewriting loops at {self.monomial_str(idx)}*{self.names[k]}")
        self._busy.add(key)
        try:
            e = self.exps(idx)
            last = max((i for i in range(self.ngen) if e[i]), default=-1)
            if last <= k:
                if e[k] + 1 < self.p:
                    res = {idx + self._pw[k]: 1}
                else:
                    m0 = idx - (self.p - 1) * self._pw[k]
                    res = self.vec_times_expr({m0: 1}, self.pth[k])
            else:
                m1 = idx - self._pw[last]
                res = self.vec_times_gen(self.times_gen(m1, k), last)
                c = self.comm.get((last, k))
                if c:
                    self._vadd(res, self.vec_times_expr({m1: 1}, c))
        finally:
            self._busy.discard(key)
        self._tg[key] = res
        return res

    def vec_times_gen(self, vec, k):
        acc = {}
        for idx, c in vec.items():
            self._vadd(acc, self.times_gen(idx, k), c)
        return acc

    def vec_times_word(self, vec, word):
        for k in word:
            vec = self.vec_times_gen(vec, k)
            if not vec:
                break
        return vec

    def vec_times_expr(self, vec, expr):
        acc = {}
        for w, c in expr.items():
            self._vadd(acc, self.vec_times_word(dict(vec), w), c)
        return acc

    def eval_word(self, word):
        hit = self._word_cache.get(word)
        if hit is None:
            if not word:
                hit = {0: 1}
            else:
                hit = self.vec_times_gen(self.eval_word(word[:-1]), word[-1])
            self._word_cache[word] = hit
        return hit

    def eval_expr(self, expr):
        acc = {}
        for w, c in expr.items():
            self._vadd(acc, self.eval_word(w), c)
        return acc

    # dense conversions
    def dense(self, vec):
        codes = np.zeros(self.dim, dtype=object if self.F.q > 1 << 62 else np.int64)
        for k, c in vec.items():
            codes[k] = c
        return self.F.encode(codes)

    def sparse(self, arr):
        codes = self.F.decode(arr)
        return {i: int(c) for i, c in enumerate(codes) if c}

    def dense_expr(self, expr):
        return self.dense(self.eval_expr(expr))

    def dense_texpr(self, texpr):
        """Tensor expression -> (dim, dim, m) digit array."""
        F = self.F
        out = F.zeros((self.dim, self.dim))
        for (wl, wr), c in texpr.items():
            a = self.eval_word(wl)
            b = self.eval_word(wr)
            for i, ca in a.items():
                for j, cb in b.items():
                    v = F.mul(c, F.mul(ca, cb))
                    cur = F.from_digits(out[i, j])
                    out[i, j] = F.digits(F.add(cur, v))
        return out

    # structure constants
    @cached_property
    def gen_right(self):
        """Right multiplication by each generator: (ngen, d, d, m)."""
        F, d = self.F, self.dim
        mats = F.zeros((self.ngen, d, d))
        for k in range(self.ngen):
            for idx in range(d):
                for j, c in self.times_gen(idx, k).items():
                    mats[k, idx, j] = F.digits(c)
        return mats

    @cached_property
    def basis_right(self):
        """R_b for every basis monomial b (right multiplication), (d, d, d, m)."""
        F, d = self.F, self.dim
        out = F.zeros((d, d, d))
        out[0] = F.lift(np.eye(d, dtype=np.int64))
        for b in range(1, d):
            k = self.last_gen(b)
            out[b] = F.matmul(out[b - self._pw[k]], self.gen_right[k])
        return out

    def last_gen(self, idx):
        e = self.exps(idx)
        return max(i for i in range(self.ngen) if e[i])

    @cached_property
    def mult(self):
        """mult[a, b] = digits of e_a e_b, shape (d, d, d, m)."""
        return np.ascontiguousarray(self.basis_right.transpose(1, 0, 2, 3))

    def mul(self, u, v):
        """Product of dense elements."""
        F, d = self.F, self.dim
        outer = F.vmul(u[:, None, :], v[None, :, :]).reshape(1, d * d, F.m)
        return F.matmul(outer, self.mult.reshape(d * d, d, F.m))[0]

    def power(self, u, e):
        out = self.F.zeros(self.dim)
        out[0, 0] = 1
        for _ in range(e):
            out = self.mul(out, u)
        return out

    def derivation(self, images):
        """Matrix (row convention) of the derivation with g_k -> images[k] (dense)."""
        F, d = self.F, self.dim
        D = F.zeros((d, d))
        for b in range(1, d):
            k = self.last_gen(b)
            bp = b - self._pw[k]
            row = F.matmul(D[bp][None], self.gen_right[k])[0]
            e = F.zeros(d)
            e[bp, 0] = 1
            row = (row + self.mul(e, images[k])) % F.p
            D[b] = row
        return D

    # coalgebra
    def coproduct_tensor(self, gen_coproducts):
        """Delta on the basis from generator coproducts (dense (d,d,m) each)."""
        F, d = self.F, self.dim
        out = F.zeros((d, d, d))
        out[0, 0, 0, 0] = 1
        plans = [self._tensor_plan(X) for X in gen_coproducts]
        for b in range(1, d):
            k = self.last_gen(b)
            out[b] = self.tensor_right_mul(out[b - self._pw[k]][None], plans[k])[0]
        return out

    def _tensor_plan(self, Y):
        """Group the nonzero entries of Y by left index: [(u, W_u = sum_v Y[u,v] R_v)]."""
        F = self.F
        nz = np.nonzero(Y.any(axis=-1))
        by_u = {}
        for u, v in zip(*nz):
            by_u.setdefault(int(u), []).append(int(v))
        plan = []
        for u, vs in sorted(by_u.items()):
            W = F.zeros((self.dim, self.dim))
            for v in vs:
                c = F.from_digits(Y[u, v])
                W = (W + F.vscale(self.basis_right[v], c)) % F.p
            plan.append((u, W))
        return plan

    def tensor_right_mul(self, Xs, plan):
        """Batch product X * Y in H (x) H for X in Xs (B, d, d, m); Y given by a plan."""
        F, d = self.F, self.dim
        B = Xs.shape[0]
        acc = F.zeros((B, d, d))
        for u, W in plan:
            XW = F.matmul(Xs.reshape(B * d, d, F.m), W).reshape(B, d, d, F.m)
            RuT = self.basis_right[u].transpose(1, 0, 2)
            Z = XW.transpose(1, 0, 2, 3).reshape(d, B * d, F.m)
            Z = F.matmul(RuT, Z).reshape(d, B, d, F.m).transpose(1, 0, 2, 3)
            acc = (acc + Z) % F.p
        return acc

    def tensor_mul(self, X, Y):
        return self.tensor_right_mul(X[None], self._tensor_plan(Y))[0]

    def antipode_matrix(self, comult):
        """S from m(S (x) 1) Delta(g) = 0 generator by generator, anti-multiplicatively."""
        F, d, p = self.F, self.dim, self.p
        S = F.zeros((d, d))
        S[0, 0, 0] = 1
        for k in range(self.ngen):
            g = self._pw[k]
            X = comult[g]
            acc = F.zeros(d)
            for i, j in zip(*np.nonzero(X.any(axis=-1))):
                i, j = int(i), int(j)
                if (i, j) == (g, 0):
                    continue
                if i >= g:
                    raise ValueError(
                        f"coproduct of {self.names[k]} involves later generators; reorder them")
                ej = F.zeros(d)
                ej[j, 0] = 1
                term = self.mul(S[i], ej)
                c = F.from_digits(X[i, j])
                acc = (acc + F.vscale(term, c)) % F.p
            S[g] = (-acc) % p
            for b in range(g + 1, min(d, p * g)):
                if self.last_gen(b) != k:
                    continue
                S[b] = self.mul(S[g], S[b - g])
        return S

    def hopf(self, gen_coproducts=None, name=None):
        """HopfAlgebra from generator coproducts.

        Entry k may be None (primitive), a tensor expression giving the reduced
        part psi(g_k), or a dense (d, d, m) array giving Delta(g_k) itself.
        """
        F, d = self.F, self.dim
        dense = []
        for k in range(self.ngen):
            c = None if gen_coproducts is None else gen_coproducts[k]
            if c is None:
                dense.append(self.dense_texpr(primitive_texpr(k)))
            elif isinstance(c, dict):
                dense.append(self.dense_texpr(texpr_add(F, primitive_texpr(k), c)))
            else:
                dense.append(np.asarray(c, dtype=np.int64))
        comult = self.coproduct_tensor(dense)
        counit = F.zeros(d)
        counit[0, 0] = 1
        S = self.antipode_matrix(comult)
        labels = [self.monomial_str(i) for i in range(d)]
        return HopfAlgebra(F, self.mult, comult, counit, S, labels=labels,
                           generators=[self._pw[k] for k in range(self.ngen)],
                           gen_names=list(self.names), name=name or self.label,
                           engine=self)


def primitive_hopf(pbw: PBWAlgebra, name=None):
    return pbw.hopf(None, name)


# -- restricted enveloping algebras -----------------------------------------


def enveloping(F, bracket, pmap_basis, names, label=""):
    """u(L) for a restricted Lie algebra given by structure constants."""
    n = len(names)
    pth = [{(j,): c for j, c in enumerate(pmap_basis[k]) if c} for k in range(n)]
    comm = {}
    for j in range(n):
        for i in range(j):
            v = bracket[j][i]
            if any(v):
                comm[(j, i)] = {(k,): c for k, c in enumerate(v) if c}
    return PBWAlgebra(F, names, pth, comm, label)


class UH(PBWAlgebra):
    """u(h) for abelian h with restriction matrix R: commutative, primitive generators."""

    def __init__(self, F: Field, R, names=None):
        n = len(R)
        names = names or (["x", "y", "w"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)])
        R = [[F.elem(c) for c in row] for row in R]
        pth = [{(j,): c for j, c in enumerate(R[k]) if c} for k in range(n)]
        super().__init__(F, names, pth, {}, label="u(h)")
        self.R = R
        self.n = n

    @cached_property
    def binom_coproduct(self):
        """Integer (mod p) Delta on the basis: (d, d, d) F_p array."""
        d, p = self.dim, self.p
        out = np.zeros((d, d, d), dtype=np.int64)
        for b in range(d):
            e = self.exps(b)
            for split in np.ndindex(*[k + 1 for k in e]):
                c = 1
                for ek, ik in zip(e, split):
                    c = c * math.comb(ek, ik) % p
                left = self.index(split)
                right = self.index(tuple(ek - ik for ek, ik in zip(e, split)))
                out[b, left, right] = (out[b, left, right] + c) % p
        return out

    def hopf(self, gen_coproducts=None, name=None):
        if gen_coproducts is None:
            F, d = self.F, self.dim
            comult = F.lift(self.binom_coproduct)
            counit = F.zeros(d)
            counit[0, 0] = 1
            S = self.antipode_matrix(comult)
            return HopfAlgebra(F, self.mult, comult, counit, S,
                               labels=[self.monomial_str(i) for i in range(d)],
                               generators=[self._pw[k] for k in range(self.ngen)],
                               gen_names=list(self.names), name=name or "u(h)", engine=self)
        return super().hopf(gen_coproducts, name)

    def linear_part(self, v):
        """Dense element of h (length n list of codes) -> dense u(h) element."""
        out = self.F.zeros(self.dim)
        for k, c in enumerate(v):
            out[self._pw[k]] = self.F.digits(c)
        return out


# -- element wrappers ----------------------------------------------------------


class AlgElem:
    """Sparse element {exponent tuple: code} of a PBW algebra."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: PBWAlgebra, coeffs=None):
        object.__setattr__(self, "algebra", algebra)
        clean = {}
        for k, c in (coeffs or {}).items():
            k = tuple(k) if not isinstance(k, int) else algebra.exps(k)
            c = algebra.F.elem(c) if not isinstance(c, int) else c % algebra.F.q
            if c:
                clean[k] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *_):
        raise AttributeError("AlgElem is immutable")

    @classmethod
    def from_dense(cls, algebra, arr):
        return cls(algebra, {algebra.exps(i): c for i, c in algebra.sparse(arr).items()})

    @classmethod
    def parse(cls, algebra, text, params=None):
        expr = parse_expr(algebra.F, text, algebra.names, params)
        return cls.from_dict(algebra, algebra.eval_expr(expr))

    @classmethod
    def from_dict(cls, algebra, vec):
        return cls(algebra, {algebra.exps(i): c for i, c in vec.items()})

    @classmethod
    def generator(cls, algebra, name):
        k = algebra.names.index(name)
        e = [0] * algebra.ngen
        e[k] = 1
        return cls(algebra, {tuple(e): 1})

    @classmethod
    def one(cls, algebra):
        return cls(algebra, {(0,) * algebra.ngen: 1})

    def dense(self):
        A = self.algebra
        return A.dense({A.index(e): c for e, c in self.coeffs.items()})

    def _check(self, other):
        if not isinstance(other, AlgElem) or other.algebra is not self.algebra:
            raise ValueError("elements live in different algebras")

    def __add__(self, other):
        self._check(other)
        F = self.algebra.F
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = F.add(out.get(k, 0), c)
        return AlgElem(self.algebra, out)

    def __neg__(self):
        F = self.algebra.F
        return AlgElem(self.algebra, {k: F.neg(c) for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.algebra.F
        c = F.elem(c)
        return AlgElem(self.algebra, {k: F.mul(c, v) for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgElem):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = scale

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return isinstance(other, AlgElem) and other.algebra is self.algebra and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def constant_term(self):
        return self.coeffs.get((0,) * self.algebra.ngen, 0)

    def in_augmentation(self):
        return self.constant_term() == 0

    def to_text(self):
        return format_terms(self.algebra, [(self.algebra.index(e), c) for e, c in self.coeffs.items()])

    def __repr__(self):
        return f"AlgElem({self.to_text()})"

    __str__ = to_text


def _coef_str(F, c):
    s = F.fmt(c)
    return f"({s})" if "a" in s else s


def format_terms(A, items):
    F = A.F
    items = sorted(items, key=lambda t: (A.degree(t[0]), A.exps(t[0])[::-1]))
    if not items:
        return "0"
    parts = []
    for idx, c in items:
        mono = A.monomial_str(idx)
        cs = _coef_str(F, c)
        if mono == "1":
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"{cs}*{mono}")
    return " + ".join(parts)


class TensorElem:
    """Sparse element of A^(x)d: {(exps_1, ..., exps_d): code}."""

    __slots__ = ("algebra", "degree", "coeffs")

    def __init__(self, algebra, degree, coeffs=None, augmented=False):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "degree", degree)
        clean = {}
        unit = (0,) * algebra.ngen
        for key, c in (coeffs or {}).items():
            key = tuple(algebra.exps(k) if isinstance(k, (int, np.integer)) else tuple(k) for k in key)
            if len(key) != degree:
                raise ValueError("tensor key of wrong length")
            if augmented and unit in key:
                raise ValueError("cobar slots must be augmentation monomials")
            if c % algebra.F.q:
                clean[key] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *_):
        raise AttributeError("TensorElem is immutable")

    @classmethod
    def from_dense(cls, algebra, arr, offset=0):
        """Dense (N,)*degree + (m,) array; offset=1 for augmentation-indexed slots."""
        F = algebra.F
        codes = F.decode(arr)
        out = {}
        for key in zip(*np.nonzero(codes)):
            out[tuple(int(k) + offset for k in key)] = int(codes[key])
        return cls(algebra, codes.ndim, out)

    def dense(self, offset=0):
        A = self.algebra
        N = A.dim - offset
        codes = np.zeros((N,) * self.degree, dtype=object if A.F.q > 1 << 62 else np.int64)
        for key, c in self.coeffs.items():
            codes[tuple(A.index(e) - offset for e in key)] = c
        return A.F.encode(codes)

    def __add__(self, other):
        F = self.algebra.F
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = F.add(out.get(k, 0), c)
        return TensorElem(self.algebra, self.degree, out)

    def __neg__(self):
        F = self.algebra.F
        return TensorElem(self.algebra, self.degree, {k: F.neg(c) for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.algebra.F
        c = F.elem(c)
        return TensorElem(self.algebra, self.degree, {k: F.mul(c, v) for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return (isinstance(other, TensorElem) and other.algebra is self.algebra
                and other.degree == self.degree and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def to_text(self):
        A, F = self.algebra, self.algebra.F
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda t: [(sum(e), e[::-1]) for e in t[0]])
        parts = []
        for key, c in items:
            body = "|".join(A.monomial_str(A.index(e)) for e in key)
            cs = _coef_str(F, c)
            parts.append(body if cs == "1" else f"{cs}*{body}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, algebra, text, degree=2, params=None):
        """Inverse of to_text: terms 'c*m1|m2'."""
        F = algebra.F
        out = {}
        if text.strip() == "0":
            return cls(algebra, degree, {})
        for sign, term in _split_terms(text):
            coef_part, slots = None, term.split("|")
            first = _split_factors(slots[0])
            coef = 1
            rest = []
            for fac in first:
                if fac.startswith("(") or re.fullmatch(r"\d+", fac) or (params and fac in params):
                    if fac.startswith("("):
                        coef = F.mul(coef, F.parse(fac[1:-1]))
                    elif params and fac in params:
                        coef = F.mul(coef, F.elem(params[fac]))
                    else:
                        coef = F.mul(coef, int(fac) % F.p)
                else:
                    rest.append(fac)
            slots[0] = "*".join(rest) if rest else "1"
            del coef_part
            key = []
            for s in slots:
                vec = algebra.eval_expr(parse_expr(F, s, algebra.names, params))
                if len(vec) != 1 or list(vec.values())[0] != 1:
                    raise ValueError(f"slot {s!r} is not a basis monomial")
                key.append(algebra.exps(next(iter(vec))))
            if sign < 0:
                coef = F.neg(coef)
            key = tuple(key)
            v = F.add(out.get(key, 0), coef)
            out[key] = v
        return cls(algebra, degree, out)

    def __repr__(self):
        return f"TensorElem({self.to_text()})"

    __str__ = to_text


# -- operations on elements ---------------------------------------------------


def mul(a: AlgElem, b: AlgElem) -> AlgElem:
    if a.algebra is not b.algebra:
        raise ValueError("algebra mismatch")
    A = a.algebra
    acc = {}
    for e1, c1 in a.coeffs.items():
        for e2, c2 in b.coeffs.items():
            vec = A.vec_times_word({A.index(e1): A.F.mul(c1, c2)}, A.word(A.index(e2)))
            A._vadd(acc, vec)
    return AlgElem.from_dict(A, acc)


def coproduct(a: AlgElem, hopf=None) -> TensorElem:
    """Delta(a); for u(h) the primitive coproduct, otherwise that of ``hopf``."""
    A = a.algebra
    if hopf is None:
        hopf = A.hopf()
    vec = a.dense()
    F = A.F
    d = A.dim
    out = F.matmul(vec[None], hopf.comult.reshape(d, d * d, F.m))[0].reshape(d, d, F.m)
    return TensorElem.from_dense(A, out)


def omega(r: AlgElem) -> TensorElem:
    """omega(r) for r in the span of the generators."""
    A = r.algebra
    if any(sum(e) != 1 for e in r.coeffs):
        raise ValueError("omega expects a linear combination of the generators")
    expr = {}
    for e, c in r.coeffs.items():
        expr[(e.index(1),)] = c
    return TensorElem.from_dense(A, A.dense_texpr(omega_texpr(A.F, expr)))


def rho_extend(T, t, uh: UH = None):
    """rho_z as a derivation on u(h) elements or slotwise on tensors."""
    uh = uh or t.algebra
    D = uh.derivation([uh.linear_part(T.M[k]) for k in range(T.n)])
    if isinstance(t, AlgElem):
        return AlgElem.from_dense(uh, uh.F.matmul(t.dense()[None], D)[0])
    arr = t.dense()
    out = uh.F.zeros(arr.shape[:-1])
    for s in range(t.degree):
        out = (out + apply_slot(uh.F, arr, D, s)) % uh.F.p
    return TensorElem.from_dense(uh, out)


def apply_slot(F, arr, A, slot):
    """Apply the (row convention) matrix A to tensor slot ``slot`` of arr (..., m)."""
    deg = arr.ndim - 1
    moved = np.moveaxis(arr, slot, deg - 1)  # slot to last position before digits
    shp = moved.shape
    flat = moved.reshape(-1, shp[-2], F.m)
    res = F.matmul(flat, A).reshape(shp[:-2] + (A.shape[1], F.m))
    return np.moveaxis(res, deg - 1, slot)


def decompose_plus(a: AlgElem):
    """Split an augmentation element into (degree-1 part, degree >= 2 part)."""
    if not a.in_augmentation():
        raise ValueError("element has a constant term")
    lin = {e: c for e, c in a.coeffs.items() if sum(e) == 1}
    tail = {e: c for e, c in a.coeffs.items() if sum(e) >= 2}
    return AlgElem(a.algebra, lin), AlgElem(a.algebra, tail)
