"""Exact arithmetic in GF(p) and GF(p^m).

Elements are encoded as integers ``code = sum(c_k * p**k)`` where ``c_k`` are
the coefficients of the residue polynomial in the generator ``alpha`` of the
field.  Scalar arithmetic works on these codes (with log/Zech tables for small
fields).  Bulk arithmetic uses *digit arrays*: integer arrays whose last axis
has length ``m`` and holds the residue coefficients.
"""

from __future__ import annotations

import itertools
import math
from functools import cached_property, lru_cache

import numpy as np
import sympy

TABLE_LIMIT = 1 << 21


# ---------------------------------------------------------------------------
# polynomials over F_p as lists of ints, low degree first


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(_ptrim(a)) - 1 >= df:
        shift = len(a) - 1 - df
        c = a[-1] * inv_lead % p
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _ptrim(_pmod(a, b, p))
    return a


def _ppowmod(base, e, f, p):
    result = [1]
    base = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def is_irreducible(f, p):
    """Irreducibility of a monic polynomial over F_p (no root, then gcd tests)."""
    m = len(f) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    for r in range(p):
        if sum(c * pow(r, k, p) for k, c in enumerate(f)) % p == 0:
            return False
    xpow = [0, 1]
    for _ in range(1, m // 2 + 1):
        xpow = _ppowmod(xpow, p, f, p)
        diff = list(xpow) + [0] * max(0, 2 - len(xpow))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p, m):
    """Lexicographically smallest monic irreducible of degree m, low degree first."""
    if m == 1:
        return (0, 1)
    # a zero constant term means divisibility by x, so start at c0 = 1
    for coeffs in itertools.product(range(1, p), *[range(p)] * (m - 1)):
        f = list(coeffs) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


@lru_cache(maxsize=None)
def _factor(n):
    return dict(sorted(sympy.factorint(n).items()))


def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


# ---------------------------------------------------------------------------


class Field:
    """GF(p^m) with a deterministic modulus."""

    _cache: dict = {}

    def __new__(cls, p, m=1):
        key = (p, m)
        if key in cls._cache:
            return cls._cache[key]
        self = super().__new__(cls)
        self._init(p, m)
        cls._cache[key] = self
        return self

    def __getnewargs__(self):
        return (self.p, self.m)

    def _init(self, p, m):
        if p < 3 or not sympy.isprime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.p, self.m = p, m
        self.q = p**m
        self.modulus = smallest_irreducible(p, m)
        if not is_irreducible(list(self.modulus), p):
            raise AssertionError("modulus is reducible")
        self._pw = [p**k for k in range(m)]
        # digits of alpha^k for k < 2m - 1, used for reduction
        red = []
        cur = [0] * m
        cur[0] = 1
        for k in range(2 * m - 1):
            red.append(list(cur))
            cur = self._times_alpha(cur)
        self._alpha_pows = np.array(red, dtype=np.int64)
        self._tables = self.q <= TABLE_LIMIT
        if self._tables:
            self._build_tables()

    # -- representation --------------------------------------------------

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def describe(self):
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def digits(self, a):
        p = self.p
        out = []
        for _ in range(self.m):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, ds):
        return sum(int(c) % self.p * w for c, w in zip(ds, self._pw))

    def elem(self, x):
        """Coerce an int (into F_p) or Scalar to a code."""
        if isinstance(x, Scalar):
            if x.field is not self:
                raise ValueError("scalar from a different field")
            return x.code
        if isinstance(x, (int, np.integer)):
            return int(x) % self.p
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def __call__(self, x):
        return Scalar(self, self.elem(x))

    def from_code(self, code):
        if not 0 <= code < self.q:
            raise ValueError("code out of range")
        return Scalar(self, int(code))

    @property
    def zero(self):
        return Scalar(self, 0)

    @property
    def one(self):
        return Scalar(self, 1)

    @cached_property
    def alpha(self):
        return Scalar(self, self.p if self.m > 1 else (-self.modulus[0]) % self.p)

    def fmt(self, a):
        """Residue-polynomial string of a code, e.g. '2+a^3'."""
        if a < self.p:
            return str(a)
        terms = []
        for k, c in enumerate(self.digits(a)):
            if c:
                mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
                if k == 0:
                    terms.append(str(c))
                else:
                    terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms)

    def parse(self, s):
        s = s.strip().replace(" ", "")
        if "a" not in s:
            return int(s) % self.p
        ds = [0] * self.m
        for term in s.split("+"):
            if "a" not in term:
                ds[0] = (ds[0] + int(term)) % self.p
                continue
            c, _, e = term.partition("a")
            c = int(c) if c else 1
            e = int(e[1:]) if e else 1
            if e >= self.m:
                raise ValueError(f"exponent {e} out of range in {s!r}")
            ds[e] = (ds[e] + c) % self.p
        return self.from_digits(ds)

    # -- polynomial-path internals -----------------------------------------

    def _times_alpha(self, ds):
        m, p, f = self.m, self.p, self.modulus
        if m == 1:
            return [ds[0] * (-f[0]) % p]
        top = ds[-1]
        out = [0] + ds[:-1]
        if top:
            out = [(o - top * c) % p for o, c in zip(out, f[:m])]
        return out

    def _poly_mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        p, m = self.p, self.m
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] += x * y
        if m == 1:
            return prod[0] % p
        acc = np.array(prod, dtype=np.int64) % p
        res = (acc[:m] + acc[m:] @ self._alpha_pows[m:]) % p
        return self.from_digits(res.tolist())

    def _build_tables(self):
        q, p, m = self.q, self.p, self.m
        g = self._find_primitive_poly()
        n = q - 1
        gm = self.mul_matrix(g)
        block = min(n, max(1, int(math.isqrt(n)) + 1))
        head = np.zeros((block, m), dtype=np.int64)
        cur = np.zeros(m, dtype=np.int64)
        cur[0] = 1
        for k in range(block):
            head[k] = cur
            cur = cur @ gm % p
        step = _fp_matpow(gm, block, p)
        chunks = []
        mat = np.eye(m, dtype=np.int64)
        for _ in range((n + block - 1) // block):
            chunks.append(head @ mat % p)
            mat = mat @ step % p
        digits = np.concatenate(chunks)[:n]
        pw = np.array(self._pw, dtype=np.int64)
        exp = digits @ pw
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(n)
        # Zech logarithms: zech[k] = log(1 + g^k)
        one_plus = digits.copy()
        one_plus[:, 0] = (one_plus[:, 0] + 1) % p
        zech = log[one_plus @ pw]
        self._exp = exp.tolist()
        self._log = log.tolist()
        self._zech = zech.tolist()
        self._exp_np = exp
        self._log_np = log
        self._gen = g

    def _find_primitive_poly(self):
        n = self.q - 1
        primes = list(_factor(n)) if n > 1 else []
        for g in range(1, self.q):
            if all(self._pow_poly(g, n // l) != 1 for l in primes):
                return g
        raise AssertionError("no primitive element")

    def _pow_poly(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._poly_mul(result, a)
            a = self._poly_mul(a, a)
            e >>= 1
        return result

    # -- scalar arithmetic on codes -----------------------------------------

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        if self.m == 1:
            return (a + b) % self.p
        if self._tables:
            la, lb = self._log[a], self._log[b]
            n = self.q - 1
            z = self._zech[(lb - la) % n]
            return 0 if z < 0 else self._exp[(la + z) % n]
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if a == 0:
            return 0
        if self.m == 1:
            return self.p - a
        return self.from_digits([(-x) % self.p for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        if self._tables:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._poly_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        if self._tables:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.m == 1:
            return pow(a, e, self.p)
        if self._tables:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._pow_poly(a, e % (self.q - 1) if e else 0)

    def frob(self, a, k=1):
        """a^(p^k)."""
        return self.pow(a, self.p ** (k % self.m))

    def inv_frob(self, a):
        return self.frob(a, self.m - 1)

    def in_prime_field(self, a):
        return a < self.p

    # -- group structure ---------------------------------------------------

    @cached_property
    def order_factors(self):
        return _factor(self.q - 1) if self.q > 2 else {}

    @cached_property
    def generator(self):
        """Smallest code of a primitive element."""
        if self._tables:
            return self._gen
        return self._find_primitive_poly()

    def element_order(self, a):
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        order = n
        for l, e in self.order_factors.items():
            for _ in range(e):
                if self.pow(a, order // l) == 1:
                    order //= l
                else:
                    break
        return order

    def mu(self, n):
        """All x with x^n = 1, in increasing discrete-log order."""
        d = math.gcd(n, self.q - 1)
        zeta = self.pow(self.generator, (self.q - 1) // d)
        out, cur = [], 1
        for _ in range(d):
            out.append(cur)
            cur = self.mul(cur, zeta)
        return out

    def is_nth_power(self, c, n):
        if c == 0:
            return True
        d = math.gcd(n, self.q - 1)
        return self.pow(c, (self.q - 1) // d) == 1

    def _sylow_dlog(self, h, order_primes, c):
        """Discrete log of c base h inside the cyclic group <h> of smooth order."""
        n = 1
        for l, e in order_primes.items():
            n *= l**e
        residues, moduli = [], []
        for l, e in order_primes.items():
            le = l**e
            hl = self.pow(h, n // le)  # order l^e
            cl = self.pow(c, n // le)
            gamma = self.pow(hl, l ** (e - 1))  # order l
            x = 0
            for k in range(e):
                hk = self.pow(self.mul(self.pow(hl, -x), cl), l ** (e - 1 - k))
                dk = self._bsgs(gamma, hk, l)
                if dk is None:
                    return None
                x += dk * l**k
            residues.append(x)
            moduli.append(le)
        return int(sympy.ntheory.modular.crt(moduli, residues)[0]) if moduli else 0

    def _bsgs(self, g, h, n):
        s = math.isqrt(n) + 1
        table, cur = {}, 1
        for j in range(s):
            table.setdefault(cur, j)
            cur = self.mul(cur, g)
        factor = self.inv(self.pow(g, s))
        gamma = h
        for i in range(s + 1):
            if gamma in table:
                return (i * s + table[gamma]) % n
            gamma = self.mul(gamma, factor)
        return None

    def solve_power(self, n, c):
        """All x with x^n = c (sorted codes)."""
        if c == 0:
            if n <= 0:
                raise ValueError("x^n = 0 has no solution for n <= 0")
            return [0]
        if n == 0:
            return list(range(1, self.q)) if c == 1 else []
        if n < 0:
            return sorted(self.inv(x) for x in self.solve_power(-n, c))
        N = self.q - 1
        d, u, _ = _ext_gcd(n, N)
        if self.pow(c, N // d) != 1:
            return []
        target = self.pow(c, u % N)
        root = self._dth_root(target, d)
        sols = sorted(self.mul(root, z) for z in self.mu(d))
        assert all(self.pow(x, n) == c for x in sols[:3])
        return sols

    def _dth_root(self, c, d):
        """One solution of x^d = c for d | q-1 (c assumed a d-th power)."""
        if d == 1:
            return c
        N = self.q - 1
        sylow = {l: e for l, e in self.order_factors.items() if d % l == 0}
        dp = 1
        for l, e in sylow.items():
            dp *= l**e
        t = N // dp
        _, a, b = _ext_gcd(dp, t)  # a*dp + b*t = 1
        c_t = self.pow(c, (a * dp) % N)
        c_s = self.pow(c, (b * t) % N)
        r_t = self.pow(c_t, pow(d, -1, t)) if t > 1 else 1
        h = self.pow(self.generator, t)
        k = self._sylow_dlog(h, sylow, c_s)
        if k is None or k % d:
            raise ValueError("element is not a d-th power")
        r_s = self.pow(h, k // d)
        return self.mul(r_s, r_t)

    def nth_root(self, c, n):
        sols = self.solve_power(n, c)
        return sols[0] if sols else None

    # -- digit arrays -------------------------------------------------------

    def encode(self, codes):
        """Int array of codes -> digit array (..., m)."""
        codes = np.asarray(codes, dtype=object if self.q > 1 << 62 else np.int64)
        if codes.dtype == object:
            flat = [self.digits(int(c)) for c in codes.ravel()]
            return np.array(flat, dtype=np.int64).reshape(codes.shape + (self.m,))
        pw = np.array(self._pw, dtype=np.int64)
        return (codes[..., None] // pw) % self.p

    def decode(self, arr):
        """Digit array (..., m) -> int array of codes (object array for huge q)."""
        arr = np.asarray(arr, dtype=np.int64)
        if self.q > 1 << 62:
            flat = arr.reshape(-1, self.m)
            out = np.empty(flat.shape[0], dtype=object)
            for i, row in enumerate(flat):
                out[i] = self.from_digits(row.tolist())
            return out.reshape(arr.shape[:-1])
        return (arr % self.p) @ np.array(self._pw, dtype=np.int64)

    def zeros(self, shape):
        if isinstance(shape, int):
            shape = (shape,)
        return np.zeros(tuple(shape) + (self.m,), dtype=np.int64)

    def mul_matrix(self, a):
        """F_p matrix S with digits(alpha^k * a) as row k, so digits(x*a) = digits(x) @ S."""
        ds = self.digits(a)
        rows = []
        for _ in range(self.m):
            rows.append(ds)
            ds = self._times_alpha(ds)
        return np.array(rows, dtype=np.int64)

    @cached_property
    def frob_matrix(self):
        return np.array([self.digits(self.frob(self._alpha_code_pow(k))) for k in range(self.m)], dtype=np.int64)

    @cached_property
    def inv_frob_matrix(self):
        return np.array([self.digits(self.inv_frob(self._alpha_code_pow(k))) for k in range(self.m)], dtype=np.int64)

    def _alpha_code_pow(self, k):
        return self.from_digits(self._alpha_pows[k].tolist())

    def vfrob(self, arr, k=1):
        mat = self.frob_matrix if k == 1 else None
        if mat is None:
            mat = _fp_matpow(self.frob_matrix, k % self.m, self.p)
        return np.asarray(arr, dtype=np.int64) @ mat % self.p

    def vinv_frob(self, arr):
        return np.asarray(arr, dtype=np.int64) @ self.inv_frob_matrix % self.p

    @cached_property
    def _alpha_cat(self):
        """(m, m*m) F_p matrix: digits(b) @ it gives digits(alpha^k b) for every k."""
        mats = [self.mul_matrix(self._alpha_code_pow(k)) for k in range(self.m)]
        return np.concatenate(mats, axis=1)

    def shifts(self, b):
        """Stack of alpha^k * b for k < m: shape (m, ..., m)."""
        b = np.asarray(b, dtype=np.int64) % self.p
        flat = b.reshape(-1, self.m)
        out = _fp_matmul(flat, self._alpha_cat, self.p).reshape(b.shape[:-1] + (self.m, self.m))
        return np.moveaxis(out, -2, 0)

    def prepare_right(self, B):
        """Expand a (T, J, m) right operand into the F_p matrix used by matmul."""
        B = np.asarray(B, dtype=np.int64)
        T, J, m = B.shape
        if m == 1:
            return B[..., 0] % self.p
        X = _fp_matmul(B.reshape(T * J, m) % self.p, self._alpha_cat, self.p)  # (T*J, k*l)
        return X.reshape(T, J, m, m).transpose(0, 2, 1, 3).reshape(T * m, J * m)

    def matmul_prepared(self, A, Bp):
        A = np.asarray(A, dtype=np.int64)
        I, T, m = A.shape
        if m == 1:
            return _fp_matmul(A[..., 0], Bp, self.p)[..., None]
        J = Bp.shape[1] // m
        return _fp_matmul(A.reshape(I, T * m), Bp, self.p).reshape(I, J, m)

    def vmul(self, a, b):
        """Elementwise product of digit arrays (broadcasting)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a * b % self.p
        a, b = np.broadcast_arrays(a, b)
        sh = self.shifts(b)  # (m, ..., m)
        res = np.einsum("...k,k...j->...j", a, sh)
        return res % self.p

    def vscale(self, arr, c):
        """Multiply every element of a digit array by the scalar code c."""
        if self.m == 1 or c < self.p:
            return np.asarray(arr, dtype=np.int64) * c % self.p
        return np.asarray(arr, dtype=np.int64) @ self.mul_matrix(c) % self.p

    def matmul(self, A, B):
        """Matrix product of digit arrays A (I,T,m) and B (T,J,m)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError("dimension mismatch")
        I, T, m = A.shape
        if m == 1 or not B[..., 1:].any():
            # F_p-rational right factor: act on each digit plane
            out = _fp_matmul(A.transpose(0, 2, 1).reshape(I * m, T), B[..., 0] % self.p, self.p)
            return out.reshape(I, m, -1).transpose(0, 2, 1)
        return self.matmul_prepared(A, self.prepare_right(B))

    def lift(self, A):
        """F_p integer matrix -> digit array."""
        A = np.asarray(A, dtype=np.int64) % self.p
        out = np.zeros(A.shape + (self.m,), dtype=np.int64)
        out[..., 0] = A
        return out

    def is_prime_rational(self, arr):
        arr = np.asarray(arr)
        return not arr[..., 1:].any()

    # -- linear algebra over GF(q) on digit arrays --------------------------

    def rref(self, A):
        """Reduced row echelon form. Returns (R, pivot columns)."""
        full = np.array(A, dtype=np.int64) % self.p
        nrows = full.shape[0]
        R = full[full.reshape(nrows, -1).any(axis=1)]  # zero rows never matter
        rows, cols = R.shape[:2]
        pivots = []
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            nz = np.nonzero(R[r:, c].any(axis=-1))[0]
            if nz.size == 0:
                continue
            piv = r + nz[0]
            if piv != r:
                R[[r, piv]] = R[[piv, r]]
            pc = self.decode(R[r, c])
            R[r] = self.vscale(R[r], self.inv(int(pc)))
            factors = R[:, c].copy()
            factors[r] = 0
            hit = np.nonzero(factors.any(axis=-1))[0]
            if hit.size:
                R[hit] = (R[hit] - self.vmul(factors[hit][:, None, :], R[r][None, :, :])) % self.p
            pivots.append(c)
            r += 1
        out = np.zeros_like(full)
        out[: R.shape[0]] = R
        return out, pivots

    def rank(self, A):
        A = np.asarray(A)
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def nullspace(self, A):
        """Basis (rows) of {x : A x = 0}."""
        A = np.asarray(A, dtype=np.int64)
        n = A.shape[1]
        if A.shape[0] == 0:
            return self.lift(np.eye(n, dtype=np.int64))
        R, piv = self.rref(A)
        free = [c for c in range(n) if c not in piv]
        basis = self.zeros((len(free), n))
        for i, f in enumerate(free):
            basis[i, f, 0] = 1
            for r, pc in enumerate(piv):
                basis[i, pc] = (-R[r, f]) % self.p
        return basis

    def solve(self, A, b):
        """One solution x of A x = b (b: (rows,) or (rows,k) digit array), or None."""
        A = np.asarray(A, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        vec = b.ndim == 2
        if vec:
            b = b[:, None, :]
        n = A.shape[1]
        k = b.shape[1]
        aug = np.concatenate([A, b], axis=1)
        R, piv = self.rref(aug)
        if any(c >= n for c in piv):
            return None
        x = self.zeros((n, k))
        for r, pc in enumerate(piv):
            x[pc] = R[r, n:]
        return x[:, 0] if vec else x


class Scalar:
    """Immutable element of a Field."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", code)

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    def _c(self, other):
        return self.field.elem(other)

    def __add__(self, o):
        return Scalar(self.field, self.field.add(self.code, self._c(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return Scalar(self.field, self.field.sub(self.code, self._c(o)))

    def __rsub__(self, o):
        return Scalar(self.field, self.field.sub(self._c(o), self.code))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.code))

    def __mul__(self, o):
        return Scalar(self.field, self.field.mul(self.code, self._c(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Scalar(self.field, self.field.div(self.code, self._c(o)))

    def __rtruediv__(self, o):
        return Scalar(self.field, self.field.div(self._c(o), self.code))

    def __pow__(self, e):
        return Scalar(self.field, self.field.pow(self.code, e))

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.code))

    def frobenius(self, k=1):
        return Scalar(self.field, self.field.frob(self.code, k))

    def inv_frobenius(self):
        return Scalar(self.field, self.field.inv_frob(self.code))

    def __eq__(self, o):
        if isinstance(o, Scalar):
            return self.field is o.field and self.code == o.code
        if isinstance(o, int):
            return self.code == o % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"Scalar({self.field.fmt(self.code)})"

    def __str__(self):
        return self.field.fmt(self.code)

    @property
    def coeffs(self):
        return tuple(self.field.digits(self.code))


def frobenius(a: Scalar) -> Scalar:
    return a.frobenius()


def inv_frobenius(a: Scalar) -> Scalar:
    return a.inv_frobenius()


def mu_n(field: Field, n: int) -> set:
    return {Scalar(field, c) for c in field.mu(n)}


def solve_power(n: int, c: Scalar) -> set:
    return {Scalar(c.field, x) for x in c.field.solve_power(n, c.code)}


# ---------------------------------------------------------------------------
# linear algebra over F_p on plain integer matrices


def _fp_matmul(A, B, p):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < 1 << 52:
        return (A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
    return (A @ B) % p


def fp_matmul(A, B, p):
    return _fp_matmul(A, B, p)


def _fp_matpow(M, e, p):
    R = np.eye(M.shape[0], dtype=np.int64)
    B = np.asarray(M, dtype=np.int64) % p
    while e:
        if e & 1:
            R = R @ B % p
        B = B @ B % p
        e >>= 1
    return R


fp_matpow = _fp_matpow


def fp_rref(A, p):
    """RREF over F_p. Returns (R, pivot columns)."""
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def fp_rank(A, p):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(fp_rref(A, p)[1])


def fp_nullspace(A, p):
    """Rows spanning {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = fp_rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = (-R[r, f]) % p
    return basis


def fp_solve(A, B, p):
    """Solve A X = B over F_p with free variables set to 0; None if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    n = A.shape[1]
    R, piv = fp_rref(np.concatenate([A, B], axis=1), p)
    if any(c >= n for c in piv):
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for r, pc in enumerate(piv):
        X[pc] = R[r, n:]
    return X[:, 0] if vec else X


class FpSolver:
    """Reusable factorization of an F_p matrix for repeated solves A x = b."""

    def __init__(self, A, p):
        A = np.asarray(A, dtype=np.int64) % p
        self.p = p
        self.shape = A.shape
        rows, n = A.shape
        aug = np.concatenate([A, np.eye(rows, dtype=np.int64)], axis=1)
        R, piv = fp_rref(aug, p)
        self.pivots = [c for c in piv if c < n]
        r = len(self.pivots)
        self.rank = r
        self.T = R[:, n:]  # T @ A = rref(A)
        self.top = self.T[:r]
        self.bottom = self.T[r:]  # left kernel rows: consistency checks

    def solve(self, B):
        """Columns of B -> solution columns (free vars 0) or None if any column fails."""
        B = np.asarray(B, dtype=np.int64)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        p = self.p
        if self.bottom.shape[0] and _fp_matmul(self.bottom, B, p).any():
            return None
        Y = _fp_matmul(self.top, B, p)
        X = np.zeros((self.shape[1], B.shape[1]), dtype=np.int64)
        X[self.pivots] = Y
        return X[:, 0] if vec else X

    def consistent(self, B):
        B = np.asarray(B, dtype=np.int64)
        if B.ndim == 1:
            B = B[:, None]
        if not self.bottom.shape[0]:
            return np.ones(B.shape[1], dtype=bool)
        return ~_fp_matmul(self.bottom, B, self.p).any(axis=0)
