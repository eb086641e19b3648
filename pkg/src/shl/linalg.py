"""Exact rational linear algebra over numpy object arrays.

All public functions accept numpy arrays (dtype=object) whose entries are
Fraction, int, or gmpy2.mpq, and return Fraction-valued object arrays.
Row reduction runs on gmpy2.mpq internally (much faster than Fraction).
Large integer matrix products go through a CRT/float64 path so they cost
O(k) BLAS multiplies instead of O(dim^3) Python-level operations.
"""

from fractions import Fraction
import math

import numpy as np
from gmpy2 import mpq

__all__ = [
    "frac_array", "int_array", "scale_to_int", "rref", "rank", "nullspace",
    "solve", "inv", "int_matmul", "rank_mod_p", "ColumnSpace",
]


def frac_array(a):
    """Copy `a` into an object array with Fraction entries."""
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    flat_in, flat_out = a.reshape(-1), out.reshape(-1)
    for i, v in enumerate(flat_in):
        if type(v) is Fraction:
            flat_out[i] = v
        elif isinstance(v, (int, np.integer)):
            # force python-int internals (Fraction(np.int64) keeps numpy
            # scalars inside, which overflow silently)
            flat_out[i] = Fraction(int(v))
        else:
            flat_out[i] = Fraction(v)
    return out


def int_array(a):
    """Copy `a` into an object array of python ints; entries must be integral."""
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    flat_in, flat_out = a.reshape(-1), out.reshape(-1)
    for i, v in enumerate(flat_in):
        iv = int(v)
        if iv != v:
            raise ValueError("non-integer entry %r" % (v,))
        flat_out[i] = iv
    return out


def scale_to_int(a):
    """Return (m, d) with m an integer object array and a = m / d exactly."""
    a = np.asarray(a, dtype=object)
    d = 1
    for v in a.reshape(-1):
        q = int(Fraction(v).denominator)
        if d % q:
            d = d * (q // math.gcd(d, q))
    out = np.empty(a.shape, dtype=object)
    flat_in, flat_out = a.reshape(-1), out.reshape(-1)
    for i, v in enumerate(flat_in):
        f = Fraction(v)
        flat_out[i] = int(f.numerator) * (d // int(f.denominator))
    return out, d


def _to_mpq(v):
    if isinstance(v, Fraction):
        # mpq() rejects Fractions whose internals are foreign int types
        return mpq(int(v.numerator), int(v.denominator))
    return mpq(v)


def _to_mpq_rows(a):
    a = np.asarray(a, dtype=object)
    return [[_to_mpq(v) for v in row] for row in a]


def _from_mpq(rows, shape):
    out = np.empty(shape, dtype=object)
    flat = out.reshape(-1)
    i = 0
    for row in rows:
        for v in row:
            flat[i] = Fraction(int(v.numerator), int(v.denominator))
            i += 1
    return out


def _rref_mpq(m):
    """In-place reduced row echelon form on a list of mpq lists."""
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pr = None
        for i in range(r, n_rows):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        p = m[r][c]
        if p != 1:
            row = m[r]
            for j in range(c, n_cols):
                if row[j]:
                    row[j] /= p
        for i in range(n_rows):
            if i != r and m[i][c]:
                f = m[i][c]
                ri, rr = m[i], m[r]
                for j in range(c, n_cols):
                    if rr[j]:
                        ri[j] -= f * rr[j]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return pivots


def rref(a):
    """Reduced row echelon form; returns (R, pivot column list)."""
    a = np.asarray(a, dtype=object)
    m = _to_mpq_rows(a)
    pivots = _rref_mpq(m)
    return _from_mpq(m, a.shape), pivots


def rank(a):
    return len(rref(a)[1])


def nullspace(a):
    """Basis of the right kernel, as columns of the returned array."""
    a = np.asarray(a, dtype=object)
    n_cols = a.shape[1]
    r, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((n_cols, len(free)), dtype=object)
    basis[...] = Fraction(0)
    for k, fc in enumerate(free):
        basis[fc, k] = Fraction(1)
        for i, pc in enumerate(pivots):
            basis[pc, k] = -Fraction(r[i, fc])
    return basis


def solve(a, b):
    """One exact solution of a @ x = b, or None if inconsistent."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    aug = np.concatenate([a, b.reshape(a.shape[0], -1)], axis=1)
    r, pivots = rref(aug)
    n_cols = a.shape[1]
    if any(p >= n_cols for p in pivots):
        return None
    width = aug.shape[1] - n_cols
    x = np.zeros((n_cols, width), dtype=object)
    x[...] = Fraction(0)
    for i, pc in enumerate(pivots):
        x[pc, :] = r[i, n_cols:]
    return x if b.ndim > 1 else x[:, 0]


def inv(a):
    a = np.asarray(a, dtype=object)
    n = a.shape[0]
    eye = np.zeros((n, n), dtype=object)
    eye[...] = Fraction(0)
    for i in range(n):
        eye[i, i] = Fraction(1)
    x = solve(a, eye)
    if x is None or rank(a) < n:
        raise ValueError("singular matrix")
    return x


_PRIMES = None


def _primes():
    global _PRIMES
    if _PRIMES is None:
        ps, c = [], (1 << 20)
        while len(ps) < 64:
            c += 1
            for p in ps:
                if c % p == 0:
                    break
            else:
                k, isp = 2, True
                while k * k <= c:
                    if c % k == 0:
                        isp = False
                        break
                    k += 1
                if isp:
                    ps.append(c)
        _PRIMES = ps
    return _PRIMES


def int_matmul(a, b):
    """Exact product of integer matrices via CRT over float64 matmuls.

    Entries may be arbitrary-size python ints; the result is an object
    array of python ints.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    inner = a.shape[-1]
    ma = max((abs(int(v)) for v in np.asarray(a, dtype=object).reshape(-1)), default=0)
    mb = max((abs(int(v)) for v in np.asarray(b, dtype=object).reshape(-1)), default=0)
    bound = 2 * inner * ma * mb + 1
    if ma < (1 << 20) and mb < (1 << 20) and bound < (1 << 52):
        af = np.asarray(a, dtype=object).astype(np.float64)
        bf = np.asarray(b, dtype=object).astype(np.float64)
        return np.rint(af @ bf).astype(np.int64).astype(object)
    primes, acc = [], 1
    for p in _primes():
        primes.append(p)
        acc *= p
        if acc > bound:
            break
    else:
        raise ValueError("matrix entries too large for the CRT prime pool")
    ao = np.asarray(a, dtype=object)
    bo = np.asarray(b, dtype=object)
    residues = []
    for p in primes:
        ap = (ao % p).astype(np.float64)
        bp = (bo % p).astype(np.float64)
        # entries < 2^20 and inner dim < 2^12 keeps every partial sum < 2^53
        if inner * (p - 1) * (p - 1) >= (1 << 53):
            raise ValueError("inner dimension too large for the float64 CRT path")
        residues.append(np.rint(ap @ bp).astype(np.int64) % p)
    m = 1
    for p in primes:
        m *= p
    out = np.zeros(residues[0].shape, dtype=object)
    for p, r in zip(primes, residues):
        mi = m // p
        out += r.astype(object) * (mi * pow(mi, -1, p))
    out %= m
    half = m // 2
    big = out > half
    out[big] -= m
    return out


def rank_mod_p(a, p=2147483629):
    """Rank of an integer matrix modulo a prime (a certified lower bound
    on the rational rank; equality is certain when it hits a known upper
    bound such as full size or dim - exhibited kernel)."""
    a = np.asarray(a, dtype=object)
    m = (a % p).astype(np.int64)
    n_rows, n_cols = m.shape
    r = 0
    for c in range(n_cols):
        pr = None
        for i in range(r, n_rows):
            if m[i, c] % p:
                pr = i
                break
        if pr is None:
            continue
        m[[r, pr]] = m[[pr, r]]
        inv_p = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv_p) % p
        col = m[r + 1:, c].copy()
        if col.any():
            m[r + 1:] = (m[r + 1:] - np.outer(col, m[r]) % p) % p
        r += 1
        if r == n_rows:
            break
    return r


class ColumnSpace:
    """Echelonized column space of a rational matrix, supporting exact
    membership tests and canonical reduction modulo the space."""

    def __init__(self, a):
        a = np.asarray(a, dtype=object)
        self.ambient_dim = a.shape[0]
        rows = _to_mpq_rows(a.T)
        _rref_mpq(rows)
        self.rows = []      # echelon rows (mpq lists), leading entry 1
        self.leads = []     # leading-coordinate index per row
        for row in rows:
            for j, v in enumerate(row):
                if v:
                    self.rows.append(row)
                    self.leads.append(j)
                    break

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        """Canonical representative of v modulo the column space."""
        w = [_to_mpq(x) for x in np.asarray(v, dtype=object)]
        for row, lead in zip(self.rows, self.leads):
            f = w[lead]
            if f:
                for j in range(lead, len(w)):
                    if row[j]:
                        w[j] -= f * row[j]
        return np.array([Fraction(int(x.numerator), int(x.denominator))
                         for x in w], dtype=object)

    def contains(self, v):
        return not any(self.reduce(v))

    def coordinates(self, v):
        """Coefficients of v on the echelon rows, or None if v is outside."""
        w = [_to_mpq(x) for x in np.asarray(v, dtype=object)]
        coeffs = []
        for row, lead in zip(self.rows, self.leads):
            f = w[lead]
            coeffs.append(Fraction(int(f.numerator), int(f.denominator)))
            if f:
                for j in range(lead, len(w)):
                    if row[j]:
                        w[j] -= f * row[j]
        if any(w):
            return None
        return np.array(coeffs, dtype=object)
