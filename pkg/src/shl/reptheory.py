"""Lie algebra bases, tensor-module actions, Casimir operators, the
intrinsic-torsion quotient, isotypic projectors, and the type classifier.

The classifier works on the compacted space W = Lambda^2 V* (x) V.  A
torsion class component is zero precisely when its joint Casimir
eigenprojection lands inside the image of the Spencer differential, so
no explicit quotient bases are needed for verdicts.  Components that
share a joint eigenvalue (the two vector-type components for the
hypercomplex-compatible kind, and the low-dimension coincidences at
n = 2) are split through the 3-form side: the cyclic contraction of the
torsion against omega0 detects one copy canonically.
"""

from fractions import Fraction
import hashlib
import json
import math
import os
import pickle

import numpy as np
import sympy

from . import linalg, tensors

__all__ = ["MatrixAlgebra", "LieModule", "RepTheoryError", "TypeReport",
           "lie_algebra_basis", "module_action", "casimir_operator",
           "intrinsic_quotient", "isotypic_decomposition", "classify_torsion",
           "get_calibration"]

_QUAT = {  # quaternion multiplication table on units 1,i,j,k: (sign, unit)
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


class RepTheoryError(ValueError):
    pass


class MatrixAlgebra:
    def __init__(self, kind, n, basis):
        self.kind = kind
        self.n = n
        self.basis = list(basis)

    @property
    def dim(self):
        return len(self.basis)


_EXPECTED_DIM = {
    "so_star": lambda n: n * (2 * n - 1),
    "sp1": lambda n: 3,
    "gl_nH": lambda n: 4 * n * n,
    "sp_omega": lambda n: 2 * n * (4 * n + 1),
    "so_star_plus_sp1": lambda n: n * (2 * n - 1) + 3,
}


def lie_algebra_basis(m, kind):
    """Integer matrix basis of the requested algebra on the model m."""
    n = m.n
    if n < 2:
        raise RepTheoryError("n must be at least 2")
    if kind == "sp1":
        basis = [np.array(J, dtype=np.int64) for J in m.J]
    elif kind == "gl_nH":
        basis = _gl_nh_basis(m)
    elif kind == "so_star":
        basis = _so_star_basis(m)
    elif kind == "sp_omega":
        basis = _sp_omega_basis(m)
    elif kind == "so_star_plus_sp1":
        basis = _so_star_basis(m) + [np.array(J, dtype=np.int64) for J in m.J]
    else:
        raise RepTheoryError("unknown algebra kind %r" % kind)
    alg = MatrixAlgebra(kind, n, basis)
    expected = _EXPECTED_DIM[kind](n)
    if alg.dim != expected:
        raise RepTheoryError("algebra %s has dimension %d, expected %d"
                             % (kind, alg.dim, expected))
    return alg


def _unit_index(m, c, unit):
    # basis slot of (quaternion unit) * v_c, with v_c = e_c for c <= n:
    # 1 -> e_c, i -> e_{c+n}, j -> f_c, k -> f_{c+n}
    n = m.n
    return [c, c + n, 2 * n + c, 3 * n + c][unit]


def _gl_nh_basis(m):
    """Commutant of the triple: right quaternion multiplications against
    the block decomposition V = H^n."""
    n, dim = m.n, m.dim
    basis = []
    for c in range(n):
        for d in range(n):
            for q in range(4):
                mat = np.zeros((dim, dim), dtype=np.int64)
                for h in range(4):
                    sign, unit = _QUAT[(h, q)]
                    mat[_unit_index(m, c, unit), _unit_index(m, d, h)] = sign
                basis.append(mat)
    return basis


def _so_star_basis(m):
    """Elements of gl(n,H) with xi^T omega0 + omega0 xi = 0."""
    glb = _gl_nh_basis(m)
    omega = np.array(m.omega0, dtype=np.int64)
    cols = []
    for b in glb:
        cols.append((b.T @ omega + omega @ b).reshape(-1))
    constraint = np.array(cols, dtype=object).T
    kernel = linalg.nullspace(constraint)
    basis = []
    for k in range(kernel.shape[1]):
        coeffs, den = linalg.scale_to_int(kernel[:, k])
        mat = np.zeros((m.dim, m.dim), dtype=np.int64)
        for c, b in zip(coeffs, glb):
            if c:
                mat += int(c) * b
        basis.append(mat)
    return basis


def _sp_omega_basis(m):
    """omega0^{-1} composed with symmetric forms."""
    dim = m.dim
    omega = np.array(m.omega0, dtype=np.int64)
    omega_inv = -omega  # omega0^2 = -Id in the standard basis
    basis = []
    for u in range(dim):
        for v in range(u, dim):
            s = np.zeros((dim, dim), dtype=np.int64)
            s[u, v] += 1
            s[v, u] += 1
            basis.append(omega_inv @ s)
    return basis


# ---------------------------------------------------------------------
# generic tensor-module actions
# ---------------------------------------------------------------------

class LieModule:
    """Action of a matrix algebra on a dense tensor space."""

    def __init__(self, alg, valences, dim):
        if len(valences) > 5:
            raise RepTheoryError("at most 5 slots supported")
        self.alg = alg
        self.valences = valences
        self.dim = dim

    def act(self, xi, coeffs):
        """Leibniz action of the matrix xi on a coefficient array."""
        coeffs = np.asarray(coeffs)
        k = coeffs.ndim
        labels = "abcde"[:k]
        out = None
        for i, val in enumerate(self.valences):
            src = labels[:i] + "m" + labels[i + 1:]
            if val == "d":
                spec = "m%s,%s->%s" % (labels[i], src, labels)
                term = -tensors.exact_einsum(spec, xi, coeffs)
            else:
                spec = "%sm,%s->%s" % (labels[i], src, labels)
                term = tensors.exact_einsum(spec, xi, coeffs)
            out = term if out is None else out + term
        return out

    def action_matrix(self, xi):
        size = self.dim ** len(self.valences)
        if size > 4096:
            raise RepTheoryError("tensor space too large to materialize")
        shape = (self.dim,) * len(self.valences)
        eye = np.eye(size, dtype=np.int64)
        out = np.empty((size, size), dtype=object)
        for col in range(size):
            out[:, col] = np.asarray(
                self.act(xi, eye[:, col].reshape(shape)),
                dtype=object).reshape(-1)
        return out


def module_action(alg, valences, dim):
    return LieModule(alg, valences, dim)


def trace_form_dual(basis):
    """Dual basis with respect to B(xi, eta) = Tr(xi eta)."""
    k = len(basis)
    gram = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            gram[i, j] = Fraction(int(np.trace(
                linalg.int_matmul(basis[i], basis[j]))))
    ginv = linalg.inv(gram)
    duals = []
    for i in range(k):
        acc = np.zeros(basis[0].shape, dtype=object)
        acc[...] = Fraction(0)
        for j in range(k):
            if ginv[i, j]:
                acc = acc + ginv[i, j] * linalg.frac_array(basis[j])
        duals.append(acc)
    return duals


def casimir_operator(alg, mod):
    """Casimir matrix on the materialized module (small spaces only)."""
    duals = trace_form_dual(alg.basis)
    out = None
    for xi, eta in zip(alg.basis, duals):
        rho_xi = mod.action_matrix(xi)
        eta_int, den = linalg.scale_to_int(eta)
        rho_eta = mod.action_matrix(eta_int)
        term = linalg.frac_array(linalg.int_matmul(rho_xi, rho_eta)) \
            * Fraction(1, den)
        out = term if out is None else out + term
    return out


# ---------------------------------------------------------------------
# compact bases for W = Lambda^2 V* (x) V and Lambda^3 V*
# ---------------------------------------------------------------------

class _CompactW:
    def __init__(self, dim):
        self.dim = dim
        self.index = [(i, j, k) for i in range(dim) for j in range(i + 1, dim)
                      for k in range(dim)]
        self.pos = {t: p for p, t in enumerate(self.index)}
        self.size = len(self.index)

    def compress(self, T):
        T = np.asarray(T)
        out = np.empty(self.size, dtype=T.dtype)
        for p, (i, j, k) in enumerate(self.index):
            out[p] = T[i, j, k]
        return out

    def expand(self, v):
        v = np.asarray(v)
        out = np.zeros((self.dim,) * 3, dtype=v.dtype)
        if v.dtype == object:
            out[...] = Fraction(0) if isinstance(v[0], Fraction) else 0
        for p, (i, j, k) in enumerate(self.index):
            out[i, j, k] = v[p]
            out[j, i, k] = -v[p]
        return out

    def action(self, xi):
        """Integer action matrix of xi on the compacted space."""
        xi = np.asarray(xi)
        mat = np.zeros((self.size, self.size), dtype=np.int64)
        dim = self.dim
        for p, (i, j, k) in enumerate(self.index):
            # column p: tensor with T[i,j,k] = 1, T[j,i,k] = -1
            for mm in range(dim):
                if xi[i, mm]:  # first covariant slot
                    a, b, s = mm, j, -int(xi[i, mm])
                    if a != b:
                        if a > b:
                            a, b, s = b, a, -s
                        mat[self.pos[(a, b, k)], p] += s
                if xi[j, mm]:  # second covariant slot
                    a, b, s = i, mm, -int(xi[j, mm])
                    if a != b:
                        if a > b:
                            a, b, s = b, a, -s
                        mat[self.pos[(a, b, k)], p] += s
                if xi[mm, k]:  # contravariant slot
                    mat[self.pos[(i, j, mm)], p] += int(xi[mm, k])
        return mat


class _CompactL3:
    def __init__(self, dim):
        self.dim = dim
        self.index = [(i, j, k) for i in range(dim) for j in range(i + 1, dim)
                      for k in range(j + 1, dim)]
        self.pos = {t: p for p, t in enumerate(self.index)}
        self.size = len(self.index)

    def compress(self, F):
        F = np.asarray(F)
        out = np.empty(self.size, dtype=F.dtype)
        for p, (i, j, k) in enumerate(self.index):
            out[p] = F[i, j, k]
        return out

    def expand(self, v):
        from itertools import permutations
        v = np.asarray(v)
        out = np.zeros((self.dim,) * 3, dtype=v.dtype)
        if v.dtype == object:
            out[...] = Fraction(0) if v.size and isinstance(v[0], Fraction) \
                else 0
        for p, (i, j, k) in enumerate(self.index):
            val = v[p]
            for perm, sign in _PERMS3:
                idx = tuple((i, j, k)[q] for q in perm)
                out[idx] = sign * val
        return out

    def action(self, xi):
        xi = np.asarray(xi)
        mat = np.zeros((self.size, self.size), dtype=np.int64)
        for p, (i, j, k) in enumerate(self.index):
            for mm in range(self.dim):
                for slot, (a, b) in enumerate(((j, k), (i, k), (i, j))):
                    coeff = int(xi[(i, j, k)[slot], mm])
                    if not coeff:
                        continue
                    tri = [mm, a, b] if slot == 0 else \
                          ([a, mm, b] if slot == 1 else [a, b, mm])
                    s = -coeff
                    # sort tri, tracking sign
                    t0, t1, t2 = tri
                    if t0 == t1 or t1 == t2 or t0 == t2:
                        continue
                    if t0 > t1:
                        t0, t1, s = t1, t0, -s
                    if t1 > t2:
                        t1, t2, s = t2, t1, -s
                    if t0 > t1:
                        t0, t1, s = t1, t0, -s
                    mat[self.pos[(t0, t1, t2)], p] += s
        return mat


_PERMS3 = [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
           ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)]


# ---------------------------------------------------------------------
# exact eigen machinery
# ---------------------------------------------------------------------

def _int_matvec(mat, vec):
    return linalg.int_matmul(mat, np.asarray(vec, dtype=object).reshape(-1, 1)
                             ).reshape(-1)


def _annihilator(mat, vec):
    """Monic integer polynomial (low-to-high sympy Poly) annihilating the
    Krylov sequence of vec under mat."""
    x = sympy.Symbol("x")
    vecs = [np.asarray(vec, dtype=object)]
    while True:
        cols = np.array(vecs, dtype=object).T
        target = _int_matvec(mat, vecs[-1])
        sol = linalg.solve(cols, target)
        if sol is not None:
            coeffs = [Fraction(c) for c in sol]
            poly = x ** len(coeffs) - sum(
                sympy.Rational(c.numerator, c.denominator) * x ** i
                for i, c in enumerate(coeffs))
            return sympy.Poly(poly, x)
        vecs.append(target)
        if len(vecs) > mat.shape[0] + 1:
            raise RepTheoryError("Krylov iteration failed to terminate")


def minimal_polynomial_roots(mat, seed=7, trials=3):
    """Certified square-free annihilating polynomial roots of an integer
    matrix with rational spectrum.

    Returns the sorted integer eigenvalue candidates; raises if the
    square-free annihilator has an irrational factor or fails to kill
    the matrix (non-diagonalizable input)."""
    rng = np.random.default_rng(seed)
    size = mat.shape[0]
    poly = None
    for _ in range(trials):
        vec = rng.integers(-9, 10, size=size).astype(object)
        ann = _annihilator(mat, vec)
        poly = ann if poly is None else sympy.lcm(poly, ann)
    x = poly.gen
    poly = sympy.Poly(sympy.quo(poly, sympy.gcd(poly, poly.diff(x))), x)
    roots = []
    for factor, mult in poly.factor_list()[1]:
        if factor.degree() != 1:
            raise RepTheoryError(
                "irrational Casimir eigenvalue factor %s; refusing to label"
                % factor.as_expr())
        a, b = factor.all_coeffs()
        root = Fraction(-int(b), int(a))
        if root.denominator != 1:
            raise RepTheoryError("non-integer eigenvalue of integer matrix")
        roots.append(int(root))
    # verify the square-free polynomial annihilates the matrix exactly
    eye = np.eye(size, dtype=object)
    acc = eye.copy()
    zero = np.zeros((size, size), dtype=object)
    for root in roots:
        acc = linalg.int_matmul(mat, acc) - root * acc
    if not (acc == zero).all():
        raise RepTheoryError("matrix is not annihilated by the square-free "
                             "candidate polynomial (not diagonalizable?)")
    return sorted(roots)


def eigen_projector(mat, root, roots):
    """(integer matrix, rational scale) pair for the eigenprojector of an
    integer matrix with certified simple rational spectrum."""
    size = mat.shape[0]
    num = np.eye(size, dtype=object)
    den = 1
    for other in roots:
        if other == root:
            continue
        num = linalg.int_matmul(mat, num) - other * num
        den *= (root - other)
    return num, Fraction(1, den)


def _apply_factors(mat_roots_pairs, vec):
    """Apply a product of (matrix - root) factors to a vector; returns the
    integer vector and the accumulated denominator 1 (factors integer)."""
    v = np.asarray(vec, dtype=object)
    for mat, root in mat_roots_pairs:
        v = _int_matvec(mat, v) - root * v
    return v


# ---------------------------------------------------------------------
# spencer differential matrices on the compact space
# ---------------------------------------------------------------------

def _delta_columns(cw, alg_basis):
    """Columns of the Spencer differential on V* (x) span(alg_basis),
    in compact W coordinates (integer object array)."""
    dim = cw.dim
    cols = []
    for xi in alg_basis:
        for i in range(dim):
            col = np.zeros(cw.size, dtype=np.int64)
            # A = e_i^* (x) xi;  delta(A)(X,Y) = e_i^*(X) xi Y - e_i^*(Y) xi X
            for j in range(dim):
                if j == i:
                    continue
                for k in range(dim):
                    if xi[k, j]:
                        a, b, s = (i, j, 1) if i < j else (j, i, -1)
                        col[cw.pos[(a, b, k)]] += s * int(xi[k, j])
            cols.append(col)
    return np.array(cols, dtype=np.int64).T.astype(object)


# ---------------------------------------------------------------------
# calibration: everything classify_torsion needs for a (kind, n)
# ---------------------------------------------------------------------

_LEVEL_H, _LEVEL_S3H = "H", "S3H"


class Calibration:
    """Labeled exact eigen-data of the intrinsic-torsion module."""

    def __init__(self, kind, m):
        if kind not in ("hsH", "qsH"):
            raise RepTheoryError("kind must be 'hsH' or 'qsH'")
        self.kind = kind
        self.model = m
        self.n = m.n
        dim = m.dim
        self.cw = _CompactW(dim)
        self.cl3 = _CompactL3(dim)

        so_star = lie_algebra_basis(m, "so_star")
        sp1 = lie_algebra_basis(m, "sp1")
        self.full_basis = so_star.basis + sp1.basis
        self.gauge_basis = so_star.basis if kind == "hsH" else self.full_basis

        # Casimir matrices on the compact spaces, scaled to integers
        self.Cso_W, self.so_scale_W = _casimir_compact(so_star.basis, self.cw)
        self.Csp_W, self.sp_scale_W = _casimir_compact(sp1.basis, self.cw)
        self.Cso_L, self.so_scale_L = _casimir_compact(so_star.basis, self.cl3)
        self.Csp_L, self.sp_scale_L = _casimir_compact(sp1.basis, self.cl3)

        # image of the Spencer differential
        dmat = _delta_columns(self.cw, self.gauge_basis)
        self.delta_matrix = dmat
        self.image = linalg.ColumnSpace(dmat)
        if self.image.dim != dmat.shape[1]:
            raise RepTheoryError("Spencer differential unexpectedly "
                                 "non-injective on the gauge algebra")

        # map to the 3-form side and its right inverse direction
        self.pi_matrix = _pi_omega_matrix(m, self.cw, self.cl3)
        self.raise_matrix = _raise_matrix(m, self.cw, self.cl3)

        self._label()

    # -- labeling -----------------------------------------------------

    def _label(self):
        so_roots_L = minimal_polynomial_roots(self.Cso_L)
        sp_roots_L = minimal_polynomial_roots(self.Csp_L)
        self.so_roots_L = so_roots_L
        self.sp_roots_L = sp_roots_L
        so_roots_W = minimal_polynomial_roots(self.Cso_W, seed=11)
        sp_roots_W = minimal_polynomial_roots(self.Csp_W, seed=13)
        if len(sp_roots_W) != 2 or len(sp_roots_L) != 2:
            raise RepTheoryError("expected exactly two sp(1)-Casimir levels")
        # larger sp(1)-Casimir eigenvalue = S^3 H factor (spin 3/2 vs 1/2)
        self.sp_levels_W = {_LEVEL_S3H: max(sp_roots_W),
                            _LEVEL_H: min(sp_roots_W)}
        self.sp_levels_L = {_LEVEL_S3H: max(sp_roots_L),
                            _LEVEL_H: min(sp_roots_L)}

        # unscaled eigenvalues must agree between the two spaces
        def unscale(r, s):
            return Fraction(r) / s

        # decompose the 3-form space: multiplicity-free with three parts
        n = self.n
        l3_parts = {}
        for sr in so_roots_L:
            for pr in sp_roots_L:
                pj = _joint_projector(self.Cso_L, sr, so_roots_L,
                                      self.Csp_L, pr, sp_roots_L)
                d = _projector_trace(pj)
                if d:
                    l3_parts[(sr, pr)] = (d, pj)
        self.l3_parts_raw = l3_parts
        h_level = self.sp_levels_L[_LEVEL_H]
        s3_level = self.sp_levels_L[_LEVEL_S3H]
        h_parts = {k: v for k, v in l3_parts.items() if k[1] == h_level}
        s3_parts = {k: v for k, v in l3_parts.items() if k[1] == s3_level}
        if len(s3_parts) != 1 or len(h_parts) != 2:
            raise RepTheoryError("unexpected 3-form decomposition %s"
                                 % {k: v[0] for k, v in l3_parts.items()})
        ((l3_key, (l3_dim, l3_proj)),) = s3_parts.items()
        (k1, (d1, p1)), (k2, (d2, p2)) = sorted(h_parts.items(),
                                                key=lambda kv: kv[1][0])
        if d1 == d2:
            raise RepTheoryError("cannot separate the two H-level 3-form "
                                 "components by dimension")
        # smaller one is the vector type [EH], dimension 4n
        if d1 != 4 * n:
            raise RepTheoryError("vector-type 3-form component has dimension "
                                 "%d, expected %d" % (d1, 4 * n))
        self.l3_labels = {"E_H": k1, "K_H": k2, "L3_S3H": l3_key}
        self.l3_projectors = {"E_H": p1, "K_H": p2, "L3_S3H": l3_proj}
        self.l3_dims = {"E_H": d1, "K_H": d2, "L3_S3H": l3_dim}

        # reference so*-eigenvalues, as unscaled rationals
        lam_E = unscale(k1[0], self.so_scale_L)
        lam_K = unscale(k2[0], self.so_scale_L)
        lam_L3 = unscale(l3_key[0], self.so_scale_L)
        if lam_E == lam_K:
            raise RepTheoryError("vector and hook so*-eigenvalues coincide")

        # now label the joint eigenvalues on W by quotient dimension
        rankD = self.image.dim
        labels = {}
        covered = 0
        for sr in so_roots_W:
            for pr in sp_roots_W:
                pj = _joint_projector(self.Cso_W, sr, so_roots_W,
                                      self.Csp_W, pr, sp_roots_W)
                wdim = _projector_trace(pj)
                if not wdim:
                    continue
                pd = linalg.int_matmul(pj[0], self.delta_matrix)
                rk = linalg.rank_mod_p(np.asarray(pd, dtype=object))
                covered += rk
                qdim = wdim - rk
                if qdim == 0:
                    continue
                lam = unscale(sr, self.so_scale_W)
                level = (_LEVEL_S3H if pr == self.sp_levels_W[_LEVEL_S3H]
                         else _LEVEL_H)
                labels[(sr, pr)] = {
                    "so_eig": lam, "level": level, "qdim": qdim,
                    "wdim": wdim,
                }
        if covered != rankD:
            raise RepTheoryError(
                "modular ranks of the projected Spencer image do not add up "
                "(%d vs %d); cannot certify quotient dimensions"
                % (covered, rankD))
        self.so_roots_W = so_roots_W
        self.sp_roots_W = sp_roots_W
        self.joint_info = labels
        self._assign_type_labels(lam_E, lam_K, lam_L3)

    def _assign_type_labels(self, lam_E, lam_K, lam_L3):
        n, kind = self.n, self.kind
        dims = _component_dims(n)
        assignment = {}
        for key, info in self.joint_info.items():
            lam, level, qdim = info["so_eig"], info["level"], info["qdim"]
            if level == _LEVEL_S3H:
                if lam == lam_K and qdim == dims["X1"]:
                    assignment[key] = ("X1",)
                elif n == 2 and lam == lam_L3 == lam_E \
                        and qdim == (dims["X2"] + dims["X6"]
                                     if kind == "hsH" else dims["X2"]):
                    assignment[key] = ("X2", "X6") if kind == "hsH" \
                        else ("X2",)
                elif lam == lam_L3 and qdim == dims["X2"]:
                    assignment[key] = ("X2",)
                elif kind == "hsH" and lam == lam_E and qdim == dims["X6"]:
                    assignment[key] = ("X6",)
                else:
                    raise RepTheoryError(
                        "unlabeled S3H-level component %s" % (info,))
            else:
                if lam == lam_E and qdim == dims["X4"] * \
                        (2 if kind == "hsH" else 1):
                    assignment[key] = ("X4", "X7") if kind == "hsH" \
                        else ("X4",)
                elif lam == lam_K and qdim == dims["X3"]:
                    assignment[key] = ("X3",)
                elif qdim == dims["X5"] and lam not in (lam_E,):
                    assignment[key] = ("X5",)
                else:
                    raise RepTheoryError(
                        "unlabeled H-level component %s" % (info,))
        flat = [x for v in assignment.values() for x in v]
        expected = ["X1", "X2", "X3", "X4", "X5"] + \
            (["X6", "X7"] if kind == "hsH" else [])
        if sorted(flat) != sorted(expected):
            raise RepTheoryError("component labels %s do not cover %s"
                                 % (sorted(flat), expected))
        self.assignment = assignment

    # -- application helpers -------------------------------------------

    def project_W(self, key, vec):
        """Apply the joint eigenprojector for joint eigenvalue `key` to a
        rational vector on W.  Exact; returns a Fraction vector."""
        sr, pr = key
        ivec, den = linalg.scale_to_int(np.asarray(vec, dtype=object))
        scale = Fraction(1, den)
        v = ivec
        for other in self.so_roots_W:
            if other != sr:
                v = _int_matvec(self.Cso_W, v) - other * v
                scale /= (sr - other)
        for other in self.sp_roots_W:
            if other != pr:
                v = _int_matvec(self.Csp_W, v) - other * v
                scale /= (pr - other)
        return linalg.frac_array(v) * scale

    def project_L3(self, name, vec):
        sr, pr = self.l3_labels[name]
        so_roots = self.so_roots_L
        sp_roots = self.sp_roots_L
        ivec, den = linalg.scale_to_int(np.asarray(vec, dtype=object))
        scale = Fraction(1, den)
        v = ivec
        for other in so_roots:
            if other != sr:
                v = _int_matvec(self.Cso_L, v) - other * v
                scale /= (sr - other)
        for other in sp_roots:
            if other != pr:
                v = _int_matvec(self.Csp_L, v) - other * v
                scale /= (pr - other)
        return linalg.frac_array(v) * scale

    def projector_matrix(self, key):
        sr, pr = key
        return _joint_projector(self.Cso_W, sr, self.so_roots_W,
                                self.Csp_W, pr, self.sp_roots_W)

    def content_key(self):
        text = "%s|%s" % (self.kind, self.model.content_key())
        return hashlib.sha256(text.encode()).hexdigest()[:24]


def _casimir_compact(basis, compact):
    duals = trace_form_dual(basis)
    acc = None
    den = 1
    scaled = []
    for eta in duals:
        eta_int, d = linalg.scale_to_int(eta)
        scaled.append((eta_int, d))
        den = den * d // math.gcd(den, d)
    for xi, (eta_int, d) in zip(basis, scaled):
        rho_xi = compact.action(xi).astype(object)
        rho_eta = compact.action(eta_int.astype(np.int64)).astype(object)
        term = linalg.int_matmul(rho_xi, rho_eta) * (den // d)
        acc = term if acc is None else acc + term
    g = 0
    for v in acc.reshape(-1):
        g = math.gcd(g, abs(int(v)))
        if g == 1:
            break
    if g > 1:
        g = math.gcd(g, den)
    if g > 1:
        acc = acc // g
        den //= g
    return acc, den


def _joint_projector(cso, sr, so_roots, csp, pr, sp_roots):
    p1 = eigen_projector(cso, sr, so_roots)
    p2 = eigen_projector(csp, pr, sp_roots)
    return linalg.int_matmul(p1[0], p2[0]), p1[1] * p2[1]


def _projector_trace(pj):
    mat, scale = pj
    tr = Fraction(int(np.trace(mat))) * scale
    if tr.denominator != 1:
        raise RepTheoryError("projector trace is not an integer")
    return int(tr)


def _pi_omega_matrix(m, cw, cl3):
    """Matrix of the cyclic omega0-contraction, compact W -> compact L3."""
    out = np.zeros((cl3.size, cw.size), dtype=np.int64)
    omega = np.array(m.omega0, dtype=np.int64)
    for p, (i, j, k) in enumerate(cw.index):
        # T[i,j,k]=1, T[j,i,k]=-1 contributes omega[k,z] to positions:
        for z in range(m.dim):
            w = omega[k, z]
            if not w:
                continue
            # coefficient sign(sort) * omega[k,z] at sorted (i,j,z);
            # the mirror entry T[j,i,k] is already accounted for by the
            # antisymmetry of the resulting 3-form
            t0, t1, t2, s = i, j, z, 1
            if t0 == t2 or t1 == t2:
                continue
            if t1 > t2:
                t1, t2, s = t2, t1, -s
            if t0 > t1:
                t0, t1, s = t1, t0, -s
            out[cl3.pos[(t0, t1, t2)], p] += s * int(w)
    return out


def _raise_matrix(m, cw, cl3):
    """Matrix of the omega0-raise of a 3-form into compact W coordinates:
    the torsion T with omega0(T(X,Y),Z) = phi(X,Y,Z)."""
    out = np.zeros((cw.size, cl3.size), dtype=np.int64)
    raise_mat, den = linalg.scale_to_int(
        linalg.inv(linalg.frac_array(np.asarray(m.omega0).T)))
    if den != 1:
        raise RepTheoryError("omega0 raise is not integral")
    raise_mat = raise_mat.astype(np.int64)
    for p, (i, j, k) in enumerate(cl3.index):
        for tri, sign in [((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                          ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)]:
            a, b, z = tri
            if a > b:
                continue  # only store i<j rows of W
            for w in range(m.dim):
                if raise_mat[w, z]:
                    out[cw.pos[(a, b, w)], p] += sign * int(raise_mat[w, z])
    return out


def _component_dims(n):
    """Real dimensions of the intrinsic-torsion components (quotient side).

    Complex dimensions of the building blocks: E = 2n, L3 = C(2n,3),
    K = 2n*C(2n,2) - 2n - C(2n,3), S30 = C(2n+2,3) - 2n; H-factors
    contribute 2 (H) or 4 (S^3 H)."""
    E = 2 * n
    L3 = math.comb(2 * n, 3)
    K = 2 * n * math.comb(2 * n, 2) - 2 * n - L3
    S30 = math.comb(2 * n + 2, 3) - 2 * n
    return {"X1": 4 * K, "X2": 4 * L3, "X3": 2 * K, "X4": 2 * E,
            "X5": 2 * S30, "X6": 4 * E, "X7": 2 * E}


# ---------------------------------------------------------------------
# public quotient / decomposition API
# ---------------------------------------------------------------------

_CAL_CACHE = {}


def get_calibration(m, kind):
    key = (kind, m.n, m.content_key())
    if key in _CAL_CACHE:
        return _CAL_CACHE[key]
    cal = _load_cached(m, kind)
    if cal is None:
        cal = Calibration(kind, m)
        _store_cached(cal)
    _CAL_CACHE[key] = cal
    return cal


def _cache_dir():
    return os.environ.get("SHL_CACHE_DIR",
                          os.path.join(os.path.expanduser("~"),
                                       ".cache", "shl"))


def _load_cached(m, kind):
    text = "%s|%s" % (kind, m.content_key())
    h = hashlib.sha256(text.encode()).hexdigest()[:24]
    path = os.path.join(_cache_dir(), "calibration-%s.pkl" % h)
    if not os.path.exists(path):
        return None
    try:
        with open(path, "rb") as fh:
            cal = pickle.load(fh)
        if cal.kind == kind and cal.n == m.n:
            cal.model = m
            return cal
    except Exception:
        return None
    return None


def _store_cached(cal):
    path = _cache_dir()
    try:
        os.makedirs(path, exist_ok=True)
        h = cal.content_key()
        with open(os.path.join(path, "calibration-%s.pkl" % h), "wb") as fh:
            pickle.dump(cal, fh)
    except OSError:
        pass


class IntrinsicQuotient:
    """Image of the Spencer differential inside W and a complement."""

    def __init__(self, cal):
        self.cal = cal
        self.image = cal.image
        leads = set(cal.image.leads)
        self.complement_coords = [i for i in range(cal.cw.size)
                                  if i not in leads]

    @property
    def total_dim(self):
        return self.cal.cw.size

    @property
    def image_dim(self):
        return self.image.dim

    @property
    def quotient_dim(self):
        return self.total_dim - self.image_dim

    def reduce(self, vec):
        return self.image.reduce(vec)

    def quotient_action(self, xi):
        """Action matrix of xi on the chosen complement coordinates."""
        rho = self.cal.cw.action(np.asarray(xi, dtype=np.int64))
        cols = []
        for c in self.complement_coords:
            red = self.image.reduce(rho[:, c].astype(object))
            cols.append([red[i] for i in self.complement_coords])
        return np.array(cols, dtype=object).T


def intrinsic_quotient(m, kind):
    return IntrinsicQuotient(get_calibration(m, kind))


class IsotypicComponent:
    def __init__(self, cal, key, labels):
        self.cal = cal
        self.key = key
        self.labels = labels
        info = cal.joint_info[key]
        self.level = info["level"]
        self.quotient_dim = info["qdim"]

    @property
    def label(self):
        return "+".join(self.labels)

    def projector(self):
        return self.cal.projector_matrix(self.key)

    def project(self, vec):
        return self.cal.project_W(self.key, vec)


def isotypic_decomposition(m, kind):
    cal = get_calibration(m, kind)
    return [IsotypicComponent(cal, key, labels)
            for key, labels in sorted(cal.assignment.items())]


# ---------------------------------------------------------------------
# the classifier
# ---------------------------------------------------------------------

class TypeReport:
    def __init__(self, kind, n, components, flags, exact=True,
                 split_notes=()):
        self.kind = kind
        self.n = n
        self.components = components  # list of (label, magnitude, zero)
        self.flags = flags
        self.exact = exact
        self.split_notes = tuple(split_notes)

    @property
    def type_string(self):
        nz = [lab[1:] for lab, _, zero in self.components if not zero]
        return "X" + "".join(nz) if nz else "X0"

    def to_json(self):
        comps = []
        for lab, mag, zero in self.components:
            if isinstance(mag, Fraction):
                mag_repr = "%d/%d" % (mag.numerator, mag.denominator) \
                    if mag.denominator != 1 else str(mag.numerator)
            else:
                mag_repr = "%.17g" % mag
            comps.append({"label": lab, "magnitude": mag_repr,
                          "zero": bool(zero)})
        flag_name = "hypercomplex" if self.kind == "hsH" else "quaternionic"
        return json.dumps({
            "kind": self.kind,
            "n": self.n,
            "type": self.type_string,
            "components": comps,
            "flags": {flag_name: self.flags[flag_name],
                      "symplectic": self.flags["symplectic"]},
            "exact": self.exact,
        }, indent=2)


def classify_torsion(m, T, kind):
    """Classify a torsion tensor (shape Lambda^2 V* (x) V over Q) into
    its intrinsic-torsion components for the chosen structure kind."""
    T = T.coeffs if isinstance(T, tensors.Tensor) else np.asarray(T)
    if T.ndim != 3 or T.shape != (m.dim,) * 3:
        raise RepTheoryError("torsion must be a 3-slot tensor on the model")
    if not np.equal(np.swapaxes(T, 0, 1), -T).all():
        raise RepTheoryError("torsion must be antisymmetric in the "
                             "first two slots")
    cal = get_calibration(m, kind)
    t = cal.cw.compress(np.asarray(T, dtype=object))
    t = linalg.frac_array(t)
    phi = _matvec_frac(cal.pi_matrix, t)

    results = {}

    def verdict_from_W(key, vec):
        proj = cal.project_W(key, vec)
        red = cal.image.reduce(proj)
        mag = max((abs(v) for v in red), default=Fraction(0))
        return mag, not any(red)

    def phi_part(name):
        part = cal.project_L3(name, phi)
        mag = max((abs(v) for v in part), default=Fraction(0))
        return part, mag, not any(part)

    # direct multiplicity-free components
    for key, labels in cal.assignment.items():
        if len(labels) == 1:
            mag, zero = verdict_from_W(key, t)
            results[labels[0]] = (mag, zero)
        else:
            results["_pair_" + "".join(labels)] = key

    split_notes = []
    if kind == "hsH":
        # X4 via the vector part of the 3-form side; X7 as the residual
        # of the vector-type isotype after removing the canonical lift.
        key47 = results.pop("_pair_X4X7")
        part, mag4, zero4 = phi_part("E_H")
        results["X4"] = (mag4, zero4)
        resid = t - _matvec_frac(cal.raise_matrix, part) * Fraction(1, 3)
        mag7, zero7 = verdict_from_W(key47, resid)
        results["X7"] = (mag7, zero7)
        if "_pair_X2X6" in results:
            key26 = results.pop("_pair_X2X6")
            part2, mag2, zero2 = phi_part("L3_S3H")
            results["X2"] = (mag2, zero2)
            resid2 = t - _matvec_frac(cal.raise_matrix, part2) * Fraction(1, 3)
            mag6, zero6 = verdict_from_W(key26, resid2)
            results["X6"] = (mag6, zero6)
            split_notes.append("X2/X6 split via the 3-form side (merged "
                               "isotype at n=2)")
        split_notes.append("X4/X7 split via the 3-form side")
    else:
        leftover = [k for k in results if k.startswith("_pair_")]
        if leftover:
            raise RepTheoryError("unexpected merged components %s" % leftover)

    order = ["X1", "X2", "X3", "X4", "X5"] + \
        (["X6", "X7"] if kind == "hsH" else [])
    components = [(lab,) + results[lab] for lab in order]
    zeros = {lab: zero for lab, _, zero in components}
    if kind == "hsH":
        flags = {
            "hypercomplex": zeros["X1"] and zeros["X2"] and zeros["X6"],
            "symplectic": zeros["X2"] and zeros["X3"] and zeros["X4"],
        }
    else:
        flags = {
            "quaternionic": zeros["X1"] and zeros["X2"],
            "symplectic": zeros["X2"] and zeros["X3"] and zeros["X4"],
        }
    return TypeReport(kind, m.n, components, flags, exact=True,
                      split_notes=split_notes)


def _matvec_frac(int_mat, frac_vec):
    ivec, den = linalg.scale_to_int(np.asarray(frac_vec, dtype=object))
    out = linalg.int_matmul(int_mat.astype(object), ivec.reshape(-1, 1))
    return linalg.frac_array(out.reshape(-1)) * Fraction(1, den)
