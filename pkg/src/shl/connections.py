"""Correction-tensor machinery for adapted connections: the projection
pi_11 onto the quaternion-linear endomorphisms, the four w-projections,
the hhat0-contraction, the splitting map s, the volume-normalized
correction tensor, and the conformal-change difference tensor.

An endomorphism-valued 1-form A is stored as A[x, y, z] = component on
basis vector z of A(X_x) applied to X_y (see tensors).
"""

from fractions import Fraction

import numpy as np

from . import linalg, model, tensors

__all__ = ["pi_11", "pi_s", "pi_a", "sym_endo", "asym_endo", "sp1_part",
           "w_project", "hhat_contract", "splitting_s", "avol_correction",
           "conformal_change_delta", "act_on_phi0", "trace2",
           "pure_element", "rank_one_pi11"]


def _fr(a):
    return linalg.frac_array(a)


def pi_11(m, B):
    """Projection of an endomorphism onto gl(n,H), the commutant of the
    triple: 1/4 (B - sum_a J_a B J_a)."""
    B = _fr(B)
    out = B.copy()
    for Ja in m.J:
        Jf = _fr(Ja)
        out = out - Jf @ B @ Jf
    return out * Fraction(1, 4)


def _lower(m, B):
    """Bilinear form L(X,Y) = omega0(BX, Y) of an endomorphism."""
    return np.transpose(_fr(B)) @ _fr(m.omega0)


def _unlower(m, L):
    """Endomorphism whose lowered form is L (inverse of _lower)."""
    return _fr(m.omega0) @ np.transpose(_fr(L))


def sym_endo(m, B):
    """Part of B whose lowered form is symmetric."""
    L = _lower(m, B)
    return _unlower(m, (L + L.T) * Fraction(1, 2))


def asym_endo(m, B):
    """Part of B whose lowered form is antisymmetric."""
    L = _lower(m, B)
    return _unlower(m, (L - L.T) * Fraction(1, 2))


def sp1_part(m, B):
    """Component of B on span(J1,J2,J3): -sum_a Tr(B J_a)/(4n) J_a."""
    B = _fr(B)
    out = np.zeros(B.shape, dtype=object)
    out[...] = Fraction(0)
    for Ja in m.J:
        tr = np.trace(B @ _fr(Ja))
        out = out - Fraction(tr, 4 * m.n) * _fr(Ja)
    return out


def rank_one_pi11(m, x, Z):
    """pi_11 of the rank-one datum omega0(X_x, .) (x) Z, as the matrix
    M[z,y] = 1/4 (omega0[x,y] Z[z] - sum_a g_a[x,y] (J_a Z)[z])."""
    Z = _fr(Z)
    dim = m.dim
    M = np.zeros((dim, dim), dtype=object)
    M[...] = Fraction(0)
    om = _fr(m.omega0)
    for y in range(dim):
        M[:, y] = M[:, y] + om[x, y] * Z
    for ga, Ja in zip(m.g, m.J):
        gf, JZ = _fr(ga), _fr(Ja) @ Z
        for y in range(dim):
            M[:, y] = M[:, y] - gf[x, y] * JZ
    return M * Fraction(1, 4)


def _pi_sa(m, x, Z, sign):
    Z = _fr(Z)
    dim = m.dim
    eye = _fr(np.eye(dim, dtype=np.int64))
    omZ = _fr(m.omega0)[x] @ Z
    M = np.zeros((dim, dim), dtype=object)
    M[...] = Fraction(0)
    om = _fr(m.omega0)
    for y in range(dim):
        M[:, y] = om[x, y] * Z + sign * omZ * eye[:, y]
    for ga, Ja in zip(m.g, m.J):
        gf, Jf = _fr(ga), _fr(Ja)
        JZ = Jf @ Z
        gZ = gf[x] @ Z
        for y in range(dim):
            M[:, y] = M[:, y] - gf[x, y] * JZ - sign * gZ * Jf[:, y]
    return M * Fraction(1, 8)


def pi_s(m, x, Z):
    """Symmetrization of the rank-one pi_11 datum in the vector argument
    and the parameter: 1/8 (omega(X,Y)Z + omega(X,Z)Y
    - sum_a g_a(X,Y)J_aZ - sum_a g_a(X,Z)J_aY)."""
    return _pi_sa(m, x, Z, 1)


def pi_a(m, x, Z):
    """Antisymmetrization counterpart of pi_s; pi_s + pi_a recovers the
    rank-one pi_11 datum."""
    return _pi_sa(m, x, Z, -1)


class WComponents:
    """The four projections of an endomorphism-valued 1-form."""

    def __init__(self, w1, w2, w3, w4):
        self.w1, self.w2, self.w3, self.w4 = w1, w2, w3, w4

    def __iter__(self):
        return iter((self.w1, self.w2, self.w3, self.w4))


def w_project(m, A):
    """Split A into its four canonical components; the remainder
    A - w1 - w2 - w3 - w4 takes values in so*(2n) + sp(1)."""
    A = _fr(A.coeffs if isinstance(A, tensors.Tensor) else A)
    dim = m.dim
    eye = _fr(np.eye(dim, dtype=np.int64))
    w = [np.zeros((dim,) * 3, dtype=object) for _ in range(4)]
    for arr in w:
        arr[...] = Fraction(0)
    for x in range(dim):
        B = A[x].T  # matrix of A(X_x): rows = output component
        tr = Fraction(np.trace(B))
        P = pi_11(m, B)
        rem = B - P
        w1 = Fraction(tr, 4 * m.n) * eye
        w2 = asym_endo(m, P) - w1
        w3 = sym_endo(m, rem)
        for Ja in m.J:
            w3 = w3 + Fraction(np.trace(B @ _fr(Ja)), 4 * m.n) * _fr(Ja)
        w4 = asym_endo(m, rem)
        for arr, mat in zip(w, (w1, w2, w3, w4)):
            arr[x] = mat.T
    return WComponents(*w)


def trace2(A):
    """Tr_2(A)(X) = Tr(A(X, .)), a covector."""
    A = _fr(A.coeffs if isinstance(A, tensors.Tensor) else A)
    return np.array([np.trace(A[x].T) for x in range(A.shape[0])],
                    dtype=object)


def act_on_phi0(m, alpha, dt=None):
    """The map p: alpha -> alpha . Phi0 into V* (x) S^4 V*."""
    dt = dt or model.defining_tensors(m)
    return tensors.one_form_action(alpha, dt.phi0)


def hhat_contract(m, theta, dt=None):
    """Natural contraction c(Theta)(x,y,z) against hhat0, pairing the
    endomorphism slot with Theta's second slot and the inverse-form
    slots with Theta's last two (symmetric) slots."""
    theta = _fr(theta.coeffs if isinstance(theta, tensors.Tensor) else theta)
    if theta.ndim != 5:
        raise ValueError("Theta must have 5 slots")
    dt = dt or model.defining_tensors(m)
    return tensors.exact_einsum("xwzuv,ywuv->xyz", theta, dt.hhat0)


def _raise_oneform(m, c):
    """Endomorphism-valued 1-form B with omega0(B(X_x)Y, Z) = c(x,y,z)."""
    c = _fr(c)
    out = np.zeros(c.shape, dtype=object)
    out[...] = Fraction(0)
    for x in range(c.shape[0]):
        out[x] = _unlower(m, c[x]).T
    return out


def splitting_s(m, theta, dt=None):
    """Splitting of the action on Phi0: s(Theta) recovers alpha from
    Theta = alpha . Phi0 (exactly, for admissible Theta)."""
    n = m.n
    c = hhat_contract(m, theta, dt=dt)
    B = _raise_oneform(m, c)
    w = w_project(m, B)
    return -(w.w1 * Fraction(1, 8 * (2 * n - 1))
             + w.w2 * Fraction(1, 8 * (n - 1))
             - w.w3 * Fraction(3, 16 * n)
             + w.w4 * Fraction(3, 8 * (n + 1)))


def avol_correction(m, C, dt=None):
    """Volume-normalized correction tensor from a candidate covariant
    derivative C of omega0 (skew in its last two slots): solves the
    half-derivative relation for A, then removes the trace so that
    Tr_2 of the result vanishes."""
    C = _fr(C.coeffs if isinstance(C, tensors.Tensor) else C)
    A = tensors.solve_a_tensor(m, C)
    tau = trace2(A)
    dt = dt or model.defining_tensors(m)
    h0 = _fr(dt.h0)
    # corr(x,y,z) = tau(h0(Y,Z)X - h0(X,Y)Z) / (4(n+1)); this denominator
    # is the unique one annihilating the trace of the result
    corr = (tensors.exact_einsum("yzxw,w->xyz", h0, tau)
            - tensors.exact_einsum("xyzw,w->xyz", h0, tau)) \
        * Fraction(1, 4 * (m.n + 1))
    lowered = tensors.exact_einsum("xyw,wz->xyz", A, _fr(m.omega0))
    return tensors.omega_raise(m, lowered - corr)


def conformal_change_delta(m, df):
    """Difference tensor of the adapted connection under a conformal
    change with differential df:
    -df (x) Id - (4n/(n+1)) pi_S(omega0 (x) df-raised)
    + (n/(n+1)) sum_a (df o J_a) (x) J_a."""
    df = _fr(df)
    n, dim = m.n, m.dim
    eye = _fr(np.eye(dim, dtype=np.int64))
    # raise df against omega0: the vector Z with df = omega0(., Z)
    Z = linalg.solve(_fr(m.omega0), df)
    out = np.zeros((dim,) * 3, dtype=object)
    out[...] = Fraction(0)
    for x in range(dim):
        mat = -df[x] * eye
        mat = mat - Fraction(4 * n, n + 1) * pi_s(m, x, Z)
        for Ja in m.J:
            dfJ = df @ _fr(Ja)  # (df o J_a)(X_x) = sum_w df[w] Ja[w,x]
            mat = mat + Fraction(n, n + 1) * dfJ[x] * _fr(Ja)
        out[x] = mat.T
    return out


# ---------------------------------------------------------------------
# pure-element generators (used heavily in tests)
# ---------------------------------------------------------------------

def _hermitian_antisym_basis(m):
    """Basis of antisymmetric bilinear forms invariant under the triple."""
    dim = m.dim
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    cols = []
    for i, j in pairs:
        W = np.zeros((dim, dim), dtype=np.int64)
        W[i, j], W[j, i] = 1, -1
        stacked = []
        for Ja in m.J:
            stacked.append((Ja.T @ W @ Ja - W).reshape(-1))
        cols.append(np.concatenate(stacked))
    kernel = linalg.nullspace(np.array(cols, dtype=object).T)
    basis = []
    for k in range(kernel.shape[1]):
        W = np.zeros((dim, dim), dtype=object)
        W[...] = Fraction(0)
        for (i, j), c in zip(pairs, kernel[:, k]):
            W[i, j] += c
            W[j, i] -= c
        basis.append(W)
    return basis


def _random_covector(m, rng):
    return _fr(np.array([int(v) for v in rng.integers(-4, 5, size=m.dim)],
                        dtype=object))


def _random_trace_free_hermitian_antisym(m, rng):
    basis = _hermitian_antisym_basis(m)
    W = np.zeros((m.dim, m.dim), dtype=object)
    W[...] = Fraction(0)
    for b in basis:
        W = W + Fraction(int(rng.integers(-4, 5))) * b
    # remove the omega0-trace component
    tr = model.inverse_contract(m, "omega0", W, "full")
    return W - Fraction(tr, 4 * m.n) * _fr(m.omega0)


def _oneform_from_lowered(m, xi, W):
    """alpha[x,y,z] = xi[x] * B[z,y] with B the raise of the form W."""
    B = _unlower(m, W)
    out = np.zeros((m.dim,) * 3, dtype=object)
    out[...] = Fraction(0)
    for x in range(m.dim):
        out[x] = xi[x] * B.T
    return out


def pure_element(m, index, rng, b=1):
    """Random pure element of the indicated canonical type (1..4); b in
    {1,2,3} selects the distinguished complex structure for types 3, 4."""
    xi = _random_covector(m, rng)
    if index == 1:
        eye = _fr(np.eye(m.dim, dtype=np.int64))
        out = np.zeros((m.dim,) * 3, dtype=object)
        out[...] = Fraction(0)
        for x in range(m.dim):
            out[x] = xi[x] * eye
        return out
    if index == 2:
        W = _random_trace_free_hermitian_antisym(m, rng)
        return _oneform_from_lowered(m, xi, W)
    if index == 3:
        W = _random_trace_free_hermitian_antisym(m, rng)
        Jb = _fr(m.J[b - 1])
        return _oneform_from_lowered(m, xi, W @ Jb)
    if index == 4:
        # rho: lowered form of a random element of so*(2n)
        from . import reptheory
        so = reptheory.lie_algebra_basis(m, "so_star")
        rho = np.zeros((m.dim, m.dim), dtype=object)
        rho[...] = Fraction(0)
        for mat in so.basis:
            rho = rho + Fraction(int(rng.integers(-4, 5))) * _lower(m, mat)
        Jb = _fr(m.J[b - 1])
        return _oneform_from_lowered(m, xi, rho @ Jb)
    raise ValueError("pure element index must be 1..4")
