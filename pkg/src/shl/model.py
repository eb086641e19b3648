"""The standard linear model R^{4n} with its compatible triple of
anticommuting complex structures J1, J2, J3 and the scalar 2-form omega0.

Basis order is (e_1..e_{2n}, f_1..f_{2n}); the triple acts by
J1 e_c = e_{c+n}, J2 e_c = f_c, J3 e_c = f_{c+n} for c <= n, extended by
the quaternion relations.  All matrices are integer numpy arrays; derived
tensors with fractional entries are Fraction-valued object arrays.
"""

from fractions import Fraction
import numpy as np

from . import linalg

__all__ = ["ModelSpace", "DefiningTensors", "standard_model",
           "defining_tensors", "inverse_contract", "sym_product",
           "rotate_triple"]


class ModelSpace:
    """Immutable container for the model data at quaternionic dimension n."""

    def __init__(self, n, J, omega0):
        self.n = n
        self.dim = 4 * n
        self.J = tuple(J)
        self.omega0 = omega0
        # inverse 2-form (2,0): sum_c e_c (x) f_c - f_c (x) e_c, whose
        # coefficient matrix coincides with the matrix of omega0 itself
        self.omega0_inv = omega0.copy()
        self.g = tuple(omega0 @ Ja for Ja in self.J)
        self.g_inv = tuple(np.array(linalg.inv(linalg.frac_array(ga)).tolist(),
                                    dtype=object) for ga in self.g)

    def basis_name(self, i):
        if i < 2 * self.n:
            return "e%d" % (i + 1)
        return "f%d" % (i - 2 * self.n + 1)

    def content_key(self):
        return "n=%d;J=%s;omega=%s" % (
            self.n,
            [Ja.tolist() for Ja in self.J],
            self.omega0.tolist(),
        )


def standard_model(n):
    """Build the standard model; n >= 2 is required throughout."""
    if n < 2:
        raise ValueError("quaternionic dimension must be at least 2")
    dim = 4 * n
    e = lambda c: c - 1          # e_c, 1 <= c <= 2n
    f = lambda c: 2 * n + c - 1  # f_c, 1 <= c <= 2n

    def mat(action):
        m = np.zeros((dim, dim), dtype=np.int64)
        for src, (dst, sign) in action.items():
            m[dst, src] = sign
        return m

    a1, a2, a3 = {}, {}, {}
    for c in range(1, n + 1):
        # action on e_c and its orbit, forced by the quaternion relations
        a1[e(c)] = (e(c + n), 1)
        a1[e(c + n)] = (e(c), -1)
        a1[f(c)] = (f(c + n), 1)        # J1 f_c = J1 J2 e_c = J3 e_c
        a1[f(c + n)] = (f(c), -1)
        a2[e(c)] = (f(c), 1)
        a2[f(c)] = (e(c), -1)
        a2[e(c + n)] = (f(c + n), -1)   # J2 e_{c+n} = J2 J1 e_c = -J3 e_c
        a2[f(c + n)] = (e(c + n), 1)
        a3[e(c)] = (f(c + n), 1)
        a3[f(c + n)] = (e(c), -1)
        a3[e(c + n)] = (f(c), 1)        # J3 e_{c+n} = J3 J1 e_c = J2 e_c
        a3[f(c)] = (e(c + n), -1)

    J1, J2, J3 = mat(a1), mat(a2), mat(a3)
    omega0 = np.zeros((dim, dim), dtype=np.int64)
    for r in range(1, 2 * n + 1):
        omega0[e(r), f(r)] = 1
        omega0[f(r), e(r)] = -1
    m = ModelSpace(n, (J1, J2, J3), omega0)
    _check_model(m)
    return m


def _check_model(m):
    dim = m.dim
    eye = np.eye(dim, dtype=np.int64)
    for Ja in m.J:
        assert (Ja @ Ja == -eye).all()
        assert (Ja.T @ m.omega0 @ Ja == m.omega0).all()
    assert (m.J[0] @ m.J[1] == m.J[2]).all()
    assert (m.omega0.T == -m.omega0).all()


class DefiningTensors:
    """Derived tensors of the model: the three metrics, the endomorphism-
    valued 2-form h0, the symmetric 4-tensor phi0, and the contraction
    kernel hhat0."""

    def __init__(self, m):
        self.model = m
        dim = m.dim
        self.g = m.g

        # h0[x,y,z,w]: component on basis vector w of h0(X,Y)Z
        h0 = np.zeros((dim, dim, dim, dim), dtype=np.int64)
        eye = np.eye(dim, dtype=np.int64)
        h0 += np.einsum("xy,zw->xyzw", m.omega0, eye)
        for ga, Ja in zip(m.g, m.J):
            h0 += np.einsum("xy,wz->xyzw", ga, Ja)
        self.h0 = h0

        phi0 = np.zeros((dim,) * 4, dtype=object)
        phi0[...] = Fraction(0)
        for ga in m.g:
            gaf = linalg.frac_array(ga)
            phi0 = phi0 + sym_product(gaf, gaf)
        self.phi0 = phi0

        # hhat0[z,w,u,v] = Id^w_z omega0inv^{uv} + sum_a (J_a)^w_z gainv^{uv}
        hhat0 = np.zeros((dim,) * 4, dtype=object)
        hhat0[...] = Fraction(0)
        hhat0 += np.einsum("zw,uv->zwuv", linalg.frac_array(eye),
                           linalg.frac_array(m.omega0_inv))
        for Ja, gainv in zip(m.J, m.g_inv):
            hhat0 = hhat0 + np.einsum("wz,uv->zwuv",
                                      linalg.frac_array(Ja), gainv)
        self.hhat0 = hhat0


def sym_product(B, C):
    """Symmetric product of two symmetric (0,2)-tensors: the full
    symmetrization with the 1/6-weighted six-term expansion."""
    terms = (np.einsum("yz,uv->yzuv", B, C) + np.einsum("yu,zv->yzuv", B, C)
             + np.einsum("yv,zu->yzuv", B, C) + np.einsum("zu,yv->yzuv", B, C)
             + np.einsum("zv,yu->yzuv", B, C) + np.einsum("uv,yz->yzuv", B, C))
    return terms * Fraction(1, 6)


def defining_tensors(m):
    return DefiningTensors(m)


_BILINEARS = ("omega0", "g1", "g2", "g3")


def inverse_contract(m, B, A, mode):
    """Contract the (0,2)-tensor A with the inverse of the bilinear B.

    B is one of 'omega0', 'g1', 'g2', 'g3'.  mode 'left'/'right' return
    endomorphism matrices E with E(x) = A(B^{-1}, x) resp. A(x, B^{-1});
    mode 'full' returns the scalar full contraction.
    """
    if B not in _BILINEARS:
        raise ValueError("B must be one of %s" % (_BILINEARS,))
    G = (linalg.frac_array(m.omega0_inv) if B == "omega0"
         else m.g_inv[int(B[1]) - 1])
    A = linalg.frac_array(A)
    if A.shape != (m.dim, m.dim):
        raise ValueError("A must be a (0,2)-tensor on the model")
    if mode == "right":
        return np.einsum("wu,xu->wx", G, A)
    if mode == "left":
        return np.einsum("uw,ux->wx", G, A)
    if mode == "full":
        return np.einsum("uv,uv->", G, A)
    raise ValueError("mode must be left, right, or full")


def rotate_triple(m, R):
    """Model with the admissible triple J'_a = sum_b R_{ab} J_b for a
    rational orthogonal 3x3 matrix R with det 1."""
    R = linalg.frac_array(R)
    eye3 = linalg.frac_array(np.eye(3, dtype=np.int64))
    if not (R @ R.T == eye3).all():
        raise ValueError("R must be orthogonal")
    J = []
    for a in range(3):
        Ja = np.zeros((m.dim, m.dim), dtype=object)
        Ja[...] = Fraction(0)
        for b in range(3):
            Ja = Ja + R[a, b] * linalg.frac_array(m.J[b])
        J.append(Ja)
    det = (R[0, 0] * (R[1, 1] * R[2, 2] - R[1, 2] * R[2, 1])
           - R[0, 1] * (R[1, 0] * R[2, 2] - R[1, 2] * R[2, 0])
           + R[0, 2] * (R[1, 0] * R[2, 1] - R[1, 1] * R[2, 0]))
    if det != 1:
        raise ValueError("R must have determinant 1")
    return ModelSpace(m.n, J, linalg.frac_array(m.omega0))
