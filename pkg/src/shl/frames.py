"""Coframes on a single chart of R^dim with symbolic Expr coefficients:
exterior derivatives, torsion of the frame connection at a point, the
induced scalar 2-form, classification, and the two quaternionification
constructions (four-fold and two-fold products of an almost symplectic
chart).

A CoFrame stores the coefficient matrix c with c[i][j] = coefficient
Expr of dx_{j+1} in the i-th coframe 1-form.  The dual frame vectors at
a point p are the columns of c(p)^{-1}.
"""

from fractions import Fraction
import json

import numpy as np

from . import expr, linalg, model, reptheory, tensors

__all__ = ["CoFrame", "FrameError", "PointTorsion", "coframe_torsion",
           "classify_frame_at", "induced_omega", "omega_closed",
           "domega_in_frame", "torsion_in_coordinates",
           "quaternionify_alpha", "quaternionify_beta", "cotangent_model",
           "d_one_form", "d_two_form", "identity_coframe"]

KINDS = ("skew_hermitian", "symplectic", "unitary")

INEXACT_ZERO = Fraction(1, 10 ** 9)


class FrameError(ValueError):
    pass


def _as_expr(v):
    if isinstance(v, expr.Expr):
        return v
    return expr.const(v)


class CoFrame:
    """An ordered set of `dim` 1-forms with Expr coefficients on R^dim."""

    def __init__(self, dim, kind, forms):
        if kind not in KINDS:
            raise FrameError("kind must be one of %s" % (KINDS,))
        forms = [list(row) for row in forms]
        if len(forms) != dim or any(len(row) != dim for row in forms):
            raise FrameError("coefficient matrix must be %d x %d" % (dim, dim))
        self.dim = dim
        self.kind = kind
        self.forms = [[_as_expr(v) for v in row] for row in forms]

    def origin(self):
        return (Fraction(0),) * self.dim

    def _point(self, p):
        p = tuple(p)
        if len(p) != self.dim:
            raise FrameError("point has %d coordinates, chart has %d"
                             % (len(p), self.dim))
        return {i + 1: Fraction(v) for i, v in enumerate(p)}

    def coeff_matrix_at(self, p):
        """Evaluate the coefficient matrix c(p); returns (matrix, exact)."""
        env = self._point(p)
        out = np.empty((self.dim, self.dim), dtype=object)
        exact = True
        for i, row in enumerate(self.forms):
            for j, e in enumerate(row):
                v, ex = e.evaluate(env)
                out[i, j] = v
                exact = exact and ex
        return out, exact

    def to_json(self):
        return json.dumps({
            "dim": self.dim,
            "kind": self.kind,
            "forms": [[expr.format_expr(e) for e in row]
                      for row in self.forms],
        }, indent=2)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        for field in ("dim", "kind", "forms"):
            if field not in data:
                raise FrameError("missing field %r (/%s)" % (field, field))
        dim = data["dim"]
        forms = data["forms"]
        if not isinstance(forms, list) or len(forms) != dim:
            raise FrameError("/forms: expected %d rows" % dim)
        parsed = []
        for i, row in enumerate(forms):
            if not isinstance(row, list) or len(row) != dim:
                raise FrameError("/forms/%d: expected %d coefficients"
                                 % (i, dim))
            parsed.append([expr.parse_expr(s) for s in row])
        return cls(dim, data["kind"], parsed)


def identity_coframe(dim, kind="skew_hermitian"):
    rows = [[expr.const(1 if i == j else 0) for j in range(dim)]
            for i in range(dim)]
    return CoFrame(dim, kind, rows)


# ---------------------------------------------------------------------
# exterior derivatives
# ---------------------------------------------------------------------

def d_one_form(row):
    """Exterior derivative of a 1-form sum_j c_j dx^j: the antisymmetric
    Expr matrix F with F[j][k] = (d c_k / d x_j) - (d c_j / d x_k)."""
    dim = len(row)
    return [[row[k].diff(j + 1) - row[j].diff(k + 1) for k in range(dim)]
            for j in range(dim)]


def d_two_form(F):
    """Exterior derivative of an antisymmetric Expr matrix 2-form."""
    dim = len(F)
    return [[[F[j][k].diff(i + 1) - F[i][k].diff(j + 1)
              + F[i][j].diff(k + 1)
              for k in range(dim)] for j in range(dim)] for i in range(dim)]


def form_is_zero(F):
    """True when every coefficient Expr vanishes identically."""
    arr = np.asarray(F, dtype=object)
    return all(e.is_zero() for e in arr.reshape(-1))


def _eval_form(F, env):
    arr = np.asarray(F, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    exact = True
    for idx, e in np.ndenumerate(arr):
        v, ex = e.evaluate(env)
        out[idx] = v
        exact = exact and ex
    return out, exact


def _exactify(a):
    """Convert mpfr entries to their exact binary rationals."""
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = v if isinstance(v, Fraction) else Fraction(float(v))
    return out


# ---------------------------------------------------------------------
# torsion of the frame connection
# ---------------------------------------------------------------------

class PointTorsion:
    """Torsion of the frame connection at a point, in frame components:
    tensor[a, b, i] is the i-th frame component of T(u_a, u_b)."""

    def __init__(self, point, tensor, exact):
        self.point = tuple(point)
        self.tensor = tensor
        self.exact = exact


def coframe_torsion(cf, p):
    """T(u_a, u_b) = d(theta^i)(u_a, u_b) on the frame dual to the
    coframe, evaluated at p."""
    env = cf._point(p)
    c, exact_c = cf.coeff_matrix_at(p)
    c_exact = c if exact_c else _exactify(c)
    if linalg.rank(c_exact) < cf.dim:
        raise FrameError("coframe is singular at %s" % (list(p),))
    u = linalg.solve(c_exact, linalg.frac_array(np.eye(cf.dim, dtype=int)))

    dtheta = np.empty((cf.dim, cf.dim, cf.dim), dtype=object)
    exact = exact_c
    for i, row in enumerate(cf.forms):
        F, ex = _eval_form(d_one_form(row), env)
        dtheta[i] = F
        exact = exact and ex
    if not exact:
        dtheta = _exactify(dtheta)
    T = tensors.exact_einsum("ijk,ja,kb->abi", dtheta, u, u)
    return PointTorsion(p, T, exact)


def torsion_in_coordinates(cf, pt):
    """Re-express a PointTorsion in the chart's coordinate basis."""
    c, exact_c = cf.coeff_matrix_at(pt.point)
    c = c if exact_c else _exactify(c)
    u = linalg.solve(c, linalg.frac_array(np.eye(cf.dim, dtype=int)))
    return tensors.exact_einsum("abx,ai,bj,kx->ijk", pt.tensor, c, c, u)


def classify_frame_at(cf, p, kind="hsH"):
    if cf.kind != "skew_hermitian":
        raise FrameError("only skew_hermitian coframes classify directly; "
                         "quaternionify %s input first" % cf.kind)
    if cf.dim % 4:
        raise FrameError("chart dimension must be a multiple of 4")
    n = cf.dim // 4
    m = model.standard_model(n)
    pt = coframe_torsion(cf, p)
    report = reptheory.classify_torsion(m, pt.tensor, kind)
    if not pt.exact:
        return _threshold_report(report)
    return report


def _threshold_report(report):
    comps = []
    for lab, mag, _ in report.components:
        zero = abs(mag) < INEXACT_ZERO
        comps.append((lab, mag, zero))
    zeros = {lab: zero for lab, _, zero in comps}
    if report.kind == "hsH":
        flags = {"hypercomplex": zeros["X1"] and zeros["X2"] and zeros["X6"],
                 "symplectic": zeros["X2"] and zeros["X3"] and zeros["X4"]}
    else:
        flags = {"quaternionic": zeros["X1"] and zeros["X2"],
                 "symplectic": zeros["X2"] and zeros["X3"] and zeros["X4"]}
    return reptheory.TypeReport(report.kind, report.n, comps, flags,
                                exact=False, split_notes=report.split_notes)


# ---------------------------------------------------------------------
# the induced scalar 2-form
# ---------------------------------------------------------------------

def induced_omega(cf):
    """omega = sum_r theta^r wedge theta^{r + dim/2} as an antisymmetric
    Expr coefficient matrix (pairs (e_r, f_r) of the declared frame)."""
    if cf.dim % 2:
        raise FrameError("chart dimension must be even")
    half = cf.dim // 2
    dim = cf.dim
    zero = expr.const(0)
    out = [[zero for _ in range(dim)] for _ in range(dim)]
    for r in range(half):
        a, b = cf.forms[r], cf.forms[half + r]
        for j in range(dim):
            for k in range(dim):
                out[j][k] = out[j][k] + (a[j] * b[k] - a[k] * b[j])
    return out


def omega_closed(cf):
    return form_is_zero(d_two_form(induced_omega(cf)))


def domega_in_frame(cf, p):
    """The 3-form d(omega) at p, re-expressed on the frame dual to the
    coframe; returns (array, exact)."""
    env = cf._point(p)
    G, exact = _eval_form(d_two_form(induced_omega(cf)), env)
    c, exact_c = cf.coeff_matrix_at(p)
    c = c if exact_c else _exactify(c)
    if not (exact and exact_c):
        G = _exactify(G)
    u = linalg.solve(c, linalg.frac_array(np.eye(cf.dim, dtype=int)))
    return tensors.exact_einsum("ijk,ia,jb,kc->abc", G, u, u, u), \
        exact and exact_c


# ---------------------------------------------------------------------
# quaternionifications
# ---------------------------------------------------------------------

def _shift_expr(e, offset):
    if e.kind == "var":
        return expr.var(e.index + offset)
    if e.kind in ("const",):
        return e
    return expr.Expr(e.kind, value=e.value,
                     args=tuple(_shift_expr(a, offset) for a in e.args))


def _block_coframe(cf, copies):
    """Coefficient rows of `copies` shifted copies of cf, block-diagonal
    over the product chart."""
    dim = cf.dim
    zero = expr.const(0)
    rows = []
    for j in range(copies):
        off = j * dim
        for row in cf.forms:
            new = [zero] * (copies * dim)
            for col, e in enumerate(row):
                new[off + col] = _shift_expr(e, off)
            rows.append(new)
    return rows


def _combine(s_inv, block_rows):
    out_dim = len(block_rows[0])
    rows = []
    for a in range(s_inv.shape[0]):
        new = [expr.const(0)] * out_dim
        for b in range(s_inv.shape[1]):
            coeff = s_inv[a, b]
            if not coeff:
                continue
            ce = expr.const(coeff)
            for col in range(out_dim):
                if not block_rows[b][col].is_zero():
                    new[col] = new[col] + ce * block_rows[b][col]
        rows.append(new)
    return rows


def _alpha_matrix(mpairs):
    """Columns: the combined frame vectors of the four-fold construction
    over the block frame basis (copy-major, (e_1..e_m, f_1..f_m) per
    copy)."""
    dim = 2 * mpairs
    S = np.zeros((4 * dim, 4 * dim), dtype=np.int64)

    def e(i, copy):
        return (copy - 1) * dim + i

    def f(i, copy):
        return (copy - 1) * dim + mpairs + i

    for p in range(mpairs):
        groups = [
            ((e(p, 1), 1), (f(p, 2), 1)),     # e_{p1} + f_{p2}
            ((e(p, 3), 1), (f(p, 4), 1)),     # e_{p3} + f_{p4}
            ((e(p, 3), 1), (f(p, 4), -1)),    # e_{p3} - f_{p4}
            ((e(p, 1), -1), (f(p, 2), 1)),    # -e_{p1} + f_{p2}
            ((f(p, 1), 1), (e(p, 2), -1)),    # f_{p1} - e_{p2}
            ((f(p, 3), 1), (e(p, 4), -1)),    # f_{p3} - e_{p4}
            ((f(p, 3), 1), (e(p, 4), 1)),     # f_{p3} + e_{p4}
            ((f(p, 1), -1), (e(p, 2), -1)),   # -f_{p1} - e_{p2}
        ]
        for g, terms in enumerate(groups):
            col = g * mpairs + p
            for row, sign in terms:
                S[row, col] = sign
    return S


def quaternionify_alpha(cf):
    """Four-fold product construction: a symplectic coframe on R^{2m}
    yields a skew_hermitian coframe on R^{8m}."""
    if cf.kind != "symplectic":
        raise FrameError("the four-fold construction needs a symplectic "
                         "coframe")
    if cf.dim % 2:
        raise FrameError("symplectic chart dimension must be even")
    mpairs = cf.dim // 2
    S = _alpha_matrix(mpairs)
    s_inv = linalg.inv(linalg.frac_array(S))
    return CoFrame(4 * cf.dim, "skew_hermitian",
                   _combine(s_inv, _block_coframe(cf, 4)))


def _beta_matrix(mpairs):
    dim = 2 * mpairs
    S = np.zeros((2 * dim, 2 * dim), dtype=np.int64)
    for p in range(mpairs):
        S[p, p] = 1                                 # e_{p1}
        S[dim + p, mpairs + p] = 1                  # e_{p2}
        S[mpairs + p, 2 * mpairs + p] = 1           # f_{p1}
        S[dim + mpairs + p, 3 * mpairs + p] = 1     # f_{p2}
    return S


def quaternionify_beta(cf):
    """Two-fold product construction: a unitary coframe on R^{2m} yields
    a skew_hermitian coframe on R^{4m}."""
    if cf.kind != "unitary":
        raise FrameError("the two-fold construction needs a unitary coframe")
    if cf.dim % 2:
        raise FrameError("unitary chart dimension must be even")
    mpairs = cf.dim // 2
    S = _beta_matrix(mpairs)
    s_inv = linalg.inv(linalg.frac_array(S))
    return CoFrame(2 * cf.dim, "skew_hermitian",
                   _combine(s_inv, _block_coframe(cf, 2)))


# ---------------------------------------------------------------------
# the cotangent model
# ---------------------------------------------------------------------

_QUAT = {
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
    (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
}


def quaternion_units():
    """Left-multiplication matrices of 1, i, j, k on R^4."""
    mats = []
    for a in range(4):
        m = np.zeros((4, 4), dtype=np.int64)
        for b in range(4):
            c, s = _QUAT[(a, b)]
            m[c, b] = s
        mats.append(m)
    return mats


def _right_mult(unit, n):
    """Right multiplication by a quaternion unit on H^n = R^{4n}."""
    m = np.zeros((4 * n, 4 * n), dtype=np.int64)
    for p in range(n):
        for b in range(4):
            c, s = _QUAT[(b, unit)]
            m[4 * p + c, 4 * p + b] = s
    return m


def cotangent_model(n):
    """The product structure on H^n + (H^n)* with the pairing 2-form
    omega((u, xi), (v, eta)) = eta(u) - xi(v); returns a ModelSpace of
    quaternionic dimension 2n."""
    if n < 1:
        raise FrameError("n must be at least 1")
    d = 4 * n
    Ri, Rj = _right_mult(1, n), _right_mult(2, n)
    J = []
    for R in (Ri, Rj, (Rj @ Ri)):
        # on the dual summand an endomorphism acts by minus its transpose
        full = np.zeros((2 * d, 2 * d), dtype=np.int64)
        full[:d, :d] = R
        full[d:, d:] = -R.T
        J.append(full)
    # J3 := J1 J2 on the total space
    J[2] = J[0] @ J[1]
    omega = np.zeros((2 * d, 2 * d), dtype=np.int64)
    omega[:d, d:] = np.eye(d, dtype=np.int64)
    omega[d:, :d] = -np.eye(d, dtype=np.int64)
    eye = np.eye(2 * d, dtype=np.int64)
    for Ja in J:
        if not (Ja @ Ja == -eye).all():
            raise FrameError("product triple is not almost complex")
        if not (Ja.T @ omega @ Ja == omega).all():
            raise FrameError("pairing 2-form is not Hermitian for the "
                             "product triple")
    if not (J[0] @ J[1] == J[2]).all():
        raise FrameError("product triple violates the quaternion relation")
    return model.ModelSpace(2 * n, tuple(J), omega)
