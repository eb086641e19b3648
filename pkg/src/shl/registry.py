"""Built-in example catalogue.

Each entry bundles input data (a coframe or homogeneous-space
description), the point at which to classify, and the expected
classification, so the catalogue doubles as a regression corpus for the
whole pipeline.
"""

from fractions import Fraction

import numpy as np

from . import expr, frames, homogeneous, linalg

__all__ = ["Example", "RegistryError", "get", "keys"]

_ZERO = expr.const(0)
_ONE = expr.const(1)


class RegistryError(KeyError):
    pass


class Example:
    """A named example: `category` is one of 'frame', 'quaternionification',
    'homogeneous'.  Frame categories carry a CoFrame in `coframe` (for
    quaternionifications also the raw input coframe and the mode); the
    homogeneous category carries a HomogeneousData in `homogeneous`."""

    def __init__(self, key, category, kind, expected_type, expected_flags,
                 point=None, coframe=None, input_coframe=None, mode=None,
                 homogeneous_data=None, extras=None):
        self.key = key
        self.category = category
        self.kind = kind
        self.expected_type = expected_type
        self.expected_flags = expected_flags
        self.coframe = coframe
        self.input_coframe = input_coframe
        self.mode = mode
        self.homogeneous = homogeneous_data
        self.extras = extras or {}
        if point is None and coframe is not None:
            point = coframe.origin()
        self.point = point

    def classify(self):
        if self.category == "homogeneous":
            return homogeneous.classify_homogeneous(self.homogeneous,
                                                    self.kind)
        return frames.classify_frame_at(self.coframe, self.point, self.kind)


def _identity_rows(dim):
    return [[_ONE if i == j else _ZERO for j in range(dim)]
            for i in range(dim)]


def _set_terms(rows, i, terms):
    """Add sum(coeff * dx_j) to row i (1-based row/column indices)."""
    for coeff, j in terms:
        rows[i - 1][j - 1] = rows[i - 1][j - 1] + coeff


def _x(i):
    return expr.var(i)


# -- flat-chart coframes --------------------------------------------------

def _frame_r12_x12():
    rows = _identity_rows(12)
    _set_terms(rows, 6, [(_x(4), 2), (-_x(1), 5), (_x(10), 8), (-_x(7), 11)])
    _set_terms(rows, 12, [(-_x(10), 2), (-_x(7), 5), (_x(4), 8), (_x(1), 11)])
    return frames.CoFrame(12, "skew_hermitian", rows)


def _frame_r8_x123567():
    rows = _identity_rows(8)
    _set_terms(rows, 1, [(_x(2), 3)])
    return frames.CoFrame(8, "skew_hermitian", rows)


def _frame_r8_conformal():
    rows = [[_x(1) if i == j else _ZERO for j in range(8)] for i in range(8)]
    return frames.CoFrame(8, "skew_hermitian", rows)


def _frame_r8_x1567():
    rows = _identity_rows(8)
    _set_terms(rows, 1, [(_x(4), 5)])
    return frames.CoFrame(8, "skew_hermitian", rows)


def _frame_r12_pure_x3():
    rows = _identity_rows(12)
    _set_terms(rows, 6, [(-_x(4), 2), (_x(1), 5), (-_x(10), 8), (_x(7), 11)])
    _set_terms(rows, 9, [(-_x(7), 2), (_x(10), 5), (_x(1), 8), (-_x(4), 11)])
    _set_terms(rows, 12, [(-_x(10), 2), (-_x(7), 5), (_x(4), 8), (_x(1), 11)])
    return frames.CoFrame(12, "skew_hermitian", rows)


# -- quaternionification inputs -------------------------------------------

def _coframe_exp_group():
    """Dual coframe of the invariant frame (d/dy1 + y2 d/dy2,
    exp(-y1) d/dy2) on the 2-dimensional solvable matrix group."""
    ex1 = expr.Expr("exp", args=(_x(1),))
    rows = [[_ONE, _ZERO],
            [-(_x(2) * ex1), ex1]]
    return frames.CoFrame(2, "symplectic", rows)


def _coframe_unipotent():
    """Dual coframe of the invariant symplectic frame on the 6-dimensional
    3-step nilpotent matrix group."""
    rows = _identity_rows(6)
    _set_terms(rows, 2, [(-_x(3), 1)])
    _set_terms(rows, 5, [(-_x(4), 3)])
    _set_terms(rows, 6, [(_x(3) * _x(4) - _x(5), 1), (-_x(4), 2)])
    return frames.CoFrame(6, "unitary", rows)


# -- homogeneous data -------------------------------------------------------

_QUAT = {
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
    (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
}


def _triangular_group():
    """12-dimensional nilpotent algebra of strictly lower triangular 3x3
    quaternionic matrices, viewed as a Lie group model space.

    Basis slots: position 3a carries the (2,1)-entry unit u_a, position
    3a+2 the (3,2)-entry unit u_a, position 3a+1 the central (3,1)-entry
    unit u_a, for quaternion units u_0..u_3 = 1, i, j, k."""
    dim = 12
    C = np.zeros((dim, dim, dim), dtype=object)
    C[...] = Fraction(0)
    for a in range(4):       # (2,1)-entry unit
        for b in range(4):   # (3,2)-entry unit
            i, j = 3 * a, 3 * b + 2
            c, sign = _QUAT[(b, a)]   # [E21 p, E32 q] = -E31 (q p)
            k = 3 * c + 1
            C[i, j, k] = Fraction(-sign)
            C[j, i, k] = Fraction(sign)
    eye = linalg.frac_array(np.eye(dim, dtype=object))
    return homogeneous.HomogeneousData(
        dim, C, np.zeros((dim, 0), dtype=object), eye, eye)


def _sl4_matrices():
    """Basis of sl(4,R) adapted to the lower-right sl(2,R) subalgebra and
    a 12-dimensional complement; returns (complement mats, subalgebra
    mats) as 4x4 Fraction matrices."""
    half = Fraction(1, 2)
    m_defs = {
        1: [(0, 2, 1), (0, 3, -1), (1, 2, -2), (1, 3, 1)],
        2: [(2, 0, 1), (3, 0, 2), (3, 1, -1)],
        3: [(0, 0, 1), (2, 2, -half), (3, 3, -half)],
        4: [(2, 0, -1), (3, 1, -1)],
        5: [(0, 2, 1), (0, 3, -1), (1, 3, 1)],
        6: [(1, 0, 1)],
        7: [(0, 2, 1), (1, 3, -1)],
        8: [(2, 0, -1), (2, 1, 1), (3, 1, 1)],
        9: [(0, 1, 1)],
        10: [(2, 0, -1), (2, 1, 1), (3, 0, -2), (3, 1, 1)],
        11: [(0, 2, 1), (1, 2, -2), (1, 3, 1)],
        12: [(1, 1, 1), (2, 2, -half), (3, 3, -half)],
    }
    m_mats = []
    for idx in range(1, 13):
        mat = np.zeros((4, 4), dtype=object)
        mat[...] = Fraction(0)
        for r, c, v in m_defs[idx]:
            mat[r, c] = Fraction(v)
        m_mats.append(mat)
    l_mats = []
    for entries in ([(2, 2, 1), (3, 3, -1)], [(2, 3, 1)], [(3, 2, 1)]):
        mat = np.zeros((4, 4), dtype=object)
        mat[...] = Fraction(0)
        for r, c, v in entries:
            mat[r, c] = Fraction(v)
        l_mats.append(mat)
    return m_mats, l_mats


def _sl4_sl2():
    m_mats, l_mats = _sl4_matrices()
    basis = m_mats + l_mats
    dim = 15
    flat = np.stack([b.reshape(-1) for b in basis], axis=1)
    comms = []
    for i in range(dim):
        for j in range(dim):
            comms.append((basis[i] @ basis[j] - basis[j] @ basis[i])
                         .reshape(-1))
    coords = linalg.solve(flat, np.stack(comms, axis=1))
    if coords is None:
        raise RegistryError("matrix commutators leave the spanned algebra")
    C = linalg.frac_array(coords.T.reshape(dim, dim, dim))
    l_basis = np.zeros((dim, 3), dtype=object)
    l_basis[...] = Fraction(0)
    m_basis = np.zeros((dim, 12), dtype=object)
    m_basis[...] = Fraction(0)
    for a in range(3):
        l_basis[12 + a, a] = Fraction(1)
    for a in range(12):
        m_basis[a, a] = Fraction(1)
    eye = linalg.frac_array(np.eye(12, dtype=object))
    return homogeneous.HomogeneousData(dim, C, l_basis, m_basis, eye)


# Published component-by-component torsion table of the coset example, as
# lists of (coefficient, i, j) meaning coefficient * a_i ^ b_j.  Components
# 1, 10 and 11 of the printed table are garbled (an unbalanced grouping in
# t1, a dangling half-term at the end of t10, and a truncated leading term
# in t11), so exact agreement is only expected outside _SL4_SUSPECT.
_H = Fraction(1, 2)
_SL4_DISPLAY = {
    1: [(1, 1, 3), (1, 1, 12), (1, 7, 9), (-1, 5, 9), (_H, 6, 11),
        (-_H, 5, 12), (_H, 6, 7), (_H, 11, 12), (_H, 7, 12), (_H, 3, 11),
        (_H, 3, 7), (-_H, 3, 5)],
    2: [(-1, 2, 12), (1, 4, 9), (1, 8, 9), (-_H, 3, 10), (_H, 6, 8),
        (-1, 2, 3), (-_H, 10, 12), (-_H, 3, 4), (-_H, 8, 12), (_H, 6, 10),
        (-_H, 3, 8), (-_H, 4, 12)],
    3: [(-1, 4, 5), (1, 2, 7), (1, 7, 10), (1, 2, 11), (-1, 8, 11),
        (-1, 1, 10), (-1, 5, 10), (1, 6, 9), (1, 5, 8), (-1, 4, 7),
        (1, 1, 8), (-1, 2, 5), (1, 7, 8), (-1, 4, 11), (1, 1, 4),
        (1, 1, 2), (-1, 10, 11)],
    4: [(1, 9, 10), (1, 2, 9), (-_H, 2, 12), (_H, 3, 10), (-_H, 6, 8),
        (_H, 2, 3), (_H, 10, 12), (1, 3, 4), (_H, 8, 12), (-_H, 6, 10),
        (_H, 3, 8), (-1, 4, 12)],
    5: [(1, 5, 12), (-_H, 6, 11), (1, 9, 11), (-_H, 7, 12), (_H, 1, 3),
        (-_H, 6, 7), (-_H, 11, 12), (-_H, 3, 11), (-_H, 1, 12),
        (-1, 1, 9), (-_H, 3, 7), (-1, 3, 5)],
    6: [(-2, 2, 7), (-2, 7, 10), (2, 8, 11), (1, 3, 6), (2, 5, 10),
        (-2, 1, 8), (1, 6, 12), (2, 2, 5), (2, 4, 11), (-2, 1, 4)],
    7: [(-_H, 5, 12), (1, 7, 12), (_H, 1, 3), (1, 9, 11), (-1, 3, 7),
        (-_H, 11, 12), (-_H, 3, 11), (_H, 1, 6), (-_H, 3, 5), (_H, 5, 6),
        (-_H, 1, 12), (-1, 1, 9)],
    8: [(-1, 9, 10), (-1, 2, 9), (_H, 2, 6), (_H, 2, 12), (-_H, 3, 10),
        (-_H, 2, 3), (-_H, 10, 12), (_H, 3, 4), (-1, 8, 12), (_H, 4, 6),
        (1, 3, 8), (_H, 4, 12)],
    9: [(1, 4, 5), (-1, 9, 12), (-1, 7, 10), (1, 8, 11), (-1, 3, 9),
        (1, 2, 5), (-1, 7, 8), (-1, 1, 4), (-1, 1, 2), (1, 10, 11)],
    10: [(-_H, 2, 6), (-_H, 2, 12), (1, 4, 9), (1, 8, 9), (1, 3, 10),
         (_H, 2, 3), (-1, 10, 12), (-_H, 3, 4), (-_H, 8, 12), (-_H, 4, 6),
         (-_H, 3, 8), (-_H, 4, 12)],
    11: [(1, 5, 9), (-1, 7, 9), (-_H, 3, 7), (-_H, 1, 3), (-_H, 5, 6),
         (1, 11, 12), (_H, 1, 12), (-1, 3, 11), (-_H, 1, 6),
         (-_H, 7, 12), (_H, 3, 5)],
    12: [(-1, 4, 5), (1, 2, 7), (1, 7, 10), (-1, 2, 11), (-1, 8, 11),
         (1, 1, 10), (-1, 5, 10), (-1, 6, 9), (-1, 5, 8), (1, 4, 7),
         (1, 1, 8), (-1, 2, 5), (1, 7, 8), (-1, 4, 11), (1, 1, 4),
         (1, 1, 2), (-1, 10, 11)],
}
_SL4_SUSPECT = {1, 10, 11}


def sl4_display_tensor():
    """The published torsion table as a (12, 12, 12) Fraction array with
    the same index convention as the computed torsion."""
    D = np.zeros((12, 12, 12), dtype=object)
    D[...] = Fraction(0)
    for c, terms in _SL4_DISPLAY.items():
        for coeff, i, j in terms:
            D[i - 1, j - 1, c - 1] += Fraction(coeff)
            D[j - 1, i - 1, c - 1] -= Fraction(coeff)
    return D


def sl4_suspect_components():
    """1-based component indices of the published table known to be
    garbled in print."""
    return set(_SL4_SUSPECT)


# -- catalogue --------------------------------------------------------------

def _conformal_point():
    return (Fraction(1),) + (Fraction(0),) * 7


_BUILDERS = {}


def _entry(key, build):
    _BUILDERS[key] = build
    return key


def _build_r12_x12():
    return Example("r12-x12", "frame", "hsH", "X12", {},
                   coframe=_frame_r12_x12())


def _build_r8_x123567():
    return Example("r8-x123567", "frame", "hsH", "X123567", {},
                   coframe=_frame_r8_x123567())


def _build_r8_conformal():
    return Example("r8-conformal-x47", "frame", "hsH", "X47",
                   {"hypercomplex": True}, point=_conformal_point(),
                   coframe=_frame_r8_conformal())


def _build_r8_x1567():
    return Example("r8-x1567", "frame", "hsH", "X1567",
                   {"symplectic": True}, coframe=_frame_r8_x1567())


def _build_r12_pure_x3():
    return Example("r12-pure-x3", "frame", "hsH", "X3", {},
                   coframe=_frame_r12_pure_x3())


def _build_quat_alpha():
    cf = _coframe_exp_group()
    return Example("quat-alpha-x17", "quaternionification", "hsH", "X17",
                   {"symplectic": True}, coframe=frames.quaternionify_alpha(cf),
                   input_coframe=cf, mode="alpha")


def _build_quat_beta():
    cf = _coframe_unipotent()
    return Example("quat-beta-x1235", "quaternionification", "hsH", "X1235",
                   {}, coframe=frames.quaternionify_beta(cf),
                   input_coframe=cf, mode="beta",
                   extras={"zero_components": ("X4", "X6", "X7")})


def _build_triangular():
    return Example("lie-triangular-x35", "homogeneous", "hsH", "X35", {},
                   homogeneous_data=_triangular_group())


def _build_sl4():
    return Example("sl4-sl2-x1234567", "homogeneous", "hsH", "X1234567", {},
                   homogeneous_data=_sl4_sl2(),
                   extras={"display": sl4_display_tensor,
                           "suspect": sl4_suspect_components})


for _k, _b in (
        ("r12-x12", _build_r12_x12),
        ("r8-x123567", _build_r8_x123567),
        ("r8-conformal-x47", _build_r8_conformal),
        ("r8-x1567", _build_r8_x1567),
        ("r12-pure-x3", _build_r12_pure_x3),
        ("lie-triangular-x35", _build_triangular),
        ("sl4-sl2-x1234567", _build_sl4),
        ("quat-alpha-x17", _build_quat_alpha),
        ("quat-beta-x1235", _build_quat_beta),
):
    _entry(_k, _b)


def keys():
    return list(_BUILDERS)


def get(key):
    if key not in _BUILDERS:
        raise RegistryError("unknown example %r (known: %s)"
                            % (key, ", ".join(keys())))
    return _BUILDERS[key]()
