"""Dense multilinear tensors over the model, with symmetrization and
alternation, the action of endomorphism-valued 1-forms, the Spencer
differential, and musical solves against omega0.

Coefficient arrays are numpy arrays over Fraction (dtype=object) or over
integer dtypes; integer inputs are exploited for fast exact einsums.
An endomorphism-valued 1-form A is stored as A[x, y, z] = component on
basis vector z of A(X_x) applied to X_y.
"""

from fractions import Fraction
from itertools import permutations
import json
import math

import numpy as np

from . import linalg

__all__ = ["Tensor", "spencer_delta", "one_form_action", "pi_omega",
           "omega_raise", "solve_a_tensor", "sym_alt", "exact_einsum"]


# ---------------------------------------------------------------------
# exact einsum with an integer fast path
# ---------------------------------------------------------------------

def _scaled_int(a):
    """View a rational array as (int64 array, denominator) if it fits."""
    a = np.asarray(a)
    if a.dtype != object:
        return a.astype(np.int64), 1
    m, d = linalg.scale_to_int(a)
    big = max((abs(v) for v in m.reshape(-1)), default=0)
    if big >= (1 << 62):
        return None, d
    return m.astype(np.int64), d


def exact_einsum(spec, *arrays):
    """Exact einsum over rational arrays.  Runs in int64 when a safe
    bound certifies no overflow, otherwise over python objects.
    Returns an object array of Fractions (or an exact scalar)."""
    scaled = [_scaled_int(a) for a in arrays]
    if all(s[0] is not None for s in scaled):
        nops = 1
        lhs = spec.split("->")[0].split(",")
        out_labels = spec.split("->")[1] if "->" in spec else ""
        sizes = {}
        for labels, arr in zip(lhs, arrays):
            for lab, size in zip(labels, np.asarray(arr).shape):
                sizes[lab] = size
        for lab, size in sizes.items():
            if lab not in out_labels:
                nops *= size
        bound = nops
        for m, _ in scaled:
            big = int(np.abs(m).max()) if m.size else 0
            bound *= max(big, 1)
        if bound < (1 << 62):
            out = np.einsum(spec, *[m for m, _ in scaled])
            den = math.prod(d for _, d in scaled)
            return _fractionize(out, den)
    objs = [linalg.frac_array(a) for a in arrays]
    out = np.einsum(*([spec] + objs))
    return out


def _fractionize(int_arr, den):
    if np.ndim(int_arr) == 0:
        return Fraction(int(int_arr), den)
    if den == 1:
        return int_arr.astype(object)
    return int_arr.astype(object) * Fraction(1, den)


# ---------------------------------------------------------------------
# Tensor container
# ---------------------------------------------------------------------

class Tensor:
    """Dense tensor with declared slot valences.

    valences: string over {'d', 'u'} per slot ('d' covariant / down,
    'u' contravariant / up).
    """

    def __init__(self, coeffs, valences):
        coeffs = np.asarray(coeffs)
        if coeffs.ndim != len(valences):
            raise ValueError("valence string length must match slot count")
        if any(v not in "du" for v in valences):
            raise ValueError("valences must be 'd' or 'u' per slot")
        dims = set(coeffs.shape)
        if len(dims) > 1:
            raise ValueError("all slots must share the model dimension")
        self.coeffs = coeffs
        self.valences = valences

    @property
    def dim(self):
        return self.coeffs.shape[0] if self.coeffs.ndim else 0

    def is_antisymmetric(self, i, j):
        sw = np.swapaxes(self.coeffs, i, j)
        return bool(np.equal(sw, -self.coeffs).all())

    def is_symmetric(self, i, j):
        sw = np.swapaxes(self.coeffs, i, j)
        return bool(np.equal(sw, self.coeffs).all())

    def to_json(self):
        flat = [_scalar_str(v) for v in
                np.asarray(self.coeffs, dtype=object).reshape(-1)]
        return json.dumps({
            "slots": len(self.valences),
            "valences": list(self.valences),
            "dim": self.dim,
            "coefficients": flat,
        })

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        dim = data["dim"]
        slots = data["slots"]
        flat = [Fraction(s) for s in data["coefficients"]]
        coeffs = np.array(flat, dtype=object).reshape((dim,) * slots)
        return cls(coeffs, "".join("d" if v == "d" else "u"
                                   for v in data["valences"]))


def _scalar_str(v):
    f = Fraction(v)
    return "%d/%d" % (f.numerator, f.denominator) if f.denominator != 1 \
        else str(f.numerator)


# ---------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------

def spencer_delta(A):
    """delta(A)(X,Y) = A(X)Y - A(Y)X, antisymmetric in the first slots."""
    A = _coeffs3(A)
    return A - np.swapaxes(A, 0, 1)


def _coeffs3(A):
    A = A.coeffs if isinstance(A, Tensor) else np.asarray(A)
    if A.ndim != 3:
        raise ValueError("endomorphism-valued 1-form must have 3 slots")
    return A


def one_form_action(alpha, F):
    """(alpha . F)(X_1..X_k)(u) = -sum_i F(X_1,..,alpha(u)X_i,..,X_k),
    returned with the new covariant slot u first."""
    alpha = _coeffs3(alpha)
    F = F.coeffs if isinstance(F, Tensor) else np.asarray(F)
    k = F.ndim
    if k + 2 > 26:
        raise ValueError("too many slots")
    labels = "abcdefghij"[:k]
    out = None
    for i in range(k):
        src = labels[:i] + "m" + labels[i + 1:]
        spec = "u%sm,%s->u%s" % (labels[i], src, labels)
        term = exact_einsum(spec, alpha, F)
        out = term if out is None else out + term
    return -out


def pi_omega(m, T):
    """Cyclic sum of omega0(T(X,Y), Z): the 3-form side of a torsion."""
    T = T.coeffs if isinstance(T, Tensor) else np.asarray(T)
    if T.ndim != 3:
        raise ValueError("torsion tensor must have 3 slots")
    if not np.equal(np.swapaxes(T, 0, 1), -T).all():
        raise ValueError("torsion must be antisymmetric in the first slots")
    w = m.omega0
    lowered = exact_einsum("xyw,wz->xyz", T, w)
    return lowered + np.transpose(lowered, (1, 2, 0)) \
        + np.transpose(lowered, (2, 0, 1))


def omega_raise(m, C):
    """A with omega0(A(X,Y), Z) = C(X,Y,Z), raising the last slot."""
    C = C.coeffs if isinstance(C, Tensor) else np.asarray(C)
    raise_mat = linalg.inv(linalg.frac_array(np.asarray(m.omega0).T))
    return exact_einsum("xyz,wz->xyw", C, raise_mat)


def solve_a_tensor(m, C):
    """A with omega0(A(X,Y), Z) = C(X,Y,Z)/2 (the adapted-connection
    normalization of a covariant derivative of omega)."""
    C = C.coeffs if isinstance(C, Tensor) else np.asarray(C)
    if not np.equal(np.swapaxes(C, 1, 2), -C).all():
        raise ValueError("input must be skew in the last two slots")
    return omega_raise(m, C) * Fraction(1, 2)


def sym_alt(T, slots, mode):
    """Symmetrize or alternate over the chosen slots with 1/k! weight."""
    tensor_input = isinstance(T, Tensor)
    coeffs = T.coeffs if tensor_input else np.asarray(T)
    if tensor_input:
        vals = {T.valences[s] for s in slots}
        if len(vals) > 1:
            raise ValueError("chosen slots must share valence")
    if mode not in ("symmetrize", "alternate"):
        raise ValueError("mode must be 'symmetrize' or 'alternate'")
    slots = list(slots)
    k = len(slots)
    acc = None
    for perm in permutations(range(k)):
        axes = list(range(coeffs.ndim))
        for pos, p in zip(slots, perm):
            axes[pos] = slots[p]
        term = np.transpose(coeffs, axes)
        if mode == "alternate" and _parity(perm) < 0:
            term = -term
        acc = term if acc is None else acc + term
    out = acc * Fraction(1, math.factorial(k)) if acc.dtype == object \
        else linalg.frac_array(acc) * Fraction(1, math.factorial(k))
    if tensor_input:
        return Tensor(out, T.valences)
    return out


def _parity(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
