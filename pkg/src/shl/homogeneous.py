"""Reductive homogeneous data: rational structure constants, a reductive
split, the identification of the complement with the standard model, and
the torsion/curvature of an invariant connection at the base point.

Conventions: the structure-constant array C satisfies
[x_i, x_j] = sum_k C[i, j, k] x_k on the ambient Lie algebra basis.
The identification `alpha_eh` sends complement coordinates (in the
declared complement basis) to standard-model coordinates.  The optional
connection map `alpha_nabla` lists one model-endomorphism matrix per
standard basis vector; omitting it selects the canonical connection.
The isotropy map `di` lists one matrix per subalgebra basis vector; when
omitted it is computed as the transported adjoint action.
"""

from fractions import Fraction
import json

import numpy as np

from . import linalg, model, reptheory, tensors

__all__ = ["HomogeneousData", "HomogeneousError",
           "nomizu_torsion_curvature", "classify_homogeneous"]


class HomogeneousError(ValueError):
    """Validation failure; the message names the violated identity and
    the offending basis indices."""


def _frac_matrix(rows, what):
    try:
        return linalg.frac_array(np.array(
            [[Fraction(v) for v in row] for row in rows], dtype=object))
    except (TypeError, ValueError) as exc:
        raise HomogeneousError("%s: malformed rational matrix" % what) \
            from exc


class HomogeneousData:
    """A Lie algebra with a chosen subalgebra, reductive complement, and
    identification of the complement with the standard model."""

    def __init__(self, dim, structure, l_basis, m_basis, alpha_eh,
                 alpha_nabla=None, di=None):
        self.dim = dim
        self.structure = linalg.frac_array(structure)
        if self.structure.shape != (dim, dim, dim):
            raise HomogeneousError("structure constants must form a "
                                   "%d^3 array" % dim)
        self.l_basis = linalg.frac_array(l_basis) if np.size(l_basis) \
            else np.zeros((dim, 0), dtype=object)
        self.m_basis = linalg.frac_array(m_basis)
        if self.l_basis.shape[0] != dim or self.m_basis.shape[0] != dim:
            raise HomogeneousError("basis columns must live in the "
                                   "%d-dimensional algebra" % dim)
        self.dim_l = self.l_basis.shape[1]
        self.dim_m = self.m_basis.shape[1]
        if self.dim_l + self.dim_m != dim:
            raise HomogeneousError(
                "subalgebra and complement dimensions %d + %d != %d"
                % (self.dim_l, self.dim_m, dim))
        if self.dim_m % 4:
            raise HomogeneousError("complement dimension must be 4n")
        self.n = self.dim_m // 4
        self.alpha_eh = linalg.frac_array(alpha_eh)
        if self.alpha_eh.shape != (self.dim_m, self.dim_m):
            raise HomogeneousError("identification must be a %d x %d "
                                   "matrix" % (self.dim_m, self.dim_m))
        self.alpha_nabla = None
        if alpha_nabla is not None:
            self.alpha_nabla = [linalg.frac_array(a) for a in alpha_nabla]
            if len(self.alpha_nabla) != self.dim_m or any(
                    a.shape != (self.dim_m, self.dim_m)
                    for a in self.alpha_nabla):
                raise HomogeneousError("connection map needs one %d x %d "
                                       "matrix per model basis vector"
                                       % (self.dim_m, self.dim_m))
        self.di_given = None
        if di is not None:
            self.di_given = [linalg.frac_array(a) for a in di]
            if len(self.di_given) != self.dim_l:
                raise HomogeneousError("isotropy map needs one matrix per "
                                       "subalgebra basis vector")
        self._prepare()

    # -- plumbing -------------------------------------------------------

    def _prepare(self):
        full = np.concatenate([self.l_basis, self.m_basis], axis=1)
        if linalg.rank(full) != self.dim:
            raise HomogeneousError("subalgebra and complement bases do not "
                                   "span the algebra")
        self._full_inv = linalg.inv(full)  # coordinates: (l part, m part)
        if linalg.rank(self.alpha_eh) != self.dim_m:
            raise HomogeneousError("identification matrix is singular")
        self._alpha_inv = linalg.inv(self.alpha_eh)
        # model basis vectors as ambient algebra elements
        self._model_in_k = self.m_basis @ self._alpha_inv
        self.model = model.standard_model(self.n) if self.n >= 2 else None

    def bracket(self, x, y):
        return tensors.exact_einsum("ijk,i,j->k", self.structure, x, y)

    def split(self, v):
        """(l coordinates, m coordinates) of an ambient vector."""
        coords = self._full_inv @ v
        return coords[:self.dim_l], coords[self.dim_l:]

    def di_matrix(self, a):
        """Transported adjoint action of the a-th subalgebra basis vector
        on the model: the matrix of alpha o ad(Y_a)|_m o alpha^{-1}."""
        Y = self.l_basis[:, a]
        cols = []
        for c in range(self.dim_m):
            w = self.bracket(Y, self._model_in_k[:, c])
            lpart, mpart = self.split(w)
            if any(lpart):
                raise HomogeneousError(
                    "reductivity [l, m] in m fails for subalgebra vector %d "
                    "against complement vector %d" % (a, c))
            cols.append(self.alpha_eh @ mpart)
        return np.stack(cols, axis=1)

    # -- validation -------------------------------------------------------

    def validate(self, kind="hsH"):
        self._check_antisymmetry()
        self._check_jacobi()
        self._check_subalgebra()
        self._check_reductivity()
        di = [self.di_matrix(a) for a in range(self.dim_l)]
        if self.di_given is not None:
            for a, (given, computed) in enumerate(zip(self.di_given, di)):
                if not (given == computed).all():
                    raise HomogeneousError(
                        "isotropy matrix %d does not equal the transported "
                        "adjoint action" % a)
        self._check_di_homomorphism(di)
        self._check_di_range(di, kind)
        if self.alpha_nabla is not None:
            self._check_nabla_range(kind)
        return di

    def _check_antisymmetry(self):
        C = self.structure
        sw = np.swapaxes(C, 0, 1)
        if not (sw == -C).all():
            bad = next((i, j) for i in range(self.dim)
                       for j in range(self.dim)
                       if any(C[i, j] + C[j, i]))
            raise HomogeneousError(
                "bracket antisymmetry [x_%d, x_%d] = -[x_%d, x_%d] fails"
                % (bad[0], bad[1], bad[1], bad[0]))

    def _check_jacobi(self):
        C = self.structure
        # [[x_i, x_j], x_k] summed cyclically
        comp = tensors.exact_einsum("ijm,mkz->ijkz", C, C)
        total = comp + np.transpose(comp, (1, 2, 0, 3)) \
            + np.transpose(comp, (2, 0, 1, 3))
        if np.any(total):
            bad = next((i, j, k) for i in range(self.dim)
                       for j in range(self.dim) for k in range(self.dim)
                       if any(total[i, j, k]))
            raise HomogeneousError(
                "Jacobi identity fails on the basis triple (x_%d, x_%d, x_%d)"
                % bad)

    def _check_subalgebra(self):
        for a in range(self.dim_l):
            for b in range(a + 1, self.dim_l):
                w = self.bracket(self.l_basis[:, a], self.l_basis[:, b])
                _, mpart = self.split(w)
                if any(mpart):
                    raise HomogeneousError(
                        "[l, l] in l fails for subalgebra vectors (%d, %d)"
                        % (a, b))

    def _check_reductivity(self):
        for a in range(self.dim_l):
            for b in range(self.dim_m):
                w = self.bracket(self.l_basis[:, a], self.m_basis[:, b])
                lpart, _ = self.split(w)
                if any(lpart):
                    raise HomogeneousError(
                        "reductivity [l, m] in m fails for subalgebra "
                        "vector %d against complement vector %d" % (a, b))

    def _check_di_homomorphism(self, di):
        for a in range(self.dim_l):
            for b in range(a + 1, self.dim_l):
                w = self.bracket(self.l_basis[:, a], self.l_basis[:, b])
                lpart, _ = self.split(w)
                target = sum((lpart[c] * di[c] for c in range(self.dim_l)),
                             np.zeros((self.dim_m, self.dim_m),
                                      dtype=object) + Fraction(0))
                comm = di[a] @ di[b] - di[b] @ di[a]
                if not (comm == target).all():
                    raise HomogeneousError(
                        "isotropy map is not a Lie algebra homomorphism on "
                        "the subalgebra pair (%d, %d)" % (a, b))

    def _gauge_space(self, kind):
        if self.model is None:
            raise HomogeneousError("model dimension below the supported "
                                   "range (need n >= 2)")
        so = reptheory.lie_algebra_basis(self.model, "so_star").basis
        if kind == "qsH":
            so = so + reptheory.lie_algebra_basis(self.model, "sp1").basis
        flat = np.stack([np.asarray(b, dtype=object).reshape(-1)
                         for b in so], axis=1)
        return linalg.ColumnSpace(linalg.frac_array(flat))

    def _check_di_range(self, di, kind):
        space = self._gauge_space(kind)
        for a, mat in enumerate(di):
            if not space.contains(mat.reshape(-1)):
                raise HomogeneousError(
                    "isotropy matrix %d does not lie in the structure "
                    "algebra (%s)" % (a, kind))

    def _check_nabla_range(self, kind):
        space = self._gauge_space(kind)
        for a, mat in enumerate(self.alpha_nabla):
            if not space.contains(mat.reshape(-1)):
                raise HomogeneousError(
                    "connection matrix %d does not lie in the structure "
                    "algebra (%s)" % (a, kind))

    # -- JSON -------------------------------------------------------------

    def to_json(self):
        sparse = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    v = self.structure[i, j, k]
                    if v:
                        sparse.append([i, j, k, _fstr(v)])
        data = {
            "dim": self.dim,
            "structure": sparse,
            "subalgebra_basis": _mat_json(self.l_basis),
            "complement_basis": _mat_json(self.m_basis),
            "identification": _mat_json(self.alpha_eh),
        }
        if self.alpha_nabla is not None:
            data["connection_map"] = [_mat_json(a) for a in self.alpha_nabla]
        if self.di_given is not None:
            data["isotropy_map"] = [_mat_json(a) for a in self.di_given]
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        for field in ("dim", "structure", "subalgebra_basis",
                      "complement_basis", "identification"):
            if field not in data:
                raise HomogeneousError("missing field %r (/%s)"
                                       % (field, field))
        dim = data["dim"]
        C = np.zeros((dim, dim, dim), dtype=object)
        C[...] = Fraction(0)
        for entry in data["structure"]:
            if len(entry) != 4:
                raise HomogeneousError("/structure: entries must be "
                                       "[i, j, k, value]")
            i, j, k, v = entry
            C[i, j, k] = Fraction(v)
        return cls(
            dim, C,
            _frac_matrix(data["subalgebra_basis"], "/subalgebra_basis")
            if data["subalgebra_basis"] else np.zeros((dim, 0), dtype=object),
            _frac_matrix(data["complement_basis"], "/complement_basis"),
            _frac_matrix(data["identification"], "/identification"),
            alpha_nabla=[_frac_matrix(a, "/connection_map")
                         for a in data["connection_map"]]
            if "connection_map" in data else None,
            di=[_frac_matrix(a, "/isotropy_map")
                for a in data["isotropy_map"]]
            if "isotropy_map" in data else None,
        )


def _fstr(v):
    f = Fraction(v)
    return "%d/%d" % (f.numerator, f.denominator) if f.denominator != 1 \
        else str(f.numerator)


def _mat_json(a):
    return [[_fstr(v) for v in row] for row in np.asarray(a, dtype=object)]


def nomizu_torsion_curvature(hd, kind="hsH"):
    """Torsion and curvature of the invariant connection at the base
    point, in standard-model coordinates.

    Returns (T, R): T[a, b, z] is the z-component of T(v_a, v_b); R has
    shape (dim_m, dim_m, dim_m, dim_m) with R[a, b] the endomorphism
    matrix of the curvature on the pair (v_a, v_b)."""
    di = hd.validate(kind)
    d = hd.dim_m
    zero_m = np.zeros((d, d), dtype=object) + Fraction(0)
    nab = hd.alpha_nabla or [zero_m] * d

    T = np.zeros((d, d, d), dtype=object)
    T[...] = Fraction(0)
    R = np.zeros((d, d, d, d), dtype=object)
    R[...] = Fraction(0)
    for a in range(d):
        for b in range(a + 1, d):
            w = hd.bracket(hd._model_in_k[:, a], hd._model_in_k[:, b])
            lpart, mpart = hd.split(w)
            bm = hd.alpha_eh @ mpart
            ea = np.zeros(d, dtype=object) + Fraction(0)
            ea[a] = Fraction(1)
            eb = np.zeros(d, dtype=object) + Fraction(0)
            eb[b] = Fraction(1)
            t = nab[a] @ eb - nab[b] @ ea - bm
            T[a, b] = t
            T[b, a] = -t
            nabla_bm = sum((bm[c] * nab[c] for c in range(d)), zero_m)
            di_l = sum((lpart[c] * di[c] for c in range(hd.dim_l)), zero_m)
            r = nab[a] @ nab[b] - nab[b] @ nab[a] - nabla_bm - di_l
            R[a, b] = r
            R[b, a] = -r
    return T, R


def classify_homogeneous(hd, kind="hsH"):
    T, _ = nomizu_torsion_curvature(hd, kind)
    return reptheory.classify_torsion(hd.model, T, kind)
