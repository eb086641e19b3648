from fractions import Fraction

import numpy as np

from shl import connections, linalg, model, reptheory, tensors


def _random_frac_matrix(rng, dim):
    out = np.empty((dim, dim), dtype=object)
    for i in range(dim):
        for j in range(dim):
            out[i, j] = Fraction(int(rng.integers(-5, 6)))
    return out


def test_pi_11_is_commutant_projection(m2, rng):
    B = _random_frac_matrix(rng, m2.dim)
    P = connections.pi_11(m2, B)
    # idempotent
    assert (connections.pi_11(m2, P) == P).all()
    # image commutes with the triple
    for Ja in m2.J:
        Jf = linalg.frac_array(Ja)
        assert ((Jf @ P) == (P @ Jf)).all()
    # fixed on elements commuting with the whole triple
    alg = reptheory.lie_algebra_basis(m2, "gl_nH")
    for xi in alg.basis[:4]:
        Xf = linalg.frac_array(xi)
        assert (connections.pi_11(m2, Xf) == Xf).all()


def test_sym_asym_split(m2, rng):
    B = _random_frac_matrix(rng, m2.dim)
    s = connections.sym_endo(m2, B)
    a = connections.asym_endo(m2, B)
    assert ((s + a) == linalg.frac_array(B)).all()
    om = linalg.frac_array(m2.omega0)
    Ls = np.transpose(s) @ om
    La = np.transpose(a) @ om
    assert (Ls.T == Ls).all()
    assert (La.T == -La).all()


def test_sp1_part_reproduces_triple(m2):
    for Ja in m2.J:
        part = connections.sp1_part(m2, linalg.frac_array(Ja))
        assert (part == linalg.frac_array(Ja)).all()


def test_rank_one_splits_into_sym_and_asym(m2, rng):
    Z = np.array([Fraction(int(v)) for v in rng.integers(-4, 5, m2.dim)],
                 dtype=object)
    for x in (0, 3, m2.dim - 1):
        full = connections.rank_one_pi11(m2, x, Z)
        s = connections.pi_s(m2, x, Z)
        a = connections.pi_a(m2, x, Z)
        assert ((s + a) == full).all()


def test_w_projections_decompose(m2, rng):
    dim = m2.dim
    A = np.empty((dim, dim, dim), dtype=object)
    for x in range(dim):
        A[x] = _random_frac_matrix(rng, dim)
    w = connections.w_project(m2, A)
    total = w.w1 + w.w2 + w.w3 + w.w4
    rem = A - total
    # the remainder takes values in so*(2n) + sp(1)
    alg = reptheory.lie_algebra_basis(m2, "so_star_plus_sp1")
    flat = np.stack([np.asarray(b, dtype=object).reshape(-1)
                     for b in alg.basis], axis=1)
    space = linalg.ColumnSpace(linalg.frac_array(flat))
    for x in range(dim):
        assert space.contains(rem[x].T.reshape(-1))
    # projections are idempotent as a family
    w2 = connections.w_project(m2, total)
    assert (w2.w1 == w.w1).all()
    assert (w2.w2 == w.w2).all()
    assert (w2.w3 == w.w3).all()
    assert (w2.w4 == w.w4).all()


def test_splitting_round_trip_all_types(m2, dt2, rng):
    for idx in (1, 2, 3, 4):
        alpha = connections.pure_element(m2, idx, rng)
        theta = connections.act_on_phi0(m2, alpha, dt2)
        s = connections.splitting_s(m2, theta, dt2)
        again = connections.act_on_phi0(m2, s, dt2)
        assert (again == theta).all()


def test_hhat_contraction_coefficients_sample(m2, dt2, rng):
    n = m2.n
    ks = {1: Fraction(-8 * (2 * n - 1)), 2: Fraction(-8 * (n - 1)),
          3: Fraction(16 * n, 3), 4: Fraction(-8 * (n + 1), 3)}
    om = np.asarray(m2.omega0, dtype=object)
    for idx in (1, 2, 3, 4):
        alpha = connections.pure_element(m2, idx, rng)
        theta = connections.act_on_phi0(m2, alpha, dt2)
        c = connections.hhat_contract(m2, theta, dt2)
        lowered = tensors.exact_einsum("xyw,wz->xyz", alpha, om)
        assert (c == ks[idx] * lowered).all()


def test_avol_correction_is_trace_free(m2, dt2, rng):
    dim = m2.dim
    C = np.empty((dim, dim, dim), dtype=object)
    for x in range(dim):
        mat = _random_frac_matrix(rng, dim)
        C[x] = mat - mat.T
    A = connections.avol_correction(m2, C, dt2)
    tau = connections.trace2(A)
    assert not any(tau)
    # the construction is linear in the input
    doubled = connections.avol_correction(m2, C * Fraction(2), dt2)
    assert (doubled == A * Fraction(2)).all()


def test_conformal_change_classifies_as_vector_types(m2, rng):
    df = np.array([Fraction(int(v)) for v in rng.integers(-3, 4, m2.dim)],
                  dtype=object)
    while not any(df):
        df = np.array([Fraction(int(v)) for v in rng.integers(-3, 4, m2.dim)],
                      dtype=object)
    delta = connections.conformal_change_delta(m2, df)
    T = tensors.spencer_delta(delta)
    report = reptheory.classify_torsion(m2, T, "hsH")
    zeros = {lab: zero for lab, _, zero in report.components}
    assert zeros["X1"] and zeros["X2"] and zeros["X3"] and zeros["X5"] \
        and zeros["X6"]
    assert not (zeros["X4"] and zeros["X7"])
    assert report.flags["hypercomplex"]
