from fractions import Fraction

import numpy as np
import pytest

from shl import tensors
from shl.tensors import Tensor, exact_einsum


def _random_frac(rng, shape):
    out = np.empty(shape, dtype=object)
    flat = out.reshape(-1)
    for i in range(flat.size):
        flat[i] = Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
    return out


def test_exact_einsum_matches_object_einsum(rng):
    a = _random_frac(rng, (3, 4))
    b = _random_frac(rng, (4, 5))
    got = exact_einsum("ij,jk->ik", a, b)
    expected = np.einsum("ij,jk->ik", a, b)
    assert (got == expected).all()


def test_exact_einsum_overflow_path(rng):
    big = Fraction(10 ** 25)
    a = _random_frac(rng, (2, 2)) * big
    b = _random_frac(rng, (2, 2)) * big
    got = exact_einsum("ij,jk->ik", a, b)
    expected = np.einsum("ij,jk->ik", a, b)
    assert (got == expected).all()


def test_exact_einsum_int_inputs():
    a = np.arange(6).reshape(2, 3)
    b = np.arange(12).reshape(3, 4)
    got = exact_einsum("ij,jk->ik", a, b)
    assert (np.asarray(got, dtype=object) == (a @ b).astype(object)).all()


def test_spencer_delta_antisymmetry(rng):
    A = _random_frac(rng, (4, 4, 4))
    d = tensors.spencer_delta(A)
    assert (np.swapaxes(d, 0, 1) == -d).all()
    assert (d == A - np.swapaxes(A, 0, 1)).all()


def test_one_form_action_single_slot(rng):
    # acting on a covector c: (alpha . c)(u)(y) = -c(alpha(u) y)
    dim = 4
    alpha = _random_frac(rng, (dim, dim, dim))
    c = _random_frac(rng, (dim,))
    out = tensors.one_form_action(alpha, c)
    expected = -exact_einsum("uyz,z->uy", alpha, c)
    assert (out == expected).all()


def test_one_form_action_leibniz_on_product(rng):
    # action on a (0,2)-tensor built as c (x) d obeys the Leibniz rule
    dim = 4
    alpha = _random_frac(rng, (dim, dim, dim))
    c = _random_frac(rng, (dim,))
    d = _random_frac(rng, (dim,))
    F = exact_einsum("y,z->yz", c, d)
    out = tensors.one_form_action(alpha, F)
    part1 = exact_einsum("uy,z->uyz", tensors.one_form_action(alpha, c), d)
    part2 = exact_einsum("uz,y->uyz", tensors.one_form_action(alpha, d), c)
    assert (out == part1 + part2).all()


def test_pi_omega_is_cyclic_lowering(m2, rng):
    dim = m2.dim
    T = _random_frac(rng, (dim, dim, dim))
    T = T - np.swapaxes(T, 0, 1)
    low = exact_einsum("xyw,wz->xyz", T, np.asarray(m2.omega0, dtype=object))
    expected = low + np.transpose(low, (1, 2, 0)) + np.transpose(low, (2, 0, 1))
    got = tensors.pi_omega(m2, T)
    assert (got == expected).all()
    # the result is a 3-form
    assert (np.transpose(got, (1, 0, 2)) == -got).all()
    assert (np.transpose(got, (0, 2, 1)) == -got).all()


def test_pi_omega_rejects_non_antisymmetric(m2, rng):
    T = _random_frac(rng, (m2.dim,) * 3)
    with pytest.raises(ValueError):
        tensors.pi_omega(m2, T + np.swapaxes(T, 0, 1) + 1)


def test_omega_raise_inverts_lowering(m2, rng):
    dim = m2.dim
    A = _random_frac(rng, (dim, dim, dim))
    C = exact_einsum("xyw,wz->xyz", A, np.asarray(m2.omega0, dtype=object))
    got = tensors.omega_raise(m2, C)
    assert (got == A).all()


def test_solve_a_tensor_halves(m2, rng):
    dim = m2.dim
    A = _random_frac(rng, (dim, dim, dim))
    C = exact_einsum("xyw,wz->xyz", A, np.asarray(m2.omega0, dtype=object))
    C = C - np.swapaxes(C, 1, 2)
    got = tensors.solve_a_tensor(m2, C)
    back = exact_einsum("xyw,wz->xyz", got * 2,
                        np.asarray(m2.omega0, dtype=object))
    assert (back == C).all()


def test_sym_alt(rng):
    a = _random_frac(rng, (3, 3, 3))
    sym = tensors.sym_alt(a, (0, 1), "symmetrize")
    assert (np.swapaxes(sym, 0, 1) == sym).all()
    alt = tensors.sym_alt(a, (0, 1), "alternate")
    assert (np.swapaxes(alt, 0, 1) == -alt).all()
    assert (sym + alt == a).all()


def test_tensor_json_round_trip(rng):
    coeffs = _random_frac(rng, (3, 3))
    t = Tensor(coeffs, "du")
    again = Tensor.from_json(t.to_json())
    assert again.valences == "du"
    assert (np.asarray(again.coeffs, dtype=object) == coeffs).all()
