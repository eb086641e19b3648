from fractions import Fraction

import numpy as np
import pytest

from shl import linalg


def _random_rational_matrix(rng, rows, cols, den=5):
    a = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            a[i, j] = Fraction(int(rng.integers(-9, 10)),
                               int(rng.integers(1, den)))
    return a


def test_rref_reproduces_row_space(rng):
    a = _random_rational_matrix(rng, 5, 7)
    r, pivots = linalg.rref(a)
    # pivot columns carry an identity pattern
    for row_idx, c in enumerate(pivots):
        assert r[row_idx, c] == 1
        for other in range(5):
            if other != row_idx:
                assert r[other, c] == 0
    # row spaces agree: stacking leaves the rank unchanged
    stacked = np.concatenate([a, r], axis=0)
    assert linalg.rank(stacked) == linalg.rank(a) == len(pivots)


def test_nullspace_annihilates(rng):
    a = _random_rational_matrix(rng, 4, 8)
    ns = linalg.nullspace(a)
    assert ns.shape[1] == 8 - linalg.rank(a)
    prod = a @ ns
    assert not any(v for v in prod.reshape(-1))


def test_solve_and_inverse(rng):
    for _ in range(5):
        a = _random_rational_matrix(rng, 5, 5)
        if linalg.rank(a) < 5:
            continue
        b = _random_rational_matrix(rng, 5, 1)[:, 0]
        x = linalg.solve(a, b)
        assert all(sum(a[i, j] * x[j] for j in range(5)) == b[i]
                   for i in range(5))
        inv = linalg.inv(a)
        eye = a @ inv
        for i in range(5):
            for j in range(5):
                assert eye[i, j] == (1 if i == j else 0)


def test_solve_inconsistent_returns_none():
    a = np.array([[Fraction(1), Fraction(2)],
                  [Fraction(2), Fraction(4)]], dtype=object)
    b = np.array([Fraction(1), Fraction(3)], dtype=object)
    assert linalg.solve(a, b) is None


def test_inv_singular_raises():
    a = np.array([[Fraction(1), Fraction(2)],
                  [Fraction(2), Fraction(4)]], dtype=object)
    with pytest.raises(ValueError):
        linalg.inv(a)


def test_scale_to_int_round_trip(rng):
    a = _random_rational_matrix(rng, 3, 4)
    m, d = linalg.scale_to_int(a)
    for i in range(3):
        for j in range(4):
            assert Fraction(m[i, j], d) == a[i, j]


def test_int_matmul_small_and_huge(rng):
    a = rng.integers(-100, 100, size=(6, 5)).astype(object)
    b = rng.integers(-100, 100, size=(5, 7)).astype(object)
    expected = a @ b
    got = linalg.int_matmul(a, b)
    assert (got == expected).all()
    # entries far beyond int64
    big = 10 ** 30
    a2 = a * big
    b2 = b * big
    got2 = linalg.int_matmul(a2, b2)
    assert (got2 == expected * big * big).all()


def test_rank_mod_p_matches_rational_rank(rng):
    a = rng.integers(-5, 6, size=(10, 14)).astype(object)
    assert linalg.rank_mod_p(a) == linalg.rank(linalg.frac_array(a))


def test_column_space_membership(rng):
    a = _random_rational_matrix(rng, 6, 3)
    space = linalg.ColumnSpace(a)
    combo = a[:, 0] * Fraction(2, 3) - a[:, 2] * Fraction(5)
    assert space.contains(combo)
    coords = space.coordinates(combo)
    assert coords is not None
    outside = combo.copy()
    outside[0] = outside[0] + 1
    if not space.contains(outside):
        assert space.coordinates(outside) is None
    red = space.reduce(combo)
    assert not any(red)


def test_column_space_reduce_is_canonical(rng):
    a = _random_rational_matrix(rng, 6, 3)
    space = linalg.ColumnSpace(a)
    v = _random_rational_matrix(rng, 6, 1)[:, 0]
    shift = a[:, 1] * Fraction(7, 2)
    r1 = space.reduce(v)
    r2 = space.reduce(v + shift)
    assert (r1 == r2).all()


def test_frac_array_normalizes_numpy_ints():
    a = np.array([[np.int64(2), 3]], dtype=object)
    out = linalg.frac_array(a)
    assert type(out[0, 0]) is Fraction
    assert type(out[0, 0].numerator) is int
