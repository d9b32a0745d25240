import numpy as np
import pytest

from newtonscope.numerics import (
    LinearSlice,
    SingularMatrixError,
    empty_slice,
    lu_solve,
    make_rng,
    numeric_rank,
    random_complex_array,
    random_gamma,
    random_slice,
    scaled_solve,
)


def test_lu_solve_complex_system():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    x = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.allclose(lu_solve(a, a @ x), x)


def test_lu_solve_singular_raises():
    with pytest.raises(SingularMatrixError):
        lu_solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.array([1.0, 0.0]))
    with pytest.raises(SingularMatrixError):
        lu_solve(np.zeros((2, 2)), np.ones(2))


def test_scaled_solve_handles_badly_scaled_rows():
    a = np.array([[1e12, 2e12], [3e-9, -1e-9]], dtype=complex)
    x = np.array([1.0 + 1j, -2.0])
    assert np.allclose(scaled_solve(a, a @ x), x)


def test_numeric_rank():
    a = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]], dtype=complex)
    assert numeric_rank(a) == 2
    assert numeric_rank(np.zeros((2, 2))) == 0


def test_make_rng_streams_are_reproducible_and_distinct():
    assert make_rng(7).random() == make_rng(7).random()
    assert make_rng(7, 1).random() != make_rng(7, 2).random()


def test_random_gamma_avoids_real_axis():
    rng = make_rng(1)
    for _ in range(200):
        g = random_gamma(rng)
        assert abs(abs(g) - 1) < 1e-12
        assert abs(g.imag) > 0.09


def test_slice_parametrization_lies_on_slice():
    rng = make_rng(2)
    slice_ = random_slice(4, 2, rng)
    base, basis = slice_.parametrize()
    assert basis.shape == (4, 2)
    assert np.allclose(slice_.evaluate(base), 0)
    for coeffs in rng.normal(size=(3, 2)):
        assert np.allclose(slice_.evaluate(base + basis @ coeffs), 0)


def test_slice_validation_and_json():
    with pytest.raises(ValueError):
        LinearSlice(np.array([[1, 2, 0], [2, 4, 1]]))
    with pytest.raises(ValueError):
        random_slice(2, 3, make_rng(0))
    empty = empty_slice(3)
    assert empty.k == 0 and empty.n == 3
    restored = LinearSlice.from_json(empty.to_json(), n=3)
    assert restored.n == 3
    slice_ = random_slice(3, 2, make_rng(4))
    assert np.allclose(LinearSlice.from_json(slice_.to_json()).coefficients, slice_.coefficients)


def test_lu_residual_bound_on_random_systems():
    rng = make_rng(3)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(1, 7))
        a = random_complex_array((n, n), rng)
        if np.linalg.cond(a) >= 1e6:
            continue
        rhs = random_complex_array(n, rng) * rng.uniform(0.1, 10.0)
        x = lu_solve(a, rhs)
        assert np.max(np.abs(a @ x - rhs)) <= 1e-10 * (1 + np.max(np.abs(rhs)))
        checked += 1


def test_lu_solve_small_examples():
    assert np.allclose(lu_solve(np.eye(3), np.array([1.0, 2.0, 3.0])), [1, 2, 3])
    assert np.allclose(lu_solve(np.array([[2.0, 0.0], [0.0, 4.0]]), np.array([2.0, 8.0])), [1, 2])
