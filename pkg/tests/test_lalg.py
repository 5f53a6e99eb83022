import numpy as np
import pytest

from woodscat import LuFactorization, SingularMatrixError, lu_solve, svd_extremes
from woodscat.exceptions import NumericalFailureError


def test_identity_solve():
    rhs = np.array([1.0, 2.0, 3.0], dtype=complex)
    assert np.allclose(lu_solve(np.eye(3, dtype=complex), rhs), rhs)


def test_diagonal_solve():
    x = lu_solve(np.diag([2.0, 2.0]).astype(complex), np.array([1.0, 1.0]))
    assert np.allclose(x, [0.5, 0.5])


def test_random_residual(rng):
    n = 50
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    M /= np.sqrt(2)
    rhs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = lu_solve(M, rhs)
    resid = np.abs(M @ x - rhs)
    bound = 1e-11 * (np.abs(M) @ np.abs(x) + np.abs(rhs))
    assert np.all(resid <= bound)


def test_solve_recovers_solution(rng):
    n = 40
    M = np.eye(n, dtype=complex) + 0.3 * (rng.standard_normal((n, n))
                                          + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    got = lu_solve(M, M @ x)
    assert np.max(np.abs(got - x)) <= 1e-10 * np.max(np.abs(x))


def test_multi_rhs_reuses_factorization(rng):
    n = 20
    M = np.eye(n, dtype=complex) + 0.2 * rng.standard_normal((n, n))
    lu = LuFactorization(M)
    B = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
    X = lu.solve(B)
    assert np.max(np.abs(M @ X - B)) <= 1e-11


def test_singular_matrix_detected():
    M = np.zeros((3, 3), dtype=complex)
    with pytest.raises(SingularMatrixError):
        lu_solve(M, np.ones(3))
    with pytest.raises(SingularMatrixError):
        LuFactorization(np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex))


def test_nonfinite_rejected():
    M = np.eye(2, dtype=complex)
    M[0, 0] = np.nan
    with pytest.raises(SingularMatrixError):
        LuFactorization(M)


def test_svd_diagonal():
    assert svd_extremes(np.diag([3.0, 1.0]).astype(complex)) == (1.0, 3.0)


def test_svd_unitary():
    n = 4
    F = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / 2.0
    smin, smax = svd_extremes(F)
    assert smin == pytest.approx(1.0, abs=1e-12)
    assert smax == pytest.approx(1.0, abs=1e-12)


def test_svd_against_power_iteration_oracle(rng):
    # independent route: power iteration on M^H M for sigma_max
    n = 30
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    smin, smax = svd_extremes(M)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    H = M.conj().T @ M
    for _ in range(10_000):
        w = H @ v
        nw = np.linalg.norm(w)
        if np.linalg.norm(w / nw - v) < 1e-13:
            v = w / nw
            break
        v = w / nw
    sigma_oracle = np.sqrt(np.linalg.norm(H @ v))
    assert smax == pytest.approx(float(sigma_oracle), rel=1e-6)
    assert smax >= smin >= 0.0


def test_svd_dominates_random_probe(rng):
    n = 25
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    _, smax = svd_extremes(M)
    for _ in range(5):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        assert smax + 1e-12 >= np.linalg.norm(M @ v) / np.linalg.norm(v)


def test_svd_requires_square():
    with pytest.raises(NumericalFailureError):
        svd_extremes(np.ones((3, 2), dtype=complex))
