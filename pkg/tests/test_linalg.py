import numpy as np
import pytest

from spinorsim.linalg import tridiagonal_eigh


@pytest.mark.parametrize("n", [1, 2, 7, 60])
def test_matches_dense_solver(n):
    rng = np.random.default_rng(n)
    d, e = rng.normal(size=n), rng.normal(size=n - 1)
    w, v = tridiagonal_eigh(d, e)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(w, np.linalg.eigvalsh(T), atol=1e-12)
    assert np.allclose(T @ v, v * w, atol=1e-11)
    assert np.allclose(v.T @ v, np.eye(n), atol=1e-12)
    pivots = [c[-1] if abs(c[-1]) > 1e-8 else c[np.argmax(np.abs(c))] for c in v.T]
    assert min(pivots) > 0


def test_degenerate_diagonal():
    w, v = tridiagonal_eigh(np.ones(4), np.zeros(3))
    assert np.allclose(w, 1)
    assert np.allclose(np.abs(v), np.eye(4))


def test_eigenvalues_only():
    w, v = tridiagonal_eigh(np.array([2.0, 0.0]), np.array([1.0]), vectors=False)
    assert v is None
    assert np.allclose(w, [1 - np.sqrt(2), 1 + np.sqrt(2)])
