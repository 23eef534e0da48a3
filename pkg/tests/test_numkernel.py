import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cauchyquad import numkernel as nk
from cauchyquad.errors import RankDeficiencyWarning, SingularMatrixError


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# ---- SVD -----------------------------------------------------------------

def test_svd_identity():
    res = nk.svd(np.eye(4))
    assert np.allclose(res.singular_values, 1.0, atol=1e-15)


def test_svd_diagonal_sorted():
    res = nk.svd(np.diag([3.0, 4j]))
    assert np.allclose(res.singular_values, [4.0, 3.0], atol=1e-14)


def test_svd_rank_one():
    a = np.outer([1.0, 2.0, 3.0], [1.0, 1j])
    res = nk.svd(a)
    assert res.singular_values[0] == pytest.approx(np.sqrt(14 * 2), rel=1e-14)
    assert res.singular_values[1] < 1e-14
    u = res.left_singular_vectors
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-13)


@pytest.mark.parametrize("shape", [(1, 1), (5, 3), (3, 5), (40, 40), (100, 60), (100, 100)])
def test_svd_reconstruction_and_orthogonality(rng, shape):
    a = crandn(rng, *shape)
    res = nk.svd(a)
    u, s, v = res.left_singular_vectors, res.singular_values, res.right_singular_vectors
    rec = (u * s) @ v.conj().T
    assert np.linalg.norm(rec - a) <= 1e-11 * np.linalg.norm(a)
    k = min(shape)
    assert np.allclose(u.conj().T @ u, np.eye(k), atol=1e-12)
    assert np.allclose(v.conj().T @ v, np.eye(k), atol=1e-12)
    assert np.all(np.diff(s) <= 0)
    # singular value residual A v_j - s_j u_j
    resid = np.linalg.norm(a @ v - u * s, axis=0)
    assert np.all(resid <= 1e-12 * s[0] * np.sqrt(shape[0]))
    assert np.allclose(s, np.linalg.svd(a, compute_uv=False), rtol=1e-11, atol=1e-13 * s[0])


def test_svd_deterministic(rng):
    a = crandn(rng, 30, 12)
    r1, r2 = nk.svd(a), nk.svd(a.copy())
    for x, y in zip(r1, r2):
        assert np.array_equal(x, y)


def test_svd_nearly_rank_deficient_completes_basis(rng):
    b = crandn(rng, 30, 3)
    a = b @ crandn(rng, 3, 10)
    res = nk.svd(a)
    u = res.left_singular_vectors
    assert np.allclose(u.conj().T @ u, np.eye(10), atol=1e-12)


# ---- eigenvalues ---------------------------------------------------------

def _match(got, want, tol):
    got = list(got)
    for w in want:
        k = int(np.argmin([abs(g - w) for g in got]))
        assert abs(got[k] - w) <= tol, (got, want)
        got.pop(k)


def test_eig_diagonal():
    _match(nk.eigenvalues(np.diag([1, 2j, -3])), [1, 2j, -3], 1e-14)


def test_eig_rotation():
    _match(nk.eigenvalues([[0, -1], [1, 0]]), [1j, -1j], 1e-14)


def test_eig_companion_cube_roots():
    comp = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    _match(nk.eigenvalues(comp), roots, 1e-13)


@pytest.mark.parametrize("n", [1, 2, 7, 25, 50])
def test_eig_trace_and_determinant(rng, n):
    a = crandn(rng, n, n)
    lam = nk.eigenvalues(a)
    assert abs(lam.sum() - np.trace(a)) <= 1e-10 * max(1.0, abs(np.trace(a)), np.abs(lam).sum())
    det = nk.determinant(a)
    assert abs(np.prod(lam) - det) <= 1e-8 * abs(det)


def test_eig_against_numpy(rng):
    a = crandn(rng, 20, 20)
    _match(nk.eigenvalues(a), np.linalg.eigvals(a), 1e-10)


def test_eig_deterministic(rng):
    a = crandn(rng, 15, 15)
    assert np.array_equal(nk.eigenvalues(a), nk.eigenvalues(a.copy()))


def test_eig_rejects_rectangular():
    with pytest.raises(ValueError):
        nk.eigenvalues(np.ones((2, 3)))


# ---- least squares -------------------------------------------------------

def test_lstsq_identity(rng):
    b = crandn(rng, 5)
    assert np.allclose(nk.least_squares(np.eye(5), b), b, atol=1e-15)


def test_lstsq_mean():
    x = nk.least_squares([[1.0], [1.0]], [0.0, 2.0])
    assert x[0] == pytest.approx(1.0, abs=1e-15)


def test_lstsq_residual_orthogonal(rng):
    a, b = crandn(rng, 30, 5), crandn(rng, 30)
    x = nk.least_squares(a, b)
    r = a.conj().T @ (b - a @ x)
    assert np.linalg.norm(r) <= 1e-10 * np.linalg.norm(a) * np.linalg.norm(b)


def test_lstsq_rank_deficient_min_norm():
    a = np.array([[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]])
    with pytest.warns(RankDeficiencyWarning):
        x = nk.least_squares(a, [2.0, 2.0, 2.0])
    assert np.allclose(x, [1.0, 1.0], atol=1e-14)


# ---- LU ------------------------------------------------------------------

def test_lu_identity(rng):
    b = crandn(rng, 4)
    assert np.array_equal(nk.lu_solve(np.eye(4), b), b)


def test_lu_diagonal():
    assert np.allclose(nk.lu_solve(np.diag([2.0, 4.0]), [2.0, 8.0]), [1.0, 2.0], atol=0)


def test_lu_spd_residual(rng):
    q, _ = np.linalg.qr(rng.standard_normal((50, 50)))
    a = (q * rng.uniform(0.1, 10, 50)) @ q.T + 0j
    b = crandn(rng, 50)
    x = nk.lu_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(a, 2) * np.linalg.norm(x)


def test_lu_singular():
    with pytest.raises(SingularMatrixError):
        nk.lu_solve([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])


def test_determinant_permutation_sign():
    assert nk.determinant([[0, 1], [1, 0]]) == pytest.approx(-1)


@given(st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_lu_random_residual(n, seed):
    rng = np.random.default_rng(seed)
    a = crandn(rng, n, n) + n * np.eye(n)
    b = crandn(rng, n)
    x = nk.lu_solve(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-10 * np.linalg.norm(a, 2) * np.linalg.norm(x)


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        nk.svd([[np.nan, 1.0]])
