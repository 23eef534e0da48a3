"""Dense complex linear algebra for small matrices.

Everything here works on 2-D ``complex128`` arrays of at most a few hundred
rows.  The algorithms are the textbook ones, chosen for accuracy at these
sizes rather than speed:

* SVD by one-sided (Hestenes) Jacobi rotations, applied to the triangular
  factor of a Householder QR so the sweeps run on a square matrix;
* eigenvalues by balancing, Householder reduction to upper Hessenberg form
  and single-shift complex QR with Wilkinson shifts;
* linear solves by Gaussian elimination with partial pivoting;
* least squares through the SVD (minimum-norm when rank deficient).

All functions are deterministic: identical input bits give identical output
bits.
"""

import warnings
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, RankDeficiencyWarning, SingularMatrixError

EPS = np.finfo(float).eps
MAX_ENTRIES = 10**6


def as_matrix(a):
    """Validate ``a`` and return it as a fresh 2-D complex128 array."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix must be nonempty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


class SvdResult(NamedTuple):
    """Thin SVD ``A = U diag(s) V^H``.

    ``singular_values`` is nonincreasing; ``left_singular_vectors`` is
    ``rows x k`` and ``right_singular_vectors`` is ``cols x k`` with
    ``k = min(rows, cols)``.
    """

    singular_values: np.ndarray
    left_singular_vectors: np.ndarray
    right_singular_vectors: np.ndarray


# --------------------------------------------------------------------------
# Householder QR
# --------------------------------------------------------------------------

def _householder_vector(x):
    """Return (v, beta) with (I - 2 v v^H) x = beta e_0 and ||v|| = 1."""
    nrm = np.linalg.norm(x)
    v = x.copy()
    if nrm == 0.0:
        return np.zeros_like(v), 0.0
    x0 = x[0]
    phase = x0 / abs(x0) if x0 != 0 else 1.0
    beta = -phase * nrm
    v[0] -= beta
    vn = np.linalg.norm(v)
    if vn == 0.0:
        return np.zeros_like(v), x0
    return v / vn, beta


def householder_qr(a):
    """Thin QR factorization of a tall matrix (rows >= cols)."""
    r = as_matrix(a)
    m, n = r.shape
    if m < n:
        raise ValueError("householder_qr needs rows >= cols")
    vs = []
    for k in range(n):
        v, _ = _householder_vector(r[k:, k])
        vs.append(v)
        if not v.any():
            continue
        blk = r[k:, k:]
        blk -= 2.0 * np.outer(v, v.conj() @ blk)
        r[k + 1:, k] = 0.0
    q = np.zeros((m, n), dtype=complex)
    q[np.arange(n), np.arange(n)] = 1.0
    for k in reversed(range(n)):
        v = vs[k]
        if v.any():
            blk = q[k:, k:]
            blk -= 2.0 * np.outer(v, v.conj() @ blk)
    return q, np.triu(r[:n, :])


# --------------------------------------------------------------------------
# SVD
# --------------------------------------------------------------------------

def _round_robin(n):
    """Pair schedule covering every (p, q) once per sweep, n even."""
    idx = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        p = np.array(idx[:half])
        q = np.array(idx[half:][::-1])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return rounds


def _jacobi_sweeps(w, v, max_sweeps):
    """One-sided Jacobi: rotate columns of ``w`` (and ``v``) until
    mutually orthogonal.  Works in place; returns the sweep count."""
    n = w.shape[1]
    if n == 1:
        return 0
    npad = n + (n % 2)
    rounds = []
    for p, q in _round_robin(npad):
        keep = q < n
        rounds.append((p[keep], q[keep]))
    tol = n * EPS
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p, q in rounds:
            wp = w[:, p]
            wq = w[:, q]
            alpha = np.einsum("ij,ij->j", wp.conj(), wp).real
            beta = np.einsum("ij,ij->j", wq.conj(), wq).real
            gamma = np.einsum("ij,ij->j", wp.conj(), wq)
            agam = np.abs(gamma)
            act = agam > tol * np.sqrt(alpha * beta)
            if not act.any():
                continue
            rotated = True
            p, q = p[act], q[act]
            alpha, beta, gamma, agam = alpha[act], beta[act], gamma[act], agam[act]
            phase = gamma / agam
            zeta = (beta - alpha) / (2.0 * agam)
            sgn = np.where(zeta >= 0, 1.0, -1.0)
            t = sgn / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            for mat in (w, v):
                xp = mat[:, p]
                xq = mat[:, q] * phase.conj()
                mat[:, p] = c * xp - s * xq
                mat[:, q] = s * xp + c * xq
        if not rotated:
            return sweep
    raise ConvergenceError(
        f"Jacobi SVD did not converge in {max_sweeps} sweeps "
        f"for a {w.shape[0]}x{n} matrix")


def _complete_orthonormal(u, good):
    """Replace columns of ``u`` not flagged ``good`` by an orthonormal
    completion of the good ones (deterministic, built from unit vectors)."""
    m, k = u.shape
    basis = [u[:, j] for j in range(k) if good[j]]
    out = u.copy()
    for j in range(k):
        if good[j]:
            continue
        # project every unit vector off the basis and keep the largest
        # remainder; with fewer than m basis vectors its norm is >= 1/sqrt(m)
        cand = np.eye(m, dtype=complex)
        if basis:
            b = np.array(basis).T
            for _ in range(2):
                cand -= b @ (b.conj().T @ cand)
        nrm = np.linalg.norm(cand, axis=0)
        best = int(np.argmax(nrm))
        cand = cand[:, best] / nrm[best]
        basis.append(cand)
        out[:, j] = cand
    return out


def svd(a):
    """Thin singular value decomposition by one-sided Jacobi.

    Returns an :class:`SvdResult`.  Raises :class:`ConvergenceError` naming
    the matrix size if ``100 * cols`` sweeps are not enough.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m * n > MAX_ENTRIES:
        raise ValueError(f"matrix too large for dense SVD: {m}x{n}")
    if m < n:
        res = svd(a.conj().T)
        return SvdResult(res.singular_values, res.right_singular_vectors,
                         res.left_singular_vectors)
    q, r = householder_qr(a)
    w = r.copy()
    v = np.eye(n, dtype=complex)
    _jacobi_sweeps(w, v, max_sweeps=100 * n)
    s = np.sqrt(np.einsum("ij,ij->j", w.conj(), w).real)
    order = np.argsort(-s, kind="stable")
    s, w, v = s[order], w[:, order], v[:, order]
    good = s > 1e-300
    if s.size and s[0] > 0:
        good &= s > EPS * 1e-3 * s[0]
    ur = np.zeros_like(w)
    ur[:, good] = w[:, good] / s[good]
    if not good.all():
        ur = _complete_orthonormal(ur, good)
    return SvdResult(s, q @ ur, v)


# --------------------------------------------------------------------------
# Eigenvalues
# --------------------------------------------------------------------------

def _balance(h):
    """Diagonal similarity scaling by powers of two (Parlett-Reinsch)."""
    n = h.shape[0]
    radix, sqrdx = 2.0, 4.0
    done = False
    while not done:
        done = True
        for i in range(n):
            absr = np.abs(h[i, :])
            absc = np.abs(h[:, i])
            r = absr.sum() - absr[i]
            c = absc.sum() - absc[i]
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                h[i, :] /= f
                h[:, i] *= f
    return h


def hessenberg(a):
    """Unitary similarity reduction to upper Hessenberg form."""
    h = as_matrix(a)
    n = h.shape[0]
    for k in range(n - 2):
        v, _ = _householder_vector(h[k + 1:, k])
        if not v.any():
            continue
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _eig2(a, b, c, d):
    p = 0.5 * (a - d)
    disc = np.sqrt(p * p + b * c)
    q = p + disc if abs(p + disc) >= abs(p - disc) else p - disc
    if q == 0:
        return d, d
    return d + q, d - (b * c) / q


def _givens(a, b):
    """(c, s) with [[c, s], [-conj(s), c]] @ [a, b] = [r, 0], c real."""
    if b == 0:
        return 1.0, 0.0
    ab = abs(b)
    if a == 0:
        return 0.0, b.conjugate() / ab
    aa = abs(a)
    nrm = np.hypot(aa, ab)
    return aa / nrm, (a / aa) * b.conjugate() / nrm


def eigenvalues(a, balance=True):
    """Eigenvalues of a square complex matrix.

    Shifted QR on the Hessenberg form; at most ``30 * n`` QR steps.  On
    failure a :class:`ConvergenceError` is raised whose ``partial`` holds
    the eigenvalues already deflated.  The result is sorted by real part,
    then imaginary part.
    """
    h = as_matrix(a)
    n = h.shape[0]
    if h.shape[1] != n:
        raise ValueError(f"eigenvalues needs a square matrix, got {h.shape}")
    if n > 500:
        raise ValueError(f"dimension {n} exceeds the dense limit of 500")
    if balance:
        h = _balance(h)
    h = hessenberg(h)
    eigs = []
    hi = n - 1
    its = 0
    steps = 0
    cap = 30 * n
    while hi >= 0:
        if hi == 0:
            eigs.append(h[0, 0])
            break
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = np.abs(h[:hi + 1, :hi + 1]).max()
            if abs(h[lo, lo - 1]) <= EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(h[hi, hi])
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            eigs.extend(_eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi]))
            hi -= 2
            its = 0
            continue
        steps += 1
        its += 1
        if steps > cap:
            raise ConvergenceError(
                f"QR iteration did not converge in {cap} steps for a "
                f"{n}x{n} matrix", partial=np.array(eigs))
        if its % 10 == 0:
            sub = h[hi, hi - 1]
            mu = h[hi, hi] + 0.75 * (abs(sub.real) + abs(sub.imag))
        else:
            l1, l2 = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi],
                           h[hi, hi - 1], h[hi, hi])
            mu = l1 if abs(l1 - h[hi, hi]) <= abs(l2 - h[hi, hi]) else l2
        w = h[lo:hi + 1, lo:hi + 1]
        k = w.shape[0]
        diag = np.arange(k)
        w[diag, diag] -= mu
        rots = []
        for j in range(k - 1):
            c, s = _givens(w[j, j], w[j + 1, j])
            x = w[j, j:].copy()
            y = w[j + 1, j:]
            w[j, j:] = c * x + s * y
            w[j + 1, j:] = -np.conj(s) * x + c * y
            w[j + 1, j] = 0.0
            rots.append((c, s))
        for j, (c, s) in enumerate(rots):
            top = min(j + 2, k)
            x = w[:top, j].copy()
            y = w[:top, j + 1]
            w[:top, j] = c * x + np.conj(s) * y
            w[:top, j + 1] = -s * x + c * y
        w[diag, diag] += mu
    out = np.array(eigs, dtype=complex)
    order = np.lexsort((out.imag, out.real))
    return out[order]


# --------------------------------------------------------------------------
# Linear systems
# --------------------------------------------------------------------------

def lu_factor(a):
    """LU with partial pivoting.  Returns (lu, perm) with A[perm] = L U.

    Raises :class:`SingularMatrixError` when a pivot falls below
    ``1e-14 * ||A||_inf``.
    """
    lu = as_matrix(a)
    n = lu.shape[0]
    if lu.shape[1] != n:
        raise ValueError(f"lu_factor needs a square matrix, got {lu.shape}")
    anorm = np.abs(lu).sum(axis=1).max()
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= 1e-14 * anorm:
            raise SingularMatrixError(
                f"pivot {abs(lu[p, k]):.3e} at column {k} below "
                f"1e-14*||A|| = {1e-14 * anorm:.3e}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_solve(a, b, factored=None):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    ``factored`` may carry a previous ``lu_factor(a)`` result.
    """
    lu, perm = factored if factored is not None else lu_factor(a)
    n = lu.shape[0]
    x = np.array(b, dtype=complex)
    if x.shape[0] != n:
        raise ValueError(f"rhs has {x.shape[0]} rows, matrix has {n}")
    x = x[perm]
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def determinant(a):
    lu, perm = lu_factor(a)
    # parity of the permutation by cycle counting
    seen = np.zeros(perm.size, dtype=bool)
    sign = 1.0
    for i in range(perm.size):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign * np.prod(np.diag(lu))


def least_squares(a, b):
    """Minimize ``||A x - b||_2`` for ``rows >= cols``.

    When ``A`` is rank deficient to working precision the minimum-norm
    solution is returned and a :class:`RankDeficiencyWarning` is issued.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m < n:
        raise ValueError(f"least_squares needs rows >= cols, got {a.shape}")
    b = np.asarray(b, dtype=complex)
    res = svd(a)
    s = res.singular_values
    cut = max(m, n) * EPS * (s[0] if s.size else 0.0)
    keep = s > cut
    if not keep.all():
        warnings.warn(
            f"least_squares: rank {int(keep.sum())} < {n} to working precision;"
            " returning minimum-norm solution", RankDeficiencyWarning,
            stacklevel=2)
    u = res.left_singular_vectors[:, keep]
    v = res.right_singular_vectors[:, keep]
    return v @ ((u.conj().T @ b) / s[keep])
