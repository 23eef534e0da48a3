"""AAA rational approximation in barycentric form.

The approximant is

    r(z) = sum_j w_j f_j / (z - z_j)  /  sum_j w_j / (z - z_j)

with support points z_j drawn greedily from the sample set.  Besides the
classical algorithm this module provides

* a blended weight vector for two-valued (sign-type) targets, where the
  single smallest singular vector of the Loewner matrix is unstable;
* AAA-Lawson refinement toward the minimax approximation, with a damping
  exponent on the weight update;
* poles, residues and zeros, and removal of spurious pole/zero doublets.
"""

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import numkernel
from .errors import ApproximationError, RankDeficiencyWarning

# early-stop level when only a degree is requested
NOISE_TOL = 1e-13
DEFAULT_MAX_SUPPORT = 150


@dataclass(frozen=True)
class SampleSet:
    """Sample points Z and target values F."""

    points: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        z = np.array(self.points, dtype=complex).ravel()
        f = np.array(self.values, dtype=complex).ravel()
        if z.size != f.size:
            raise ValueError(f"{z.size} points but {f.size} values")
        if z.size < 2:
            raise ValueError("a sample set needs at least two points")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(f))):
            raise ValueError("sample points and values must be finite")
        if np.unique(z).size != z.size:
            raise ValueError("sample points must be pairwise distinct")
        z.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "points", z)
        object.__setattr__(self, "values", f)

    def __len__(self):
        return self.points.size


@dataclass(frozen=True)
class AaaOptions:
    degree: Optional[int] = None
    tol: Optional[float] = None
    sign_blend: bool = False
    lawson_steps: int = 0
    damping: float = 1.0
    cleanup_tol: float = 1e-13
    enforce_real_symmetry: bool = False
    cleanup: bool = True

    def __post_init__(self):
        if self.degree is None and self.tol is None:
            raise ValueError("specify a degree, a tolerance, or both")
        if self.degree is not None and self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.lawson_steps < 0:
            raise ValueError("lawson_steps must be >= 0")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        if not self.cleanup_tol > 0:
            raise ValueError("cleanup_tol must be positive")


@dataclass(frozen=True)
class BarycentricRational:
    support_points: np.ndarray
    support_values: np.ndarray
    weights: np.ndarray
    # max sample error after each greedy step, then after refinement
    errors: tuple = field(default=(), compare=False)
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        zj = np.array(self.support_points, dtype=complex).ravel()
        fj = np.array(self.support_values, dtype=complex).ravel()
        wj = np.array(self.weights, dtype=complex).ravel()
        if not (zj.size == fj.size == wj.size) or zj.size == 0:
            raise ValueError("support points, values and weights must match "
                             "and be nonempty")
        nrm = np.linalg.norm(wj)
        if nrm == 0:
            raise ValueError("barycentric weights are all zero")
        wj = wj / nrm
        for a in (zj, fj, wj):
            a.setflags(write=False)
        object.__setattr__(self, "support_points", zj)
        object.__setattr__(self, "support_values", fj)
        object.__setattr__(self, "weights", wj)

    @property
    def degree(self):
        return self.support_points.size - 1

    @property
    def constant(self):
        """r(infinity)."""
        den = self.weights.sum()
        num = (self.weights * self.support_values).sum()
        if den == 0:
            return complex(np.inf)
        return complex(num / den)

    def __call__(self, z):
        return evaluate(self, z)


@dataclass(frozen=True)
class PoleResidueForm:
    constant: complex
    poles: np.ndarray
    residues: np.ndarray
    zeros: np.ndarray

    @property
    def degree(self):
        return self.poles.size

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        terms = self.residues / (z[..., None] - self.poles)
        return self.constant + terms.sum(axis=-1)


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def evaluate(r, z):
    """Evaluate the barycentric formula; exact at support points, the
    constant term at infinity, ``inf`` at an exact pole."""
    z = np.asarray(z, dtype=complex)
    zv = z.ravel()
    zj, fj, wj = r.support_points, r.support_values, r.weights
    if zj.size == 1:
        # degree 0: the constant, without rounding through the quotient
        out = np.full(z.shape, fj[0], dtype=complex)
        return out[()] if out.ndim == 0 else out
    with np.errstate(divide="ignore", invalid="ignore"):
        cc = 1.0 / (zv[:, None] - zj[None, :])
        num = cc @ (wj * fj)
        den = cc @ wj
        out = num / den
    out[den == 0] = complex(np.inf)
    inf = np.isinf(zv)
    if inf.any():
        out[inf] = r.constant
    hit_i, hit_j = np.nonzero(zv[:, None] == zj[None, :])
    out[hit_i] = fj[hit_j]
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# weight selection
# --------------------------------------------------------------------------

def blend_weights(singular_values, vectors):
    """Weighted combination of all right singular vectors.

    Coefficients exp(-(s_j - s_min) / (s_min + delta)), delta = 1e-30 s_1,
    so the smallest singular direction dominates and near-ties mix.
    """
    s = np.asarray(singular_values)
    smin = s[-1]
    delta = 1e-30 * s[0] if s[0] > 0 else 1e-300
    coef = np.exp(-(s - smin) / (smin + delta))
    w = vectors @ coef
    nrm = np.linalg.norm(w)
    if nrm == 0:
        return vectors[:, -1]
    return w / nrm


def _null_vector(a, sign_blend):
    res = numkernel.svd(a)
    v = res.right_singular_vectors
    if v.shape[1] < a.shape[1]:
        raise ApproximationError("Loewner matrix has fewer rows than columns")
    if sign_blend:
        return blend_weights(res.singular_values, v), res.singular_values
    return v[:, -1], res.singular_values


def loewner_weights(samples, support_idx, sign_blend=False, symmetric=False):
    """Barycentric weights for fixed support points (indices into samples).

    With ``symmetric`` the support set must be closed under conjugation and
    the weights are made conjugate-symmetric.
    """
    z, f = samples.points, samples.values
    idx = np.asarray(support_idx, dtype=int)
    rest = np.ones(z.size, dtype=bool)
    rest[idx] = False
    zj, fj = z[idx], f[idx]
    a = (f[rest, None] - fj[None, :]) / (z[rest, None] - zj[None, :])
    w, _ = _null_vector(a, sign_blend)
    if symmetric:
        w = _conj_symmetric(w, _support_perm(idx, mirror_index(z)))
    return BarycentricRational(zj, fj, w)


def max_error(r, samples):
    return float(np.max(np.abs(samples.values - evaluate(r, samples.points))))


# --------------------------------------------------------------------------
# greedy AAA
# --------------------------------------------------------------------------

def _symmetrized(samples):
    """Add the conjugate of every point whose mirror image is missing."""
    z, f = samples.points, samples.values
    scale = max(float(np.max(np.abs(z))), 1.0)
    d = np.abs(np.conj(z)[:, None] - z[None, :]).min(axis=1)
    missing = d > 1e-12 * scale
    if not missing.any():
        return samples
    return SampleSet(np.concatenate([z, np.conj(z[missing])]),
                     np.concatenate([f, np.conj(f[missing])]), samples.label)


def mirror_index(points, tol=1e-12):
    """Index of the complex conjugate of each point (itself for real
    points), or -1 where the mirror image is not in the set."""
    z = np.asarray(points, dtype=complex)
    scale = max(float(np.max(np.abs(z))), 1.0)
    d = np.abs(np.conj(z)[:, None] - z[None, :])
    j = np.argmin(d, axis=1)
    j[d[np.arange(z.size), j] > tol * scale] = -1
    return j


def symmetrize_samples(samples):
    """Conjugate-closed sample set with values made exactly symmetric,
    F(conj z) = conj F(z), by averaging each value with its mirror."""
    samples = _symmetrized(samples)
    mirror = mirror_index(samples.points)
    if np.any(mirror < 0):
        raise ValueError("sample set could not be closed under conjugation")
    f = samples.values
    return SampleSet(samples.points, 0.5 * (f + np.conj(f[mirror])), samples.label)


def _conj_symmetric(vec, perm):
    """Project ``vec`` onto {v : conj(v[perm]) = v}.

    For conjugate-symmetric data a simple null vector satisfies
    conj(v[perm]) = c v with |c| = 1; rotating by sqrt(c) first makes the
    projection lossless.
    """
    c = np.vdot(vec, np.conj(vec[perm]))
    if abs(c) > 0:
        vec = vec * np.sqrt(c / abs(c))
    return 0.5 * (vec + np.conj(vec[perm]))


def _support_perm(support, mirror):
    pos = {int(j): k for k, j in enumerate(support)}
    return np.array([pos[int(mirror[j])] for j in support])


def aaa_fit(samples, opts):
    """Greedy AAA approximation, then optional Lawson steps and cleanup.

    Parameters
    ----------
    samples : SampleSet
    opts : AaaOptions
        ``degree`` caps the number of support points at ``degree + 1``;
        ``tol`` stops as soon as the max sample error is below
        ``tol * max|F|``.  With only a degree, iteration still stops once
        the error reaches 1e-13 relative (machine-noise level).

    Returns
    -------
    BarycentricRational
        ``errors`` records the max sample error after each step and
        ``notes`` any early exits or cleanup events.
    """
    mirror = None
    if opts.enforce_real_symmetry:
        samples = symmetrize_samples(samples)
        mirror = mirror_index(samples.points)
    z, f = samples.points, samples.values
    n_pts = z.size
    fmax = float(np.max(np.abs(f)))
    if fmax == 0 or np.all(f == f[0]):
        return BarycentricRational(z[:1], f[:1], [1.0], (0.0,), ("constant data",))
    if opts.degree is not None:
        if n_pts < 2 * (opts.degree + 1):
            raise ValueError(
                f"{n_pts} sample points are too few for degree {opts.degree}; "
                f"need at least {2 * (opts.degree + 1)}")
        mmax = opts.degree + 1
    else:
        mmax = min(n_pts // 2, DEFAULT_MAX_SUPPORT)
    tol = opts.tol if opts.tol is not None else NOISE_TOL
    target = tol * fmax

    free = np.ones(n_pts, dtype=bool)
    approx = np.full(n_pts, f.mean())
    cauchy = np.zeros((n_pts, mmax), dtype=complex)
    support = []
    errors = []
    best = None
    notes = []
    r = None
    converged = False
    while len(support) < mmax:
        resid = np.abs(f - approx)
        resid[~free] = -1.0
        new = [int(np.argmax(resid))]
        if mirror is not None and mirror[new[0]] == new[0]:
            # keep a real point in reserve if the final slot will need one
            real = free & (mirror == np.arange(n_pts))
            left = mmax - len(support) - 1
            if left % 2 == 1 and real.sum() == 1:
                paired = free & (mirror != np.arange(n_pts)) & (mirror >= 0)
                if paired.any():
                    new = [int(np.argmax(np.where(paired, resid, -1.0)))]
        if mirror is not None and mirror[new[0]] != new[0]:
            if len(support) + 2 <= mmax:
                new.append(int(mirror[new[0]]))
            else:
                # one slot left: take the worst real point instead
                real = free & (mirror == np.arange(n_pts))
                if not real.any():
                    notes.append("no real sample point left for the last "
                                 "support slot; stopped one degree early")
                    break
                new = [int(np.argmax(np.where(real, resid, -1.0)))]
        for j in new:
            with np.errstate(divide="ignore", invalid="ignore"):
                cauchy[:, len(support)] = 1.0 / (z - z[j])
            support.append(j)
            free[j] = False
        m = len(support)
        cauchy[np.ix_(support, range(m))] = 0.0
        zj, fj = z[support], f[support]
        cm = cauchy[free, :m]
        loewner = (f[free, None] - fj[None, :]) * cm
        w, _ = _null_vector(loewner, opts.sign_blend)
        if mirror is not None:
            w = _conj_symmetric(w, _support_perm(support, mirror))
        num = cm @ (w * fj)
        den = cm @ w
        approx = f.copy()
        with np.errstate(divide="ignore", invalid="ignore"):
            approx[free] = num / den
        approx[~np.isfinite(approx)] = np.inf
        err = float(np.max(np.abs(f - approx)))
        errors.append(err)
        r = BarycentricRational(zj, fj, w)
        if best is None or err < best[0]:
            best = (err, r)
        if err <= target:
            converged = True
            if opts.degree is not None and m < mmax:
                notes.append(f"converged at degree {m - 1} before requested "
                             f"degree {opts.degree}")
            break
    if not converged and opts.degree is None:
        notes.append(f"tolerance {opts.tol:g} not reached with {mmax} support "
                     "points; returning the best iterate")
        r = best[1]
    r = replace(r, errors=tuple(errors), notes=tuple(notes))

    if opts.lawson_steps > 0:
        r = lawson_refine(r, samples, opts.lawson_steps, opts.damping,
                          opts.sign_blend, symmetric=mirror is not None)
    if opts.cleanup and r.degree > 0:
        pr = poles_residues(r, samples)
        _, r = cleanup(pr, r, samples, opts.cleanup_tol, opts.sign_blend,
                       symmetric=mirror is not None)
    return r


# --------------------------------------------------------------------------
# Lawson iteration
# --------------------------------------------------------------------------

def lawson_refine(r, samples, steps, damping=1.0, sign_blend=False,
                  symmetric=False):
    """Iteratively reweighted least squares toward the minimax fit.

    Support points stay fixed; numerator and denominator coefficients are
    re-solved each step from the weighted linearized problem
    ``min sum_i lam_i |F_i D(Z_i) - N(Z_i)|^2`` over unit coefficient
    vectors, and the sample weights are updated as
    ``lam_i <- lam_i |e_i|**damping`` (normalized to sum 1).  With
    ``sign_blend`` the coefficient vector is the blend of all singular
    vectors, which keeps two-valued problems away from the spurious
    near-null directions where D ~ 0 on one component.  With ``symmetric``
    (conjugate-closed samples and support) each coefficient vector is made
    conjugate-symmetric.  Returns the iterate with the smallest max error,
    the input included.
    """
    if steps <= 0:
        return r
    z, f = samples.points, samples.values
    zj = r.support_points
    m = zj.size
    on_support = (z[:, None] == zj[None, :]).any(axis=1)
    rows = ~on_support
    if rows.sum() < 2 * m:
        return replace(r, notes=r.notes + ("too few free samples for Lawson",))
    c = 1.0 / (z[rows, None] - zj[None, :])
    a = np.hstack([f[rows, None] * c, -c])
    lam = np.full(rows.sum(), 1.0 / rows.sum())
    perm = None
    if symmetric:
        mirror = mirror_index(z)
        idx = [int(np.nonzero(z == p)[0][0]) for p in zj]
        half = _support_perm(idx, mirror)
        perm = np.concatenate([half, half + m])
    best_err = max_error(r, samples)
    best = r
    history = list(r.errors)
    notes = list(r.notes)
    for step in range(steps):
        res = numkernel.svd(np.sqrt(lam)[:, None] * a)
        sv = res.singular_values
        if sign_blend:
            vec = blend_weights(sv, res.right_singular_vectors)
        else:
            if sv[-2] <= 1e-14 * sv[0]:
                notes.append(f"Lawson step {step + 1}: weighted problem rank "
                             "deficient; stopped")
                break
            vec = res.right_singular_vectors[:, -1]
        if perm is not None:
            vec = _conj_symmetric(vec, perm)
        beta, alpha = vec[:m], vec[m:]
        if np.any(beta == 0):
            notes.append(f"Lawson step {step + 1}: zero denominator weight; stopped")
            break
        cand = BarycentricRational(zj, alpha / beta, beta)
        e = np.abs(f - evaluate(cand, z))
        err = float(np.max(e)) if np.all(np.isfinite(e)) else math.inf
        history.append(err)
        if err < best_err:
            best_err, best = err, cand
        if not math.isfinite(err):
            notes.append(f"Lawson step {step + 1}: non-finite error; stopped")
            break
        lam = lam * e[rows] ** damping
        total = lam.sum()
        if total == 0 or not np.isfinite(total):
            notes.append(f"Lawson step {step + 1}: weights collapsed; stopped")
            break
        lam = lam / total
    return replace(best, errors=tuple(history), notes=tuple(notes))


# --------------------------------------------------------------------------
# poles, residues, zeros
# --------------------------------------------------------------------------

def barycentric_roots(zj, coef):
    """Finite roots of sum_j coef_j / (x - z_j).

    Generalized eigenvalues of the arrowhead pencil
    ([[0, coef^T], [1, diag(zj)]], diag(0, I)) after explicitly deflating
    its two infinite eigenvalues: restrict to vectors orthogonal to
    conj(coef), which leaves an (m-1)x(m-1) standard eigenproblem.
    """
    zj = np.asarray(zj, dtype=complex)
    a = np.asarray(coef, dtype=complex)
    m = zj.size
    if m <= 1:
        return np.zeros(0, dtype=complex)
    anorm = np.linalg.norm(a)
    if anorm == 0:
        return np.zeros(0, dtype=complex)
    q1 = np.conj(a) / anorm
    v, _ = numkernel._householder_vector(q1)
    q = np.eye(m, dtype=complex) - 2.0 * np.outer(v, v.conj())
    if not v.any():
        q = np.eye(m, dtype=complex)
    qhead, q2 = q[:, 0], q[:, 1:]
    zq2 = zj[:, None] * q2
    denom = qhead.conj().sum()
    scale = max(float(np.max(np.abs(zj))), 1.0)
    if abs(denom) < 1e-15 * math.sqrt(m):
        denom = 1e-15 * math.sqrt(m)
    mat = q2.conj().T @ zq2 - np.outer(q2.conj().sum(axis=0), qhead.conj() @ zq2) / denom
    roots = numkernel.eigenvalues(mat)
    return roots[np.abs(roots) < 1e13 * scale]


def _bary_sums(p, zj, a):
    d = p[:, None] - zj[None, :]
    inv = 1.0 / d
    return inv @ a, -(inv * inv) @ a


def _polish(p, zj, wj, steps=3):
    """A few guarded Newton steps on the denominator sum at each root."""
    if p.size == 0:
        return p
    for _ in range(steps):
        with np.errstate(divide="ignore", invalid="ignore"):
            d0, dd = _bary_sums(p, zj, wj)
            step = d0 / dd
        ok = np.isfinite(step) & (np.abs(step) < 1e-3 * (1 + np.abs(p)))
        p = np.where(ok, p - np.where(ok, step, 0), p)
    return p


def poles_residues(r, samples=None):
    """Pole-residue form r(s) = C + sum_k c_k / (s - p_k), plus zeros.

    Poles are polished by Newton's method on the barycentric denominator;
    residues come from the quotient rule N(p)/D'(p).  If ``samples`` is
    given, the residues are refitted by least squares so that the form
    reproduces r on the sample points, which absorbs residual pole error
    (kept only when it actually matches r better).
    """
    zj, fj, wj = r.support_points, r.support_values, r.weights
    if zj.size <= 1:
        return PoleResidueForm(r.constant, np.zeros(0, complex), np.zeros(0, complex),
                               np.zeros(0, complex))
    poles = _polish(barycentric_roots(zj, wj), zj, wj)
    scale = max(float(np.max(np.abs(zj))), 1.0)
    residues = np.empty(poles.size, dtype=complex)
    for k, p in enumerate(poles):
        residues[k] = _residue(p, zj, fj, wj, scale)
    const = r.constant
    if samples is not None and poles.size and np.isfinite(const):
        residues = _refit_residues(r, samples.points, poles, residues, const)
    zeros = barycentric_roots(zj, wj * fj)
    return PoleResidueForm(const, poles, residues, zeros)


def _refit_residues(r, z, poles, residues, const):
    target = evaluate(r, z) - const
    ok = np.isfinite(target)
    z, target = z[ok], target[ok]
    if z.size < poles.size:
        return residues
    with np.errstate(divide="ignore", invalid="ignore"):
        c = 1.0 / (z[:, None] - poles[None, :])
    if not np.all(np.isfinite(c)):
        return residues
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RankDeficiencyWarning)
        fitted = numkernel.least_squares(c, target)
    old = np.max(np.abs(c @ residues - target))
    new = np.max(np.abs(c @ fitted - target))
    return fitted if new < old else residues


def _residue(p, zj, fj, wj, scale):
    for attempt in range(2):
        if np.min(np.abs(p - zj)) > 1e-14 * scale:
            n, _ = _bary_sums(np.array([p]), zj, wj * fj)
            _, dd = _bary_sums(np.array([p]), zj, wj)
            c = n[0] / dd[0]
            if np.isfinite(c):
                return c
        p = p + 1e-13 * scale * (1 + 1j)
    raise ApproximationError(f"pole {p!r} collides with a support point")


def real_symmetrize(pr):
    """Force exact conjugate symmetry on a pole-residue form.

    Each pole is paired with the pole nearest its conjugate; pairs are
    averaged into exact conjugates and self-paired poles (the ones closest
    to their own mirror image) are made exactly real.
    """
    def pair(values, weights):
        n = values.size
        left = list(range(n))
        out_v, out_w = [], []
        real_v, real_w = [], []
        while left:
            i = left.pop(0)
            p = values[i]
            cands = [(abs(values[j] - np.conj(p)), j) for j in left]
            self_d = 2 * abs(p.imag)
            if cands:
                dj, j = min(cands)
            if not cands or self_d <= dj:
                real_v.append(complex(p.real, 0.0))
                real_w.append(complex(weights[i].real, 0.0) if weights is not None else 0j)
                continue
            left.remove(j)
            q = values[j]
            up = (p + np.conj(q)) / 2
            wu = (weights[i] + np.conj(weights[j])) / 2 if weights is not None else 0j
            if up.imag < 0:
                up, wu = np.conj(up), np.conj(wu)
            out_v += [up, np.conj(up)]
            out_w += [wu, np.conj(wu)]
        order = np.argsort([v.real for v in out_v[::2]], kind="stable")
        pv = [x for k in order for x in (out_v[2 * k], out_v[2 * k + 1])]
        pw = [x for k in order for x in (out_w[2 * k], out_w[2 * k + 1])]
        rorder = np.argsort([v.real for v in real_v], kind="stable")
        pv += [real_v[k] for k in rorder]
        pw += [real_w[k] for k in rorder]
        return np.array(pv, dtype=complex), np.array(pw, dtype=complex)

    poles, res = pair(np.asarray(pr.poles), np.asarray(pr.residues))
    zeros, _ = pair(np.asarray(pr.zeros), None)
    const = complex(complex(pr.constant).real, 0.0)
    return PoleResidueForm(const, poles, res, zeros)


# --------------------------------------------------------------------------
# Froissart doublet removal
# --------------------------------------------------------------------------

def cleanup(pr, r, samples, cleanup_tol=1e-13, sign_blend=False, symmetric=False):
    """Remove spurious poles and re-solve the barycentric weights once.

    A pole is spurious when |c_k| < cleanup_tol * max|F| * dist(p_k, Z).
    For each one the nearest support point is dropped; the remaining
    support points get fresh Loewner weights.  Returns ``(pr, r)``; if the
    removal would empty the support set the inputs come back unchanged with
    a note on ``r``.  ``symmetric`` also drops the conjugate partner of each
    removed support point.
    """
    z, f = samples.points, samples.values
    if pr.poles.size == 0:
        return pr, r
    fmax = float(np.max(np.abs(f)))
    dist = np.abs(pr.poles[:, None] - z[None, :]).min(axis=1)
    bad = np.abs(pr.residues) < cleanup_tol * fmax * dist
    if not bad.any():
        return pr, r
    zj = r.support_points
    drop = set()
    for p in pr.poles[bad]:
        order = np.argsort(np.abs(zj - p), kind="stable")
        for j in order:
            if int(j) not in drop:
                drop.add(int(j))
                break
    if symmetric:
        # drop mirror partners too so the support stays conjugate-closed
        zmirror = mirror_index(zj)
        drop |= {int(zmirror[j]) for j in drop if zmirror[j] >= 0}
    keep = [j for j in range(zj.size) if j not in drop]
    if not keep:
        return pr, replace(r, notes=r.notes + ("cleanup would empty support set; "
                                               "skipped",))
    idx = []
    for j in keep:
        hit = np.nonzero(z == zj[j])[0]
        if hit.size:
            idx.append(int(hit[0]))
    if len(idx) != len(keep):
        return pr, replace(r, notes=r.notes + ("support point not in sample set; "
                                               "cleanup skipped",))
    if len(idx) == 1:
        new = BarycentricRational(z[idx], f[idx], [1.0])
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RankDeficiencyWarning)
            new = loewner_weights(samples, idx, sign_blend, symmetric)
    note = f"cleanup removed {int(bad.sum())} spurious pole(s)"
    new = replace(new, errors=r.errors + (max_error(new, samples),),
                  notes=r.notes + (note,))
    return poles_residues(new, samples), new
