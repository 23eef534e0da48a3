"""Quadrature rules from pole-residue forms.

If r(s) = C + sum_k c_k / (s - z_k) approximates the Cauchy transform of a
weight w on an arc gamma, uniformly on a contour Gamma enclosing gamma and
the z_k, then for f analytic inside Gamma

    int_gamma f(z) w(z) dz  ~  I_n = sum_k c_k f(z_k).
"""

import hashlib
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln

from . import numkernel
from .errors import (ApproximationError, CauchyQuadError, SingularMatrixError)
from .geometry import inside


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    constant: complex = 0j
    approx_error: Optional[float] = None
    contour_length: Optional[float] = None
    provenance: str = ""

    def __post_init__(self):
        z = np.array(self.nodes, dtype=complex).ravel()
        c = np.array(self.weights, dtype=complex).ravel()
        if z.size != c.size:
            raise ValueError("nodes and weights must have equal length")
        z.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "weights", c)
        object.__setattr__(self, "constant", complex(self.constant))

    @property
    def degree(self):
        return self.nodes.size

    def __call__(self, f):
        return apply_rule(self, f)


@dataclass(frozen=True)
class ConvergenceReport:
    degrees: tuple
    errors: tuple
    reference_value: complex
    reference_provenance: str
    baseline: Optional[tuple] = None
    # degree -> message for fits that failed
    gaps: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.degrees) != len(self.errors):
            raise ValueError("degrees and errors differ in length")
        if self.baseline is not None and len(self.baseline) != len(self.degrees):
            raise ValueError("baseline length differs from degrees")

    def rate(self, start=None):
        """Geometric rate rho with error ~ rho**(-n), by least squares on
        log(error) over finite, nonzero entries with degree >= start."""
        n = np.array(self.degrees, dtype=float)
        e = np.array(self.errors, dtype=float)
        ok = np.isfinite(e) & (e > 0)
        if start is not None:
            ok &= n >= start
        if ok.sum() < 2:
            raise ValueError("need two usable errors to fit a rate")
        slope = np.polyfit(n[ok], np.log(e[ok]), 1)[0]
        return math.exp(-slope)

    def to_csv(self):
        lines = ["degree,error,baseline_error"]
        for k, (n, e) in enumerate(zip(self.degrees, self.errors)):
            b = "" if self.baseline is None else repr(float(self.baseline[k]))
            lines.append(f"{n},{float(e)!r},{b}")
        return "\n".join(lines) + "\n"


def pairwise_sum(values):
    """Sum by repeatedly adding adjacent pairs (fixed order)."""
    v = np.asarray(values)
    if v.size == 0:
        return v.dtype.type(0)
    while v.shape[0] > 1:
        if v.shape[0] % 2:
            v = np.concatenate([v[:-1:2] + v[1::2], v[-1:]])
        else:
            v = v[0::2] + v[1::2]
    return v[0]


def options_hash(config):
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def rule_from_rational(pr, contour_length=None, approx_error=None, provenance=""):
    """Nodes are the poles of ``pr``, weights its residues."""
    z = np.asarray(pr.poles, dtype=complex)
    if z.size > 1:
        scale = max(float(np.max(np.abs(z))), 1.0)
        d = np.abs(z[:, None] - z[None, :])
        d[np.diag_indices(z.size)] = np.inf
        if d.min() <= 1e-12 * scale:
            i, j = np.unravel_index(np.argmin(d), d.shape)
            raise ApproximationError(
                f"poles {z[i]!r} and {z[j]!r} coincide; run cleanup first")
    return QuadratureRule(z, pr.residues, pr.constant, approx_error,
                          contour_length, provenance)


def filter_rule(rule, region, max_fraction=0.2):
    """Drop nodes outside the closed polygon ``region``.

    Returns ``(rule, removed)`` with ``removed`` the discarded nodes.
    Raises ApproximationError if more than ``max_fraction`` of the nodes
    would go.
    """
    poly = getattr(region, "points", region)
    poly = np.asarray(poly, dtype=complex)
    if rule.degree == 0:
        return rule, np.zeros(0, complex)
    keep = inside(poly, rule.nodes)
    removed = rule.nodes[~keep]
    if removed.size > max_fraction * rule.degree:
        raise ApproximationError(
            f"{removed.size} of {rule.degree} nodes lie outside the region; "
            "the approximation is likely invalid")
    if removed.size:
        warnings.warn(f"removed {removed.size} node(s) outside the region",
                      stacklevel=2)
    new = QuadratureRule(rule.nodes[keep], rule.weights[keep], rule.constant,
                         rule.approx_error, rule.contour_length, rule.provenance)
    return new, removed


def apply_rule(rule, f):
    """I_n = sum_k c_k f(z_k), summed pairwise in node order."""
    vals = np.asarray(f(rule.nodes), dtype=complex)
    if vals.shape != rule.nodes.shape:
        vals = np.broadcast_to(vals, rule.nodes.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        k = int(np.argmax(bad))
        raise FloatingPointError(
            f"integrand is not finite at node {k} (z = {rule.nodes[k]!r})")
    return complex(pairwise_sum(rule.weights * vals))


def error_bound(rule, f_sup):
    """(eps / 2 pi) |Gamma| ||f||_Gamma."""
    if rule.approx_error is None or rule.contour_length is None:
        raise ValueError("rule lacks approx_error or contour_length")
    return rule.approx_error / (2 * math.pi) * rule.contour_length * f_sup


def convergence_sweep(build, degrees, f, reference, provenance, baseline=None,
                      workers=1):
    """Independent fits at each degree and their errors against ``reference``.

    Parameters
    ----------
    build : callable
        ``build(n) -> QuadratureRule``.
    degrees : sequence of int
    f : callable
        Test integrand.
    reference : complex
    provenance : str
        Where ``reference`` comes from.
    baseline : callable, optional
        ``baseline(n) -> QuadratureRule`` (e.g. Gauss-Legendre) evaluated at
        the same degrees.
    workers : int
        Threads for the per-degree fits.  Order of results is fixed.
    """
    degrees = tuple(int(n) for n in degrees)
    if list(degrees) != sorted(set(degrees)):
        raise ValueError("degrees must be strictly increasing")

    def one(n):
        try:
            return abs(apply_rule(build(n), f) - reference), None
        except (CauchyQuadError, FloatingPointError, ValueError) as exc:
            return math.nan, f"{type(exc).__name__}: {exc}"

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, degrees))
    else:
        results = [one(n) for n in degrees]
    gaps = {n: msg for n, (_, msg) in zip(degrees, results) if msg is not None}
    base = None
    if baseline is not None:
        base = tuple(abs(apply_rule(baseline(n), f) - reference) for n in degrees)
    return ConvergenceReport(degrees, tuple(e for e, _ in results),
                             complex(reference), provenance, base, gaps)


# --------------------------------------------------------------------------
# Golub-Welsch oracles
# --------------------------------------------------------------------------

def _golub_welsch(diag, offdiag, mass, provenance):
    x, v = eigh_tridiagonal(diag, offdiag)
    w = mass * v[0] ** 2
    return QuadratureRule(x, w, provenance=provenance)


def gauss_legendre_oracle(n):
    """n-point Gauss-Legendre rule on [-1, 1]."""
    if n < 1:
        raise ValueError("n must be positive")
    k = np.arange(1, n)
    b = k / np.sqrt(4.0 * k * k - 1)
    return _golub_welsch(np.zeros(n), b, 2.0, f"gauss-legendre n={n}")


def jacobi_mass(alpha, beta):
    """int_{-1}^{1} (1 - x)^alpha (1 + x)^beta dx."""
    return math.exp((alpha + beta + 1) * math.log(2) + betaln(alpha + 1, beta + 1))


def gauss_jacobi_oracle(n, alpha, beta):
    """n-point Gauss rule for the weight (1 - x)^alpha (1 + x)^beta."""
    if n < 1:
        raise ValueError("n must be positive")
    if not (alpha > -1 and beta > -1):
        raise ValueError("Jacobi exponents must exceed -1")
    a, b = float(alpha), float(beta)
    k = np.arange(n, dtype=float)
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (s * (s + 2))
    if abs(a + b) < 1e-14:
        diag[0] = (b - a) / (a + b + 2)
    diag[~np.isfinite(diag)] = (b - a) / (a + b + 2)
    k = np.arange(1, n, dtype=float)
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.sqrt(4 * k * (k + a) * (k + b) * (k + a + b)
                      / (s * s * (s + 1) * (s - 1)))
    if n > 1:
        # closed form at k = 1 avoids 0/0 when alpha + beta = -1
        off[0] = math.sqrt(4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b)))
    return _golub_welsch(diag, off, jacobi_mass(a, b),
                         f"gauss-jacobi n={n} alpha={a} beta={b}")


# --------------------------------------------------------------------------
# matrix functions
# --------------------------------------------------------------------------

def apply_rule_matrix(rule, f, a, b, workers=1):
    """f(A) b ~ sum_k c_k f(z_k) (z_k I - A)^{-1} b.

    The shifted solves are independent; ``workers > 1`` runs them in a
    thread pool.  Summation is pairwise in node order.
    """
    a = numkernel.as_matrix(a)
    b = np.asarray(b, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("A must be square")
    if n > 500:
        raise ValueError("A is limited to dimension 500")
    if b.shape[0] != n:
        raise ValueError("b has the wrong length")
    fz = np.asarray(f(rule.nodes), dtype=complex)
    eye = np.eye(n, dtype=complex)

    def solve(k):
        try:
            return rule.weights[k] * fz[k] * numkernel.lu_solve(
                rule.nodes[k] * eye - a, b)
        except SingularMatrixError as exc:
            raise SingularMatrixError(
                f"shift {k} (z = {rule.nodes[k]!r}) is an eigenvalue of A: {exc}"
            ) from exc

    idx = range(rule.degree)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            terms = list(pool.map(solve, idx))
    else:
        terms = [solve(k) for k in idx]
    if not terms:
        return np.zeros_like(b)
    return pairwise_sum(np.array(terms))
