"""Globally adaptive Gauss-Kronrod (7/15) integration along complex arcs.

An :class:`ArcSegment` maps ``t in [0, 1]`` to the complex plane; integrals
are ``int f(z) dz = int_0^1 f(gamma(t)) gamma'(t) dt``.  The integrand may
return an array (one entry per independent integral, e.g. one per Cauchy
transform sample point); all entries then share one subdivision and the
error estimate is the largest over entries.
"""

import heapq
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import ConvergenceError

# Kronrod abscissae (nonnegative half, descending) and weights; Gauss-7
# weights belong to the odd-indexed abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1]
KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]

MAX_DEPTH = 50
MAX_EVALS = 10**6


@dataclass(frozen=True)
class QuadTolerance:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-13

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("at least one of abs_tol, rel_tol must be positive")


DEFAULT_TOL = QuadTolerance()


@dataclass(frozen=True)
class ArcSegment:
    """A parameterized arc ``t -> point(t)`` on ``[0, 1]``.

    ``singular_start`` / ``singular_end`` mark endpoints where the integrand
    is expected to have an integrable singularity; the integrator then
    grades its sampling toward them.
    """

    point: Callable
    derivative: Callable
    singular_start: bool = False
    singular_end: bool = False
    # (t, 1 - t) -> (z - start, end - z) without cancellation
    offsets: Optional[Callable] = None

    @classmethod
    def line(cls, a, b, singular_start=False, singular_end=False):
        a, b = complex(a), complex(b)
        d = b - a

        def point(t):
            t = np.asarray(t)
            # measure from the nearer endpoint
            return np.where(t <= 0.5, a + d * t, b - d * (1 - t))

        return cls(point, lambda t: np.full(np.shape(t), d, dtype=complex),
                   singular_start, singular_end,
                   lambda t, tc: (d * np.asarray(t), d * np.asarray(tc)))

    @classmethod
    def circular_arc(cls, center, radius, theta0, theta1):
        center = complex(center)
        span = theta1 - theta0

        def point(t):
            return center + radius * np.exp(1j * (theta0 + span * np.asarray(t)))

        def derivative(t):
            return 1j * span * radius * np.exp(1j * (theta0 + span * np.asarray(t)))

        return cls(point, derivative)

    @property
    def endpoint_singularity_flags(self):
        return (self.singular_start, self.singular_end)

    def check_derivative(self, t=0.37, h=1e-6):
        """Relative mismatch between ``derivative`` and a central difference."""
        fd = (self.point(t + h) - self.point(t - h)) / (2 * h)
        d = self.derivative(t)
        return abs(fd - d) / max(abs(d), 1e-300)

    def endpoint_offsets(self, t, tc):
        if self.offsets is not None:
            return self.offsets(t, tc)
        z = self.point(t)
        return z - self.point(0.0), self.point(1.0) - z

    def length(self, tol=DEFAULT_TOL):
        speed = lambda t, tc: np.abs(self.derivative(t)).astype(complex)
        return float(_adaptive(speed, tol).value.real)


class QuadResult(NamedTuple):
    value: complex
    err_estimate: float
    evals: int


# how many times the cubic grading is composed at a flagged endpoint; each
# pass doubles the order of contact, so t ~ u**8 there
GRADE_PASSES = 3


def _grade_once(singular_start, singular_end):
    if singular_start and singular_end:
        def grade(u, uc):
            return u * u * (3 - 2 * u), uc * uc * (3 - 2 * uc), 6 * u * uc
    elif singular_start:
        def grade(u, uc):
            t = 0.5 * u * u * (3 - u)
            return t, 1 - t, 1.5 * u * (2 - u)
    elif singular_end:
        def grade(u, uc):
            tc = 0.5 * uc * uc * (3 - uc)
            return 1 - tc, tc, 1.5 * uc * (2 - uc)
    else:
        grade = None
    return grade


def _grading(singular_start, singular_end, passes=GRADE_PASSES):
    """Cubic substitution t(u) with t'(u) vanishing at flagged endpoints.

    Returns ``(u, 1 - u) -> (t, 1 - t, dt/du)``; both ``t`` and ``1 - t``
    are formed directly so neither loses accuracy near its endpoint.
    """
    once = _grade_once(singular_start, singular_end)
    if once is None:
        return lambda u, uc: (u, uc, 1.0)

    def grade(u, uc):
        jac = 1.0
        for _ in range(passes):
            u, uc, d = once(u, uc)
            jac = jac * d
        return u, uc, jac

    return grade


def _kronrod(g, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    u = mid + half * KRONROD_NODES
    uc = (1 - b) + half * (1 - KRONROD_NODES)
    vals = g(u, uc)  # shape (15, ...)
    k = half * np.tensordot(KRONROD_WEIGHTS, vals, axes=(0, 0))
    gs = half * np.tensordot(GAUSS_WEIGHTS, vals, axes=(0, 0))
    err = float(np.max(np.abs(k - gs))) if np.size(k) else 0.0
    return k, err


def integrate(f, arc, tol=DEFAULT_TOL, offsets=False):
    """Integrate ``f`` along ``arc``.

    Parameters
    ----------
    f : callable
        ``f(z)`` returning complex values for a 1-D array of points.  To
        integrate several functions at once, return shape ``(len(z), k)``.
    arc : ArcSegment
    tol : QuadTolerance
    offsets : bool
        If true, call ``f(z, z - start, end - z)`` with the offsets computed
        without cancellation, for weights singular at the arc's endpoints.

    Returns
    -------
    QuadResult
        ``(value, err_estimate, evals)``.

    Raises
    ------
    ConvergenceError
        Subdivision deeper than 50 levels or more than 10**6 integrand
        evaluations; ``partial`` holds the best estimate.
    FloatingPointError
        The integrand produced NaN; the message names the abscissa.
    """
    grade = _grading(arc.singular_start, arc.singular_end)

    def g(u, uc):
        t, tc, jac = grade(u, uc)
        z = arc.point(t)
        scale = arc.derivative(t) * jac
        with np.errstate(divide="ignore", invalid="ignore"):
            if offsets:
                vals = np.asarray(f(z, *arc.endpoint_offsets(t, tc)), dtype=complex)
            else:
                vals = np.asarray(f(z), dtype=complex)
        if vals.ndim > 1:
            vals = vals * np.reshape(scale, (-1,) + (1,) * (vals.ndim - 1))
        else:
            vals = vals * scale
        # the grading can land exactly on a flagged endpoint, where the
        # weight blows up but the measure vanishes
        hit = ((t <= 0) & arc.singular_start) | ((tc <= 0) & arc.singular_end)
        if np.any(hit):
            vals[hit] = 0
        if np.isnan(vals).any():
            bad = np.argwhere(np.isnan(vals))[0][0]
            raise FloatingPointError(
                f"integrand returned NaN at z = {complex(np.ravel(z)[bad])!r}")
        return vals

    return _adaptive(g, tol)


def _heap_total(heap, frozen, like):
    items = sorted(heap + frozen, key=lambda item: item[2])
    total = sum((item[5] for item in items), start=0 * like)
    active = sum(-item[0] for item in heap)
    return total, active, active + sum(-item[0] for item in frozen)


# a split this deep that does not shrink the error estimate is taken to be
# resolving rounding noise, not the integrand
NOISE_DEPTH = 12
# ... and only when the stalled estimate is at rounding level
NOISE_LEVEL = 1e4 * np.finfo(float).eps


def _adaptive(g, tol):
    """Global adaptive bisection of int_0^1 g(u) du, worst interval first."""
    total, err = _kronrod(g, 0.0, 1.0)
    evals = 15
    # max-heap on error; the counter keeps ties deterministic
    heap = [(-err, 0, 0.0, 1.0, 0, total)]
    frozen = []
    counter = 1
    err_sum = err
    while heap:
        target = max(tol.abs_tol, tol.rel_tol * float(np.max(np.abs(total))))
        if err_sum <= target:
            break
        negerr, tag, a, b, depth, val = heapq.heappop(heap)
        if depth >= MAX_DEPTH or evals + 30 > MAX_EVALS:
            heapq.heappush(heap, (negerr, tag, a, b, depth, val))
            total, _, err_all = _heap_total(heap, frozen, total)
            raise ConvergenceError(
                f"adaptive quadrature did not converge (depth {depth}, "
                f"{evals} evaluations, error estimate {err_all:.3e})",
                partial=QuadResult(_collapse(total), err_all, evals))
        m = 0.5 * (a + b)
        left, el = _kronrod(g, a, m)
        right, er = _kronrod(g, m, b)
        evals += 30
        total = total - val + left + right
        pieces = [(-el, counter, a, m, depth + 1, left),
                  (-er, counter + 1, m, b, depth + 1, right)]
        counter += 2
        if (depth + 1 >= NOISE_DEPTH and el + er >= -0.99 * negerr
                and el + er <= NOISE_LEVEL * float(np.max(np.abs(total)))):
            frozen.extend(pieces)
            err_sum += negerr
        else:
            for item in pieces:
                heapq.heappush(heap, item)
            err_sum += el + er + negerr
        if counter % 128 == 1:
            # resum from scratch to stop drift of the running totals
            total, err_sum, _ = _heap_total(heap, frozen, total)
    total, _, err_all = _heap_total(heap, frozen, total)
    scale = float(np.max(np.abs(total)))
    if err_all > max(tol.abs_tol, tol.rel_tol * scale, NOISE_LEVEL * scale):
        # stalled pieces that were not rounding noise after all
        raise ConvergenceError(
            f"adaptive quadrature stalled with error estimate {err_all:.3e} "
            f"({evals} evaluations)",
            partial=QuadResult(_collapse(total), err_all, evals))
    return QuadResult(_collapse(total), err_all, evals)


def _collapse(v):
    v = np.asarray(v)
    return complex(v) if v.ndim == 0 else v


def integrate_path(f, segments, tol=DEFAULT_TOL, offsets=False):
    """Sum of :func:`integrate` over consecutive segments; errors add."""
    segments = list(segments)
    if not segments:
        raise ValueError("integrate_path needs at least one segment")
    value, err, evals = 0, 0.0, 0
    for seg in segments:
        v, e, n = integrate(f, seg, tol, offsets)
        value = value + v
        err += e
        evals += n
    return QuadResult(value, err, evals)


def path_length(segments, tol=DEFAULT_TOL):
    return math.fsum(seg.length(tol) for seg in segments)
