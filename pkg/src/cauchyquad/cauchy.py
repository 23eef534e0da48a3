"""Cauchy transforms C(s) = int_gamma w(z) / (s - z) dz of weight functions.

Closed forms are used for the unit weight on [-1, 1], for e^z on a Hankel
contour (whose transform is e^s itself) and for the constant jump across a
closed curve.  Everything else goes through adaptive Gauss-Kronrod.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import adaptive_quad as aq
from .aaa import SampleSet
from .errors import ConvergenceError, ProximityError
from .geometry import inside

PHASES = {
    "z": lambda z: z,
    "z4": lambda z: z ** 4,
}

CLOSED_FORM_KINDS = ("unit", "exp_hankel", "jump")
PROXIMITY = 1e-12


@dataclass(frozen=True)
class WeightSpec:
    """Weight function w on the integration arc gamma.

    ``kind`` selects the family; the remaining fields are its parameters.
    Jacobi weights are ``(1 - z)**alpha * (1 + z)**beta`` on [-1, 1].  The
    jump kind carries the closed curve ``gamma`` (as a polygon) and the
    transform's values inside and outside it.
    """

    kind: str = "unit"
    alpha: float = 0.0
    beta: float = 0.0
    omega: float = 0.0
    phase: str = "z"
    interior_value: complex = -1.0
    exterior_value: complex = 0.0
    gamma: Optional[np.ndarray] = field(default=None, compare=False)
    table_x: Optional[np.ndarray] = field(default=None, compare=False)
    table_w: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("unit", "jacobi", "band", "oscillatory",
                             "exp_hankel", "jump", "tabulated"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "jacobi" and not (self.alpha > -1 and self.beta > -1):
            raise ValueError("Jacobi exponents must exceed -1")
        if self.kind == "oscillatory":
            if not math.isfinite(self.omega):
                raise ValueError("oscillatory frequency must be finite")
            if self.phase not in PHASES:
                raise ValueError(f"unknown phase function {self.phase!r}")
        if self.kind == "tabulated":
            x = np.asarray(self.table_x, dtype=float)
            if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
                raise ValueError("tabulated weight needs increasing abscissae")

    # constructors -------------------------------------------------------
    @classmethod
    def unit(cls):
        return cls("unit")

    @classmethod
    def jacobi(cls, alpha, beta):
        return cls("jacobi", alpha=alpha, beta=beta)

    @classmethod
    def band(cls):
        return cls("band")

    @classmethod
    def oscillatory(cls, omega, phase="z"):
        return cls("oscillatory", omega=omega, phase=phase)

    @classmethod
    def exp_hankel(cls):
        return cls("exp_hankel")

    @classmethod
    def jump(cls, gamma=None, interior_value=-1.0, exterior_value=0.0):
        g = None if gamma is None else np.asarray(gamma, dtype=complex)
        return cls("jump", interior_value=interior_value,
                   exterior_value=exterior_value, gamma=g)

    @classmethod
    def tabulated(cls, x, w):
        return cls("tabulated", table_x=np.asarray(x, dtype=float),
                   table_w=np.asarray(w, dtype=complex))

    # evaluation ---------------------------------------------------------
    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "unit":
            return np.ones_like(z)
        if self.kind == "jacobi":
            return (1 - z) ** self.alpha * (1 + z) ** self.beta
        if self.kind == "band":
            on = np.abs(z.real) >= 0.5
            return np.where(on, np.sqrt(1 - z * z), 0)
        if self.kind == "oscillatory":
            return np.exp(1j * self.omega * PHASES[self.phase](z))
        if self.kind == "exp_hankel":
            return np.exp(z)
        if self.kind == "tabulated":
            x = self.table_x
            return (np.interp(z.real, x, self.table_w.real)
                    + 1j * np.interp(z.real, x, self.table_w.imag))
        raise ValueError("the jump weight is defined through its transform only")

    def arcs(self):
        """Integration pieces of gamma, with endpoint singularity flags."""
        return [arc for arc, _ in self.pieces()]

    def pieces(self):
        """``(arc, w)`` pairs where ``w(z, z - start, end - z)`` evaluates
        the weight on that arc, using the offsets near singular endpoints."""
        if self.kind == "jacobi":
            a, b = self.alpha, self.beta
            arc = aq.ArcSegment.line(-1, 1, singular_start=b != 0, singular_end=a != 0)
            # on [-1, 1]: 1 + z = z - start, 1 - z = end - z
            return [(arc, lambda z, da, db: db ** a * da ** b)]
        if self.kind == "band":
            left = aq.ArcSegment.line(-1, -0.5, True, True)
            right = aq.ArcSegment.line(0.5, 1, True, True)
            return [(left, lambda z, da, db: np.sqrt(da * (1 - z))),
                    (right, lambda z, da, db: np.sqrt((1 + z) * db))]
        if self.kind in ("unit", "oscillatory"):
            return [(aq.ArcSegment.line(-1, 1), lambda z, da, db: self(z))]
        if self.kind == "tabulated":
            x = self.table_x
            return [(aq.ArcSegment.line(x[k], x[k + 1]), lambda z, da, db: self(z))
                    for k in range(x.size - 1)]
        raise ValueError(f"no finite integration arc for weight kind {self.kind!r}")

    def mass(self, tol=aq.DEFAULT_TOL):
        """int_gamma w(z) dz."""
        if self.kind == "jump":
            # (1/2 pi i) * contour integral of dz around a closed curve
            return 0j
        if self.kind == "exp_hankel":
            return 0j
        return self.integrate(lambda z: np.ones_like(z), tol)

    def integrate(self, f, tol=aq.DEFAULT_TOL):
        """int_gamma f(z) w(z) dz by adaptive quadrature."""
        total = 0j
        for arc, w in self.pieces():
            total += aq.integrate(lambda z, da, db, w=w: w(z, da, db) * f(z),
                                  arc, tol, offsets=True).value
        return total

    @property
    def has_closed_form(self):
        return self.kind in CLOSED_FORM_KINDS

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "jacobi":
            d.update(alpha=self.alpha, beta=self.beta)
        elif self.kind == "oscillatory":
            d.update(omega=self.omega, phase=self.phase)
        elif self.kind == "jump":
            d.update(interior_value=[complex(self.interior_value).real,
                                     complex(self.interior_value).imag],
                     exterior_value=[complex(self.exterior_value).real,
                                     complex(self.exterior_value).imag])
        elif self.kind == "tabulated":
            d.update(x=self.table_x.tolist(),
                     w=[[v.real, v.imag] for v in self.table_w])
        return d

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        if kind == "jacobi":
            return cls.jacobi(float(d["alpha"]), float(d["beta"]))
        if kind == "oscillatory":
            return cls.oscillatory(float(d["omega"]), d.get("phase", "z"))
        if kind == "jump":
            iv = d.get("interior_value", -1.0)
            ev = d.get("exterior_value", 0.0)
            iv = complex(*iv) if isinstance(iv, list) else complex(iv)
            ev = complex(*ev) if isinstance(ev, list) else complex(ev)
            gamma = d.get("gamma")
            if gamma is not None:
                gamma = np.array([complex(*p) for p in gamma])
            return cls.jump(gamma, iv, ev)
        if kind == "tabulated":
            return cls.tabulated(d["x"], [complex(*p) for p in d["w"]])
        return cls(kind)


@dataclass(frozen=True)
class CauchyTransform:
    weight: WeightSpec
    mode: str = "closed_form"
    tol: aq.QuadTolerance = aq.DEFAULT_TOL

    def __post_init__(self):
        if self.mode not in ("closed_form", "numeric"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "closed_form" and not self.weight.has_closed_form:
            raise ValueError(f"no closed form for weight kind {self.weight.kind!r}")

    def __call__(self, s):
        if self.mode == "closed_form":
            return transform_closed_form(self.weight, s)
        return transform_numeric(self.weight, s, self.tol)


def _distance_to_interval(s):
    s = np.asarray(s, dtype=complex)
    x = np.clip(s.real, -1, 1)
    return np.abs(s - x)


def transform_closed_form(weight, s):
    """Closed-form Cauchy transform for the unit, exp_hankel and jump kinds.

    ``weight`` may be a :class:`WeightSpec` or just its kind string (the
    jump kind then needs a WeightSpec carrying ``gamma``).
    """
    if isinstance(weight, str):
        weight = WeightSpec(weight)
    s_arr = np.asarray(s, dtype=complex)
    kind = weight.kind
    if kind == "unit":
        if np.any(_distance_to_interval(s_arr) < PROXIMITY):
            raise ProximityError("evaluation point within 1e-12 of [-1, 1]")
        # log((s+1)/(s-1)) = 2 artanh(1/s), accurate for large |s|
        with np.errstate(divide="ignore"):
            out = 2 * np.arctanh(1 / s_arr)
    elif kind == "exp_hankel":
        out = np.exp(s_arr)
    elif kind == "jump":
        if weight.gamma is None:
            raise ValueError("jump weight needs the curve gamma for point location")
        g = weight.gamma
        seg_d = _distance_to_polygon(g, s_arr.ravel())
        if np.any(seg_d < PROXIMITY):
            raise ProximityError("evaluation point within 1e-12 of gamma")
        ins = inside(g, s_arr.ravel()).reshape(s_arr.shape)
        out = np.where(ins, complex(weight.interior_value),
                       complex(weight.exterior_value))
    else:
        raise ValueError(f"no closed form for weight kind {kind!r}")
    return out[()] if out.ndim == 0 else out


def _distance_to_polygon(poly, z):
    a = poly
    b = np.roll(poly, -1)
    d = b - a
    L2 = np.abs(d) ** 2
    L2[L2 == 0] = 1.0
    t = ((z[:, None] - a[None, :]) * np.conj(d)[None, :]).real / L2[None, :]
    t = np.clip(t, 0, 1)
    return np.abs(z[:, None] - (a + t * d)[None, :]).min(axis=1)


def transform_numeric(weight, s, tol=aq.DEFAULT_TOL):
    """Cauchy transform by adaptive quadrature of w(z)/(s - z) along gamma.

    ``s`` may be a scalar or an array; array entries share one adaptive
    subdivision.  Adaptive failures are re-raised naming the points.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    pieces = weight.pieces()
    if weight.kind == "band":
        far = np.abs(s_arr - np.clip(s_arr.real, 0.5, 1)) >= PROXIMITY
        far &= np.abs(s_arr - np.clip(s_arr.real, -1, -0.5)) >= PROXIMITY
        if not far.all():
            raise ProximityError("evaluation point within 1e-12 of the band support")
    elif weight.kind in ("unit", "jacobi", "oscillatory") and np.any(
            _distance_to_interval(s_arr) < PROXIMITY):
        raise ProximityError("evaluation point within 1e-12 of [-1, 1]")
    val = 0
    for arc, w in pieces:
        def integrand(z, da, db, w=w):
            return w(z, da, db)[:, None] / (s_arr[None, :] - z[:, None])

        try:
            val = val + aq.integrate(integrand, arc, tol, offsets=True).value
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"Cauchy transform at s = {s_arr.tolist()[:4]}...: {exc}",
                partial=exc.partial) from exc
    val = np.asarray(val)
    return complex(val[0]) if np.ndim(s) == 0 else val


def sample_transform(weight, points, tol=aq.DEFAULT_TOL, labels=None,
                     mode=None, label="", chunk=64):
    """Sample C on the discretized contour and package as a SampleSet.

    For the jump kind, ``labels`` (``"interior"``/``"exterior"`` per point)
    replace the point-in-region test.  Numeric evaluation runs in chunks of
    ``chunk`` points that share an adaptive subdivision; duplicate points are
    evaluated once.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    if mode is None:
        mode = "closed_form" if weight.has_closed_form else "numeric"
    if weight.kind == "jump" and labels is not None:
        labels = np.asarray(labels, dtype=object)
        vals = np.where(labels == "interior", complex(weight.interior_value),
                        complex(weight.exterior_value))
        return SampleSet(pts, vals, label)
    if mode == "closed_form":
        vals = np.asarray(transform_closed_form(weight, pts), dtype=complex)
        return SampleSet(pts, vals, label)
    uniq, inv = np.unique(pts, return_inverse=True)
    out = np.empty(uniq.size, dtype=complex)
    for start in range(0, uniq.size, chunk):
        sl = slice(start, start + chunk)
        try:
            out[sl] = transform_numeric(weight, uniq[sl], tol)
        except (ConvergenceError, ProximityError, FloatingPointError) as exc:
            raise type(exc)(
                f"sample_transform failed for points {start}..{start + chunk - 1}"
                f" near {uniq[start]!r}: {exc}") from exc
    return SampleSet(pts, out[inv.ravel()], label)
