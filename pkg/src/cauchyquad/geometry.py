"""Discretized contours for every sampling configuration used by the recipes.

Each generator returns a :class:`Contour`: the ordered sample points, a
per-point label (``"interior"``/``"exterior"`` for two-component problems,
``"curve"`` otherwise) and the arc pieces making up the continuous curve,
which are used to measure its length.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .adaptive_quad import ArcSegment, DEFAULT_TOL
from .errors import GeometryError

SLIT_OFFSET = 1e-8
SECTOR_ANGLE = 0.333 * math.pi


@dataclass(frozen=True)
class Contour:
    points: np.ndarray
    labels: np.ndarray
    arcs: tuple = ()
    name: str = ""
    # arcs traversed on both sides (slits, cuts) count twice in the length
    arc_multiplicity: tuple = ()

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).ravel()
        labels = np.asarray(self.labels, dtype=object).ravel()
        if labels.size != pts.size:
            raise GeometryError("labels and points differ in length")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)
        if not self.arc_multiplicity:
            object.__setattr__(self, "arc_multiplicity", (1,) * len(self.arcs))

    def __len__(self):
        return self.points.size

    def mask(self, label):
        return self.labels == label

    def length(self, tol=DEFAULT_TOL):
        """Arc length |Gamma| of the continuous curve."""
        if self.arcs:
            return math.fsum(k * a.length(tol)
                             for a, k in zip(self.arcs, self.arc_multiplicity))
        return polyline_length(self.points, closed=True)

    def __add__(self, other):
        return Contour(np.concatenate([self.points, other.points]),
                       np.concatenate([self.labels, other.labels]),
                       self.arcs + other.arcs,
                       f"{self.name}+{other.name}",
                       self.arc_multiplicity + other.arc_multiplicity)


def polyline_length(points, closed=False):
    pts = np.asarray(points, dtype=complex)
    d = np.abs(np.diff(pts))
    total = math.fsum(d)
    if closed and pts.size > 1:
        total += abs(pts[0] - pts[-1])
    return total


def winding_number(curve, z):
    """Winding number of the closed polygon ``curve`` about each ``z``."""
    curve = np.asarray(curve, dtype=complex)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    rel = curve[None, :] - z[:, None]
    ratio = np.roll(rel, -1, axis=1) / rel
    return np.angle(ratio).sum(axis=1) / (2 * math.pi)


def inside(curve, z):
    return np.abs(winding_number(curve, z)) > 0.5


def _labels(n, label):
    return np.full(n, label, dtype=object)


def _check_distinct(points, name):
    pts = np.asarray(points)
    if np.unique(pts).size != pts.size:
        raise GeometryError(f"{name}: generated duplicate points")
    return pts


# --------------------------------------------------------------------------
# Bernstein ellipse family
# --------------------------------------------------------------------------

def bernstein_ellipse(rho, n=200):
    """Points (c + 1/c)/2 with c = rho exp(2 pi i k/n), k = 1..n."""
    if not rho > 1:
        raise GeometryError(f"Bernstein parameter must exceed 1, got {rho}")
    c = rho * np.exp(2j * np.pi * np.arange(1, n + 1) / n)
    return (c + 1 / c) / 2


def ellipse_arc(rho):
    def point(t):
        c = rho * np.exp(2j * np.pi * np.asarray(t))
        return (c + 1 / c) / 2

    def derivative(t):
        c = rho * np.exp(2j * np.pi * np.asarray(t))
        return 1j * np.pi * (c - 1 / c)

    return ArcSegment(point, derivative)


def gauss_ellipse_rho(d):
    """Bernstein parameter of the ellipse through +-i*d."""
    return d + math.sqrt(1 + d * d)


def ellipse(rho, n=200):
    pts = bernstein_ellipse(rho, n)
    return Contour(pts, _labels(n, "curve"), (ellipse_arc(rho),), f"ellipse({rho:g})")


def stadium(eps, n_side=100, n_cap=99):
    """Boundary of the eps-neighbourhood of [-1, 1], positively oriented.

    Bottom side, right cap, top side, left cap; the caps exclude the
    points shared with the sides.
    """
    if not eps > 0:
        raise GeometryError("stadium width must be positive")
    side = -1j * eps + np.linspace(-1, 1, n_side)
    ang = np.pi * (np.arange(n_cap) - (n_cap - 1) / 2) / (n_cap + 1)
    cap = 1 + eps * np.exp(1j * ang)
    half = np.concatenate([side, cap])
    pts = np.concatenate([half, -half])
    arcs = (ArcSegment.line(-1 - 1j * eps, 1 - 1j * eps),
            ArcSegment.circular_arc(1, eps, -np.pi / 2, np.pi / 2),
            ArcSegment.line(1 + 1j * eps, -1 + 1j * eps),
            ArcSegment.circular_arc(-1, eps, np.pi / 2, 3 * np.pi / 2))
    return Contour(_check_distinct(pts, "stadium"), _labels(pts.size, "curve"),
                   arcs, f"stadium({eps:g})")


def _slit_distances(length, n):
    # clustered toward the tip (distance 0): d_k = L sin^2(pi k / (2n))
    k = np.arange(n)
    return length * np.sin(np.pi * k / (2 * n)) ** 2 if n else np.zeros(0)


def slit_ellipse(rho, tips=(), n=200, n_slit=60):
    """Bernstein ellipse with vertical double-sided slits cut in to ``tips``.

    Each slit runs from the ellipse boundary point directly above (tip in
    the upper half) or below the tip down/up to the tip.  The two sides are
    offset by +-1e-8 so all points stay distinct; the curve is traversed
    once, counterclockwise.
    """
    a = (rho + 1 / rho) / 2
    b = (rho - 1 / rho) / 2
    theta = 2 * np.pi * np.arange(1, n + 1) / n
    base_pts = bernstein_ellipse(rho, n)
    inserts = []
    arcs = [ellipse_arc(rho)]
    mult = [1]
    for tip in tips:
        tip = complex(tip)
        if tip.imag == 0:
            raise GeometryError("slit tips must be off the real axis")
        if (tip.real / a) ** 2 + (tip.imag / b) ** 2 >= 1:
            raise GeometryError(f"slit tip {tip} is not inside the ellipse")
        upper = tip.imag > 0
        th0 = math.acos(tip.real / a)
        if not upper:
            th0 = 2 * math.pi - th0
        base = complex(tip.real, (b if upper else -b) * math.sin(math.acos(tip.real / a)))
        length = abs(base - tip)
        d = _slit_distances(length, n_slit)  # from tip outward, d[0] = 0
        # counterclockwise travel meets an upper slit from the right side
        # and a lower slit from the left side
        if upper:
            side_in = tip.real + SLIT_OFFSET + 1j * (tip.imag + d[::-1][:-1])
            side_out = tip.real - SLIT_OFFSET + 1j * (tip.imag + d[1:])
        else:
            side_in = tip.real - SLIT_OFFSET + 1j * (tip.imag - d[::-1][:-1])
            side_out = tip.real + SLIT_OFFSET + 1j * (tip.imag - d[1:])
        seq = np.concatenate([side_in, [tip], side_out])
        inserts.append((th0, seq))
        arcs.append(ArcSegment.line(base, tip))
        mult.append(2)
    pieces = []
    order = sorted(inserts, key=lambda item: item[0])
    start = 0.0
    for th0, seq in order:
        sel = (theta > start) & (theta <= th0)
        pieces.append(base_pts[sel])
        pieces.append(seq)
        start = th0
    pieces.append(base_pts[theta > start])
    pts = np.concatenate(pieces)
    return Contour(_check_distinct(pts, "slit_ellipse"), _labels(pts.size, "curve"),
                   tuple(arcs), f"slit_ellipse({rho:g})", tuple(mult))


# --------------------------------------------------------------------------
# Hankel / sector
# --------------------------------------------------------------------------

def hankel_domain(n=300, r_min=1e-3, r_max=1e4):
    """Log-spaced points -10**t on the negative real axis."""
    pts = -np.logspace(math.log10(r_min), math.log10(r_max), n)
    arcs = (ArcSegment.line(-r_max, -r_min),)
    return Contour(pts, _labels(n, "curve"), arcs, "hankel", (2,))


def sector_domain(n=300, r_min=1e-3, r_max=1e4, theta=SECTOR_ANGLE):
    """The Hankel points rotated onto the rays arg z = pi -+ theta,
    ordered to run in along the upper ray and out along the lower one."""
    z = hankel_domain(n, r_min, r_max).points
    rot = np.exp(1j * theta)
    pts = np.concatenate([z[::-1] / rot, z * rot])
    arcs = (ArcSegment.line(-r_max / rot, -r_min / rot),
            ArcSegment.line(-r_min * rot, -r_max * rot))
    return Contour(pts, _labels(pts.size, "curve"), arcs, "sector")


# --------------------------------------------------------------------------
# two-component configurations
# --------------------------------------------------------------------------

def unit_circle_points(n):
    return np.exp(2j * np.pi * np.arange(1, n + 1) / n)


def annulus_pair(r_inner=0.5, r_outer=2.0, n=100):
    if not 0 < r_inner < 1 < r_outer:
        raise GeometryError("need 0 < r_inner < 1 < r_outer")
    s = unit_circle_points(n)
    pts = np.concatenate([r_outer * s, r_inner * s])
    labels = np.concatenate([_labels(n, "exterior"), _labels(n, "interior")])
    arcs = (ArcSegment.circular_arc(0, r_outer, 0, 2 * np.pi),
            ArcSegment.circular_arc(0, r_inner, 0, 2 * np.pi))
    return Contour(pts, labels, arcs, "annulus")


def strip_minus_segment(n_long=199, n_segment=200, mode="corrected"):
    """Lines Im z = +-1 (tan-graded) outside, the segment [-1, 1] inside.

    ``mode="faithful"`` keeps the single point 1 that the original
    discretization collapses to; ``"corrected"`` samples all of [-1, 1].
    """
    half = (n_long - 1) // 2
    long = np.tan(np.pi * np.arange(-half, half + 1) / (2 * (half + 1)))
    if mode == "corrected":
        segment = np.linspace(-1, 1, n_segment)
    elif mode == "faithful":
        segment = np.array([1.0])
    else:
        raise GeometryError(f"unknown strip mode {mode!r}")
    pts = np.concatenate([long + 1j, long - 1j, segment])
    labels = np.concatenate([_labels(2 * long.size, "exterior"),
                             _labels(segment.size, "interior")])
    L = long[-1]
    arcs = (ArcSegment.line(-L + 1j, L + 1j), ArcSegment.line(-L - 1j, L - 1j),
            ArcSegment.line(-1, 1))
    return Contour(_check_distinct(pts, "strip"), labels, arcs, f"strip[{mode}]",
                   (1, 1, 2))


def negative_real_cut(n=100):
    """Algebraically graded points 1 - 1/t, t in [0.005, 1], on (-199, 0]."""
    return 1 - 1 / np.linspace(0.005, 1, n)


def interval_plus_cut(n_segment=100, n_negreal=100, m=1 / 8, M=1.0):
    if not 0 < m < M:
        raise GeometryError("need 0 < m < M")
    segment = np.logspace(math.log10(m), math.log10(M), n_segment)
    negreal = negative_real_cut(n_negreal)
    pts = np.concatenate([negreal, segment])
    labels = np.concatenate([_labels(n_negreal, "exterior"),
                             _labels(n_segment, "interior")])
    arcs = (ArcSegment.line(negreal[0], negreal[-1]), ArcSegment.line(m, M))
    return Contour(pts, labels, arcs, "interval+cut", (2, 2))


def _graded_side(a, b, n):
    # Chebyshev-like clustering toward both corners, endpoint a included
    t = 0.5 * (1 - np.cos(np.pi * np.arange(n) / n))
    return a + (b - a) * t


def rectangle_exterior(corners=(0.125 - 0.5j, 1 + 0.5j), n=40, n_negreal=100):
    """Rectangle boundary (interior target) plus the negative real cut
    (exterior target).  ``corners`` are opposite corners."""
    z0, z1 = complex(corners[0]), complex(corners[1])
    x0, x1 = sorted((z0.real, z1.real))
    y0, y1 = sorted((z0.imag, z1.imag))
    if x0 <= 0:
        raise GeometryError("rectangle must lie in the open right half-plane")
    cs = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    sides = [_graded_side(cs[k], cs[(k + 1) % 4], n) for k in range(4)]
    rect = np.concatenate(sides)
    negreal = negative_real_cut(n_negreal)
    pts = np.concatenate([negreal, rect])
    labels = np.concatenate([_labels(n_negreal, "exterior"),
                             _labels(rect.size, "interior")])
    arcs = (ArcSegment.line(negreal[0], negreal[-1]),) + tuple(
        ArcSegment.line(cs[k], cs[(k + 1) % 4]) for k in range(4))
    return Contour(_check_distinct(pts, "rectangle"), labels, arcs, "rectangle",
                   (2, 1, 1, 1, 1))


def yin_yang(n=100):
    """Two interlocking components, 3n boundary points each.

    Labels are ``"yin"`` (target -1) and ``"yang"`` (target +1); yang is the
    pointwise negative of yin.
    """
    c = np.exp(1j * np.pi * np.arange(1, n + 1) / n) / 1j
    yin = np.concatenate([-c, np.conj(1j * c) / 2j - 0.5j, c / 2 + 0.5j]) - 0.5
    yang = -yin
    pts = np.concatenate([yin, yang])
    labels = np.concatenate([_labels(yin.size, "yin"), _labels(yang.size, "yang")])
    return Contour(_check_distinct(pts, "yin_yang"), labels, (), "yin-yang")


# --------------------------------------------------------------------------
# JSON contour specs
# --------------------------------------------------------------------------

def _cplx(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    if isinstance(v, str):
        return complex(v.replace(" ", ""))
    return complex(v)


def _segment_piece(p):
    a, b = _cplx(p["a"]), _cplx(p["b"])
    n = int(p.get("n", 100))
    spacing = p.get("spacing", "uniform")
    if spacing == "uniform":
        t = np.linspace(0, 1, n)
    elif spacing == "log":
        # geometric toward a
        t = np.logspace(-3, 0, n)
    elif spacing == "tan-graded":
        half = (n - 1) // 2
        s = np.tan(np.pi * np.arange(-half, half + 1) / (2 * (half + 1)))
        t = (s - s[0]) / (s[-1] - s[0])
    else:
        raise GeometryError(f"unknown spacing {spacing!r}")
    return a + (b - a) * t, (ArcSegment.line(a, b),)


def _ray_piece(p):
    origin = _cplx(p.get("origin", 0))
    direction = _cplx(p.get("direction", -1))
    direction /= abs(direction)
    r = np.logspace(math.log10(p["r_min"]), math.log10(p["r_max"]), int(p.get("n", 100)))
    arc = ArcSegment.line(origin + direction * p["r_min"], origin + direction * p["r_max"])
    return origin + direction * r, (arc,)


def _piece(p):
    kind = p["type"]
    if kind == "ellipse":
        c = ellipse(float(p["rho"]), int(p.get("n", 200)))
        return c.points, c.arcs, c.arc_multiplicity
    if kind == "circle":
        center, radius = _cplx(p.get("center", 0)), float(p["radius"])
        pts = center + radius * unit_circle_points(int(p.get("n", 100)))
        return pts, (ArcSegment.circular_arc(center, radius, 0, 2 * np.pi),), (1,)
    if kind == "segment":
        pts, arcs = _segment_piece(p)
        return pts, arcs, (1,)
    if kind == "ray":
        pts, arcs = _ray_piece(p)
        return pts, arcs, (1,)
    if kind == "stadium":
        c = stadium(float(p["eps"]), int(p.get("n_side", 100)), int(p.get("n_cap", 99)))
        return c.points, c.arcs, c.arc_multiplicity
    if kind == "slit_ellipse":
        tips = [_cplx(t) for t in p.get("tips", [])]
        c = slit_ellipse(float(p["rho"]), tips, int(p.get("n", 200)),
                         int(p.get("n_slit", 60)))
        return c.points, c.arcs, c.arc_multiplicity
    if kind == "rectangle":
        z0, z1 = (_cplx(v) for v in p["corners"])
        x0, x1 = sorted((z0.real, z1.real))
        y0, y1 = sorted((z0.imag, z1.imag))
        cs = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
        n = int(p.get("n", 40))
        pts = np.concatenate([_graded_side(cs[k], cs[(k + 1) % 4], n) for k in range(4)])
        arcs = tuple(ArcSegment.line(cs[k], cs[(k + 1) % 4]) for k in range(4))
        return pts, arcs, (1,) * 4
    raise GeometryError(f"unknown contour piece type {kind!r}")


@dataclass(frozen=True)
class ContourSpec:
    """Composable, JSON-serializable contour description.

    ``pieces`` is a sequence of dicts such as ``{"type": "ellipse", "rho":
    1.5, "n": 200}``; optional keys ``label`` (default ``"curve"``) and
    ``orientation`` (``+1``/``-1``) apply to every piece.
    """

    pieces: tuple = field(default_factory=tuple)

    def discretize(self):
        if not self.pieces:
            raise GeometryError("contour spec has no pieces")
        out = None
        for p in self.pieces:
            pts, arcs, mult = _piece(p)
            if int(p.get("orientation", 1)) < 0:
                pts = pts[::-1]
            c = Contour(pts, _labels(pts.size, p.get("label", "curve")), tuple(arcs),
                        p["type"], tuple(mult))
            out = c if out is None else out + c
        _check_distinct(out.points, "contour spec")
        return out

    def to_json(self):
        return json.dumps({"pieces": list(self.pieces)}, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(dict(p) for p in d["pieces"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))
