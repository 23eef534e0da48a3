"""Named end-to-end quadrature constructions.

Each recipe fixes a sampling contour, the data to approximate there (a
Cauchy transform or piecewise-constant targets), default fitting options
and a test integrand with a reference value.  :func:`run_recipe` runs the
pipeline

    geometry -> samples -> aaa_fit -> poles_residues -> cleanup
             -> filter_rule (closed contours) -> rule_from_rational

and optionally a convergence sweep, a phase portrait and artifact files.
"""

import contextlib
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import geometry as geo
from .aaa import (AaaOptions, SampleSet, aaa_fit, cleanup, max_error,
                  poles_residues, real_symmetrize, symmetrize_samples)
from .cauchy import WeightSpec, sample_transform
from .errors import CauchyQuadError
from .portrait import render_phase_portrait
from .quadgen import (apply_rule, convergence_sweep, error_bound, filter_rule,
                      gauss_jacobi_oracle, gauss_legendre_oracle, options_hash,
                      pairwise_sum, rule_from_rational)
from .ruleio import export_rule, tool_version

GAUSS_RHO = 1 / math.sqrt(20) + math.sqrt(21 / 20)


class RecipeError(CauchyQuadError):
    """A pipeline stage failed; ``stage`` and ``recipe`` say where."""

    def __init__(self, message, stage, recipe, cause=None):
        super().__init__(message)
        self.stage = stage
        self.recipe = recipe
        self.cause = cause


# --------------------------------------------------------------------------
# test integrands
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Integrand:
    name: str
    f: Callable
    text: str


def _two_logs(z):
    return np.log((z - 0.01j) * 1j) + np.log((z - (0.5 - 0.01j)) / 1j)


def _circle_sqrt(z):
    # -2 sqrt(z^2 - 1/4) with its cut on [-1/2, 1/2]
    z = np.asarray(z, dtype=complex)
    return -2 * z * np.sqrt(1 - 1 / (4 * z * z))


INTEGRANDS = {i.name: i for i in [
    Integrand("runge20", lambda z: 1 / (1 + 20 * np.asarray(z) ** 2), "1/(1+20z^2)"),
    Integrand("runge100", lambda z: 1 / (1 + 100 * np.asarray(z) ** 2), "1/(1+100z^2)"),
    Integrand("quarter", lambda z: 1 / (1 + np.asarray(z) ** 2 / 4), "1/(1+z^2/4)"),
    Integrand("two-logs", _two_logs, "log((z-0.01i)i) + log((z-(0.5-0.01i))/i)"),
    Integrand("hankel-pole", lambda z: -math.e / (1 + np.asarray(z)), "-e/(1+z)"),
    Integrand("circle-sqrt", _circle_sqrt, "-2 sqrt(z^2-1/4)"),
    Integrand("strip-sqrt", lambda z: -np.sqrt((np.asarray(z) - 1) / (np.asarray(z) + 1)),
              "-sqrt((z-1)/(z+1))"),
    Integrand("matfun-sqrt",
              lambda z: 16 / 7 * np.sqrt((np.asarray(z) - 1 / 8) / (np.asarray(z) - 1)),
              "(16/7) sqrt((z-1/8)/(z-1))"),
    Integrand("one", lambda z: np.ones_like(np.asarray(z, dtype=complex)), "1"),
]}

# Values of sum_k c_k f(z_k) in the limit for rules built from jump data
# (-1 inside, 0 outside) or from e^s on the negative axis.  For the jump
# rules this is (1/2 pi i) times the integral of f around a large circle,
# i.e. the coefficient of 1/z in the expansion of f at infinity.
RESIDUE_REFERENCES = {
    ("jump", "circle-sqrt"): (0.25, "closed form: 1/z coefficient of f at infinity"),
    ("jump", "strip-sqrt"): (1.0, "closed form: 1/z coefficient of f at infinity"),
    ("jump", "matfun-sqrt"): (1.0, "closed form: 1/z coefficient of f at infinity"),
    ("jump", "one"): (0.0, "closed form: f has no 1/z term"),
    ("exp_hankel", "hankel-pole"): (1.0, "closed form: e * exp(-1) from the pole at z = -1"),
}


def _unit_runge(a):
    return 2 * math.atan(math.sqrt(a)) / math.sqrt(a)


UNIT_REFERENCES = {
    "runge20": (_unit_runge(20), "closed form: 2 atan(sqrt 20)/sqrt 20"),
    "runge100": (_unit_runge(100), "closed form: 0.2 atan 10"),
    "quarter": (_unit_runge(0.25), "closed form: 4 atan(1/2)"),
    "one": (2.0, "closed form"),
}


def reference_value(weight, integrand):
    """Reference for the test integral with its provenance, or ``None``."""
    if weight.kind in ("jump", "exp_hankel"):
        return RESIDUE_REFERENCES.get((weight.kind, integrand))
    if weight.kind == "unit" and integrand in UNIT_REFERENCES:
        return UNIT_REFERENCES[integrand]
    value = weight.integrate(INTEGRANDS[integrand].f)
    return value, "adaptive Gauss-Kronrod 7/15, tol 1e-13"


# --------------------------------------------------------------------------
# registry
# --------------------------------------------------------------------------

JUMP_TARGETS = {"interior": -1.0, "exterior": 0.0}


@dataclass(frozen=True)
class Recipe:
    name: str
    summary: str
    params: dict
    contour: Callable
    # weight(params) -> WeightSpec; for target data, WeightSpec.jump()
    weight: Callable
    aaa: dict
    integrand: Optional[str]
    window: tuple
    # label -> target value; None means sample the Cauchy transform
    targets: Optional[dict] = None
    # contour -> polygon for filter_rule, for closed sampling contours
    region: Optional[Callable] = None
    shift: complex = 0j
    sweep: tuple = (2, 2, 30)
    baseline: Optional[str] = None


def _whole(contour):
    return contour.points


def _outer(contour):
    return contour.points[contour.mask("exterior")]


def _unit(p):
    return WeightSpec.unit()


def _jump(p):
    return WeightSpec.jump()


def _ellipse(p):
    return geo.ellipse(p["rho"], p["n"])


def _slits(p):
    return geo.slit_ellipse(p["rho"], [complex(t) for t in p["tips"]], p["n"], p["n_slit"])


def _ell_params(n=200, rho=GAUSS_RHO):
    return {"rho": rho, "n": n}


def _hankel_params():
    return {"n": 300, "r_min": 1e-3, "r_max": 1e4}


REGISTRY = {r.name: r for r in [
    Recipe("gauss", "unit weight on [-1, 1], sampled on a Bernstein ellipse",
           _ell_params(), _ellipse, _unit, {"degree": 20, "sign_blend": True},
           "runge20", (-1.5, 1.5, -1.0, 1.0), region=_whole, baseline="gauss-legendre"),
    Recipe("stadium", "unit weight, sampled on the boundary of an eps-neighborhood",
           {"eps": 1 / math.sqrt(20), "n_side": 100, "n_cap": 99},
           lambda p: geo.stadium(p["eps"], p["n_side"], p["n_cap"]), _unit,
           {"degree": 20, "sign_blend": True}, "runge20", (-1.5, 1.5, -1.0, 1.0),
           region=_whole, baseline="gauss-legendre"),
    Recipe("slits", "unit weight, ellipse with slits cut in to +-0.1i",
           {"rho": 1.5, "tips": [0.1j, -0.1j], "n": 200, "n_slit": 60}, _slits, _unit,
           {"degree": 14, "sign_blend": True}, "runge100", (-1.5, 1.5, -1.0, 1.0),
           region=_whole, sweep=(2, 2, 40), baseline="gauss-legendre"),
    Recipe("multislit", "unit weight, slits to 0.01i and 0.5-0.01i",
           {"rho": 1.5, "tips": [0.01j, 0.5 - 0.01j], "n": 200, "n_slit": 60}, _slits,
           _unit, {"degree": 30, "sign_blend": True}, "two-logs",
           (-1.5, 1.5, -1.0, 1.0), region=_whole, sweep=(2, 2, 40),
           baseline="gauss-legendre"),
    Recipe("jacobi", "Jacobi weight (1-z)^alpha (1+z)^beta",
           dict(_ell_params(400), alpha=-0.5, beta=1.5), _ellipse,
           lambda p: WeightSpec.jacobi(p["alpha"], p["beta"]),
           {"degree": 20, "sign_blend": True}, "runge20", (-1.5, 1.5, -1.0, 1.0),
           region=_whole, baseline="gauss-jacobi"),
    Recipe("band-weight", "sqrt(1-z^2) on 0.5 <= |z| <= 1",
           _ell_params(400), _ellipse, lambda p: WeightSpec.band(),
           {"degree": 20, "sign_blend": True}, "runge20", (-1.5, 1.5, -1.0, 1.0),
           region=_whole),
    Recipe("oscillatory", "exp(i omega g(z)) on [-1, 1]",
           dict(_ell_params(400, 2.0), omega=25 * math.pi, phase="z"), _ellipse,
           lambda p: WeightSpec.oscillatory(p["omega"], p["phase"]),
           {"degree": 20, "sign_blend": True}, "quarter", (-1.5, 1.5, -1.0, 1.0),
           region=_whole, sweep=(2, 2, 24)),
    Recipe("hankel", "e^s on the negative real axis (inverse Laplace transform)",
           _hankel_params(),
           lambda p: geo.hankel_domain(p["n"], p["r_min"], p["r_max"]),
           lambda p: WeightSpec.exp_hankel(), {"degree": 14}, "hankel-pole",
           (-12.0, 6.0, -9.0, 9.0), sweep=(4, 2, 14)),
    Recipe("sector", "e^s on two rays at angle pi -+ theta",
           dict(_hankel_params(), theta=geo.SECTOR_ANGLE),
           lambda p: geo.sector_domain(p["n"], p["r_min"], p["r_max"], p["theta"]),
           lambda p: WeightSpec.exp_hankel(), {"degree": 20}, "hankel-pole",
           (-12.0, 6.0, -9.0, 9.0), sweep=(4, 2, 20)),
    Recipe("circle", "jump across the unit circle: -1 at radius 0.5, 0 at radius 2",
           {"r_inner": 0.5, "r_outer": 2.0, "n": 100},
           lambda p: geo.annulus_pair(p["r_inner"], p["r_outer"], p["n"]), _jump,
           {"tol": 1e-8, "sign_blend": True, "lawson_steps": 20}, "circle-sqrt",
           (-2.5, 2.5, -2.5, 2.5), JUMP_TARGETS, region=_outer, shift=0.5,
           sweep=(10, 5, 40)),
    Recipe("strip", "-1 on [-1, 1], 0 on the lines Im z = +-1",
           {"n_long": 199, "n_segment": 200, "mode": "corrected"},
           lambda p: geo.strip_minus_segment(p["n_long"], p["n_segment"], p["mode"]),
           _jump, {"tol": 1e-8, "sign_blend": True, "lawson_steps": 20}, "strip-sqrt",
           (-3.0, 3.0, -2.0, 2.0), JUMP_TARGETS, shift=0.5, sweep=(10, 5, 45)),
    Recipe("matfun", "-1 on [m, M], 0 on the negative real axis",
           {"n_segment": 100, "n_negreal": 100, "m": 1 / 8, "M": 1.0},
           lambda p: geo.interval_plus_cut(p["n_segment"], p["n_negreal"], p["m"], p["M"]),
           _jump, {"degree": 32, "sign_blend": True, "lawson_steps": 50, "damping": 0.5},
           "matfun-sqrt", (-2.0, 2.0, -1.5, 1.5), JUMP_TARGETS, shift=0.5,
           sweep=(8, 4, 40)),
    Recipe("rectangle", "-1 on a rectangle in the right half-plane, 0 on the negative axis",
           {"corners": [0.0625 - 0.5j, 1.125 + 0.5j], "n": 40, "n_negreal": 100},
           lambda p: geo.rectangle_exterior([complex(c) for c in p["corners"]], p["n"],
                                            p["n_negreal"]),
           _jump, {"degree": 40, "sign_blend": True}, "matfun-sqrt",
           (-2.0, 2.0, -1.5, 1.5), JUMP_TARGETS, shift=0.5, sweep=(8, 4, 48)),
    Recipe("yinyang", "-1 on yin, +1 on yang (two-valued diagnostic)",
           {"n": 100}, lambda p: geo.yin_yang(p["n"]), _jump,
           {"degree": 20, "sign_blend": True}, None, (-1.5, 1.5, -1.5, 1.5),
           {"yin": -1.0, "yang": 1.0}),
    Recipe("custom", "contour and weight from a JSON document", {}, None, None,
           {"degree": 20}, None, (-2.0, 2.0, -2.0, 2.0)),
]}


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

def parse_sweep(text):
    """``"N1:STEP:N2"`` -> (N1, STEP, N2), inclusive of N2."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ValueError(f"sweep must look like N1:STEP:N2, got {text!r}")
    n1, step, n2 = (int(v) for v in parts)
    if n1 < 1 or step < 1 or n2 < n1:
        raise ValueError(f"invalid sweep range {text!r}")
    return n1, step, n2


@dataclass(frozen=True)
class RecipeConfig:
    """Everything needed to reproduce one recipe run.

    Unset fitting options fall back to the recipe's defaults.  ``degree``
    and ``tol`` replace the default stopping rule as a pair: giving either
    one drops the other unless both are given.  ``params`` overrides
    geometry and weight parameters by name; ``spec`` is a JSON-style
    document ``{"pieces": [...], "weight": {...}}`` that replaces the
    recipe's contour (and, for ``custom``, supplies the weight).
    """

    recipe: str
    degree: Optional[int] = None
    tol: Optional[float] = None
    sign_blend: Optional[bool] = None
    lawson_steps: Optional[int] = None
    damping: Optional[float] = None
    enforce_real_symmetry: bool = False
    params: dict = field(default_factory=dict)
    integrand: Optional[str] = None
    sweep: Optional[tuple] = None
    out_dir: Optional[str] = None
    rule_formats: tuple = ("csv", "json")
    portrait: Optional[tuple] = None
    portrait_shift: Optional[complex] = None
    spec: Optional[dict] = None
    workers: int = 1

    def __post_init__(self):
        if self.recipe not in REGISTRY:
            raise ValueError(f"unknown recipe {self.recipe!r}; choose from "
                             + ", ".join(REGISTRY))
        unknown = set(self.params) - set(REGISTRY[self.recipe].params)
        if unknown:
            raise ValueError(f"recipe {self.recipe!r} has no parameter(s) "
                             + ", ".join(sorted(unknown)))
        if self.degree is not None and self.degree < 1:
            raise ValueError("degree must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.integrand is not None and self.integrand not in INTEGRANDS:
            raise ValueError(f"unknown integrand {self.integrand!r}; choose from "
                             + ", ".join(INTEGRANDS))
        if self.sweep is not None:
            parse_sweep(":".join(str(v) for v in self.sweep))
        if self.portrait is not None:
            w, h = self.portrait
            if not (1 <= w and 1 <= h and w * h <= 4096 * 4096):
                raise ValueError("portrait resolution must be within 4096 x 4096")
        if self.recipe == "custom" and self.spec is None:
            raise ValueError("the custom recipe needs a geometry/weight document")
        for fmt in self.rule_formats:
            if fmt not in ("csv", "json"):
                raise ValueError(f"unknown rule format {fmt!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def definition(self):
        return REGISTRY[self.recipe]

    def resolved_params(self):
        p = dict(self.definition.params)
        p.update(self.params)
        return p

    def aaa_options(self, degree=None):
        """Effective AaaOptions (``degree`` forces a fixed-degree fit)."""
        d = dict(self.definition.aaa)
        if self.degree is not None or self.tol is not None:
            d.pop("degree", None)
            d.pop("tol", None)
            if self.degree is not None:
                d["degree"] = self.degree
            if self.tol is not None:
                d["tol"] = self.tol
        if degree is not None:
            d.pop("tol", None)
            d["degree"] = degree
        for key in ("sign_blend", "lawson_steps", "damping"):
            v = getattr(self, key)
            if v is not None:
                d[key] = v
        d["enforce_real_symmetry"] = self.enforce_real_symmetry
        d["cleanup"] = False
        return AaaOptions(**d)

    def sweep_degrees(self):
        n1, step, n2 = self.sweep if self.sweep is not None else self.definition.sweep
        return tuple(range(n1, n2 + 1, step))

    def echo(self):
        """JSON-ready dict of the configuration."""
        d = asdict(self)
        d["params"] = _jsonable(self.resolved_params())
        opts = asdict(self.aaa_options())
        # cleanup runs as its own pipeline stage rather than inside aaa_fit
        opts["cleanup"] = True
        d["aaa_options"] = _jsonable(opts)
        return _jsonable(d)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [_jsonable(float(x.real)), _jsonable(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


# --------------------------------------------------------------------------
# pipeline
# --------------------------------------------------------------------------

@contextlib.contextmanager
def _stage(recipe, stage):
    try:
        yield
    except RecipeError:
        raise
    except Exception as exc:
        raise RecipeError(f"recipe {recipe!r} failed at stage {stage!r}: "
                          f"{type(exc).__name__}: {exc}", stage, recipe, exc) from exc


@dataclass
class RecipeResult:
    config: RecipeConfig
    contour: geo.Contour
    samples: SampleSet
    weight: WeightSpec
    rational: object
    pole_residue: object
    rule: object
    removed: np.ndarray
    metrics: dict
    report: object = None
    artifacts: list = field(default_factory=list)


def _custom_weight(spec):
    w = spec.get("weight")
    if w is None:
        raise ValueError("geometry document has no 'weight' entry")
    return WeightSpec.from_dict(w)


def build_contour(config):
    name = config.recipe
    with _stage(name, "geometry"):
        if config.spec is not None:
            return geo.ContourSpec.from_dict(config.spec).discretize()
        return config.definition.contour(config.resolved_params())


def build_samples(config, contour, weight):
    """Sample data on ``contour``: jump targets by label, else C(s)."""
    rec = config.definition
    with _stage(config.recipe, "sample_transform"):
        if weight.kind == "jump":
            targets = rec.targets
            if targets is None:
                targets = {"interior": weight.interior_value,
                           "exterior": weight.exterior_value}
            missing = set(contour.labels) - set(targets)
            if missing:
                raise ValueError("contour labels without target values: "
                                 + ", ".join(sorted(map(str, missing))))
            values = np.array([targets[lab] for lab in contour.labels], dtype=complex)
            samples = SampleSet(contour.points, values, config.recipe)
        else:
            samples = sample_transform(weight, contour.points, label=config.recipe)
        if config.enforce_real_symmetry:
            samples = symmetrize_samples(samples)
        return samples


def fit_rule(config, contour, samples, opts, provenance=""):
    """AAA fit, pole-residue form, cleanup, optional filter -> rule."""
    name = config.recipe
    with _stage(name, "aaa_fit"):
        r = aaa_fit(samples, opts)
    with _stage(name, "poles_residues"):
        pr = poles_residues(r, samples)
    with _stage(name, "cleanup"):
        pr, r = cleanup(pr, r, samples, opts.cleanup_tol, opts.sign_blend,
                        opts.enforce_real_symmetry)
        if opts.enforce_real_symmetry:
            pr = real_symmetrize(pr)
    with _stage(name, "rule_from_rational"):
        eps = max_error(r, samples)
        rule = rule_from_rational(pr, contour.length(), eps, provenance)
    removed = np.zeros(0, complex)
    region = config.definition.region
    if region is not None and config.spec is None:
        with _stage(name, "filter_rule"):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                rule, removed = filter_rule(rule, region(contour))
    return r, pr, rule, removed


def _sup_on(f, points):
    with np.errstate(all="ignore"):
        v = np.abs(np.asarray(f(points), dtype=complex))
    return float(np.max(v)) if np.all(np.isfinite(v)) else math.inf


def _measure(config, contour, samples, weight, r, rule, removed):
    m = {
        "degree": rule.degree,
        "approx_error": rule.approx_error,
        "contour_length": rule.contour_length,
        "removed_nodes": int(removed.size),
        "weight_sum": complex(pairwise_sum(rule.weights)),
        "notes": list(r.notes),
    }
    targets = config.definition.targets or {"exterior": weight.exterior_value}
    if weight.kind == "exp_hankel" or (weight.kind == "jump"
                                       and targets.get("exterior") == 0):
        mass = 0j
    elif weight.kind == "jump":
        # no exterior component pinning r at infinity: no mass to compare
        mass = None
    else:
        mass = weight.mass()
    if mass is not None:
        m["mass"] = mass
        m["mass_defect"] = abs(m["weight_sum"] - mass)
    if config.recipe == "yinyang":
        m["boundary_max_deviation"] = float(np.max(np.abs(r(samples.points) - samples.values)))
    name = config.integrand or config.definition.integrand
    if config.spec is not None and "integrand" in config.spec:
        name = config.integrand or config.spec["integrand"]
    if name is None:
        return m
    f = INTEGRANDS[name].f
    m["integrand"] = name
    with _stage(config.recipe, "apply_rule"):
        value = apply_rule(rule, f)
    m["value"] = value
    ref = None
    if config.spec is not None and "reference" in config.spec:
        ref = (complex(*config.spec["reference"]), "given in the geometry document")
    elif weight.kind in ("jump", "exp_hankel") or weight.kind in (
            "unit", "jacobi", "band", "oscillatory", "tabulated"):
        with _stage(config.recipe, "reference"):
            ref = reference_value(weight, name)
    if ref is not None:
        m["reference"] = complex(ref[0])
        m["reference_provenance"] = ref[1]
        m["error"] = abs(value - ref[0])
        m["error_bound"] = error_bound(rule, _sup_on(f, contour.points))
    return m


def _baseline(config):
    kind = config.definition.baseline
    if config.spec is not None or kind is None:
        return None
    if kind == "gauss-legendre":
        return gauss_legendre_oracle
    p = config.resolved_params()
    return lambda n: gauss_jacobi_oracle(n, p["alpha"], p["beta"])


def run_recipe(config, write=True):
    """Run a recipe end to end.

    Returns a :class:`RecipeResult`.  Artifacts (``rule.csv``,
    ``rule.json``, ``sweep.csv``, ``portrait.ppm``, ``run.json``) go to
    ``config.out_dir`` when it is set and ``write`` is true; they are
    written only after all computation succeeds, and removed again if
    writing fails part way.

    Raises
    ------
    RecipeError
        Naming the failed stage; ``cause`` holds the original exception.
    """
    name = config.recipe
    if name == "custom":
        with _stage(name, "geometry"):
            weight = _custom_weight(config.spec)
    else:
        weight = config.definition.weight(config.resolved_params())
    contour = build_contour(config)
    samples = build_samples(config, contour, weight)
    opts = config.aaa_options()
    provenance = f"{name} {options_hash({k: v for k, v in config.echo().items() if k != 'out_dir'})}"
    r, pr, rule, removed = fit_rule(config, contour, samples, opts, provenance)
    metrics = _measure(config, contour, samples, weight, r, rule, removed)

    report = None
    if config.sweep is not None and "reference" in metrics:
        f = INTEGRANDS[metrics["integrand"]].f

        def build(n):
            return fit_rule(config, contour, samples, config.aaa_options(n),
                            provenance)[2]

        with _stage(name, "convergence_sweep"):
            report = convergence_sweep(build, config.sweep_degrees(), f,
                                       metrics["reference"],
                                       metrics["reference_provenance"],
                                       _baseline(config), config.workers)

    result = RecipeResult(config, contour, samples, weight, r, pr, rule, removed,
                          metrics, report)
    if write and config.out_dir is not None:
        write_artifacts(result)
    return result


def run_document(result):
    cfg = result.config
    doc = {
        "recipe": cfg.recipe,
        "tool_version": tool_version(),
        "config": cfg.echo(),
        "metrics": _jsonable(result.metrics),
        "artifacts": [p.name for p in result.artifacts],
    }
    if result.report is not None:
        doc["sweep"] = _jsonable({
            "degrees": result.report.degrees,
            "errors": result.report.errors,
            "baseline": result.report.baseline,
            "gaps": {str(k): v for k, v in result.report.gaps.items()},
        })
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def write_artifacts(result):
    cfg = result.config
    out = Path(cfg.out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for fmt in cfg.rule_formats:
            written.append(export_rule(result.rule, out / f"rule.{fmt}", fmt))
        if result.report is not None:
            p = out / "sweep.csv"
            p.write_text(result.report.to_csv(), encoding="utf-8")
            written.append(p)
        if cfg.portrait is not None:
            shift = cfg.portrait_shift
            if shift is None:
                shift = cfg.definition.shift
            p = out / "portrait.ppm"
            render_phase_portrait(result.rational, cfg.definition.window,
                                  cfg.portrait, p, shift)
            written.append(p)
        result.artifacts = written + [out / "run.json"]
        p = out / "run.json"
        p.write_text(run_document(result), encoding="utf-8")
        written.append(p)
    except Exception as exc:
        for p in written:
            with contextlib.suppress(OSError):
                p.unlink()
        result.artifacts = []
        raise RecipeError(f"recipe {cfg.recipe!r} failed at stage 'write': "
                          f"{type(exc).__name__}: {exc}", "write", cfg.recipe,
                          exc) from exc
    return written
