"""Command line interface: ``cauchyquad <recipe> [options]``.

Exit status is 0 on success, 2 when the approximation pipeline fails and
3 on file input/output errors.
"""

import argparse
import json
import sys
import time

from .errors import CauchyQuadError
from .recipes import INTEGRANDS, REGISTRY, RecipeConfig, RecipeError, parse_sweep, run_recipe

EXIT_OK = 0
EXIT_APPROX = 2
EXIT_IO = 3


def _resolution(text):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None
    if w < 1 or h < 1 or w * h > 4096 * 4096:
        raise argparse.ArgumentTypeError("resolution must be within 4096x4096")
    return w, h


def _sweep(text):
    try:
        return parse_sweep(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _param(text):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        v = json.loads(value)
    except json.JSONDecodeError:
        try:
            v = complex(value.replace(" ", ""))
        except ValueError:
            v = value
    if isinstance(v, list):
        v = [complex(x.replace(" ", "")) if isinstance(x, str) else x for x in v]
    return key, v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cauchyquad",
        description="Build quadrature rules by rational approximation of "
                    "Cauchy transforms.")
    sub = parser.add_subparsers(dest="recipe", metavar="recipe", required=True)
    for name, rec in REGISTRY.items():
        p = sub.add_parser(name, help=rec.summary, description=rec.summary)
        stop = p.add_argument_group("stopping rule")
        stop.add_argument("--degree", type=int, help="rational degree n")
        stop.add_argument("--tol", type=float, help="relative sample tolerance")
        p.add_argument("--lawson", type=int, dest="lawson_steps", metavar="K",
                       help="Lawson steps after AAA")
        p.add_argument("--damping", type=float, help="Lawson damping in (0, 1]")
        p.add_argument("--sign", dest="sign_blend", action="store_true", default=None,
                       help="blend singular vectors (for two-valued data)")
        p.add_argument("--no-sign", dest="sign_blend", action="store_false",
                       help="use the plain smallest singular vector")
        p.add_argument("--real-symmetry", action="store_true",
                       help="enforce conjugate symmetry of nodes and weights")
        p.add_argument("--sweep", nargs="?", const="default", metavar="N1:STEP:N2",
                       help="convergence sweep over degrees (recipe default if "
                            "no range is given)")
        p.add_argument("--out", default=".", metavar="DIR",
                       help="artifact directory (default: current directory)")
        p.add_argument("--format", choices=["csv", "json", "both"], default="both",
                       help="rule file format")
        p.add_argument("--portrait", type=_resolution, metavar="WxH",
                       help="write a phase portrait of the approximation")
        p.add_argument("--shift", type=complex, metavar="S",
                       help="portrait shows arg(r(z) + S)")
        p.add_argument("--seed-geometry", metavar="FILE.json",
                       help="contour (and, for custom, weight) from a JSON file")
        p.add_argument("--integrand", choices=sorted(INTEGRANDS),
                       help="named test integrand")
        p.add_argument("--param", type=_param, action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a geometry/weight parameter "
                            f"({', '.join(rec.params) or 'none'})")
        if name == "oscillatory":
            p.add_argument("--phase", choices=["z", "z4"],
                           help="phase function g in exp(i omega g(z))")
        p.add_argument("--workers", type=int, default=1,
                       help="threads for sweep fits")
        p.add_argument("--quiet", action="store_true", help="no summary on stdout")
    return parser


def config_from_args(args):
    params = dict(args.param)
    if getattr(args, "phase", None):
        params["phase"] = args.phase
    spec = None
    if args.seed_geometry:
        with open(args.seed_geometry, encoding="utf-8") as fh:
            spec = json.load(fh)
    sweep = None
    if args.sweep == "default":
        sweep = REGISTRY[args.recipe].sweep
    elif args.sweep is not None:
        sweep = parse_sweep(args.sweep)
    formats = ("csv", "json") if args.format == "both" else (args.format,)
    return RecipeConfig(
        recipe=args.recipe, degree=args.degree, tol=args.tol,
        sign_blend=args.sign_blend, lawson_steps=args.lawson_steps,
        damping=args.damping, enforce_real_symmetry=args.real_symmetry,
        params=params, integrand=args.integrand, sweep=sweep, out_dir=args.out,
        rule_formats=formats, portrait=args.portrait, portrait_shift=args.shift,
        spec=spec, workers=args.workers)


def _summary(result, seconds):
    m = result.metrics
    lines = [f"recipe {result.config.recipe}: degree {m['degree']}, "
             f"sample error {m['approx_error']:.3e}"]
    if "error" in m:
        v = m["value"]
        lines.append(f"  I_n = {v.real:.15g} {v.imag:+.3g}i   |I - I_n| = {m['error']:.3e}"
                     f"   ({m['integrand']})")
    if "boundary_max_deviation" in m:
        lines.append(f"  max boundary deviation {m['boundary_max_deviation']:.3e}")
    if m["removed_nodes"]:
        lines.append(f"  removed {m['removed_nodes']} node(s) outside the region")
    if result.report is not None:
        for n, e in zip(result.report.degrees, result.report.errors):
            lines.append(f"  n = {n:3d}   error {e:.3e}")
    for note in m["notes"]:
        lines.append(f"  note: {note}")
    for p in result.artifacts:
        lines.append(f"  wrote {p}")
    lines.append(f"  {seconds:.2f} s")
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except OSError as exc:
        print(f"cauchyquad: cannot read geometry file: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"cauchyquad: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_APPROX
    t0 = time.perf_counter()
    try:
        result = run_recipe(config)
    except RecipeError as exc:
        print(f"cauchyquad: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc.cause, OSError) else EXIT_APPROX
    except CauchyQuadError as exc:
        print(f"cauchyquad: {exc}", file=sys.stderr)
        return EXIT_APPROX
    if not args.quiet:
        print(_summary(result, time.perf_counter() - t0))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
