"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``python3 tests/test_acceptance.py`` or through pytest.
"""
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from cauchyquad.quadgen import (apply_rule, apply_rule_matrix, gauss_jacobi_oracle,
                                gauss_legendre_oracle)
from cauchyquad.recipes import INTEGRANDS, RecipeConfig, run_recipe
from conftest import recipe_result

TESTS = Path(__file__).parent


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        return ok
    return emit


def _timed(recipe, **kwargs):
    t0 = time.perf_counter()
    res = run_recipe(RecipeConfig(recipe, **kwargs), write=False)
    return res, time.perf_counter() - t0


def test_criterion_01_gauss(report):
    res, secs = _timed("gauss")
    m = res.metrics
    checks = {"degree 20": m["degree"] == 20,
              "error <= 1e-3": m["error"] <= 1e-3,
              "reference 0.604100": abs(m["reference"] - 0.604100) < 5e-7,
              "runtime < 5 s": secs < 5}
    ok = all(checks.values())
    report(1, ok, f"gauss n=20 error {m['error']:.2e}, {secs:.2f} s"
                  + "".join(f"; failed: {k}" for k, v in checks.items() if not v))
    assert ok, checks


def test_criterion_02_stadium_beats_ellipse(report):
    rows = []
    for n in (10, 14, 18, 22):
        s = recipe_result("stadium", degree=n).metrics["error"]
        g = recipe_result("gauss", degree=n).metrics["error"]
        rows.append((n, s, g))
    ok = all(s <= g for _, s, g in rows)
    report(2, ok, "; ".join(f"n={n}: {s:.1e} vs {g:.1e}" for n, s, g in rows))
    assert ok


def _first_degree(degrees, errors, tol):
    for n, e in zip(degrees, errors):
        if np.isfinite(e) and e <= tol:
            return n
    return None


def test_criterion_03_slits_speedup(report):
    res = recipe_result("slits", sweep=(2, 1, 14))
    n_slit = _first_degree(res.report.degrees, res.report.errors, 1e-6)
    f = INTEGRANDS["runge100"].f
    exact = res.metrics["reference"]
    n_gl = next(n for n in range(2, 400)
                if abs(apply_rule(gauss_legendre_oracle(n), f) - exact) <= 1e-6)
    ok = n_slit is not None and n_slit <= n_gl / 2
    report(3, ok, f"slit rule reaches 1e-6 at n={n_slit}, Gauss-Legendre at n={n_gl}")
    assert ok


def test_criterion_04_jacobi(report):
    res = recipe_result("jacobi")
    m = res.metrics
    p = res.config.resolved_params()
    gj = gauss_jacobi_oracle(20, p["alpha"], p["beta"])
    e_gj = abs(apply_rule(gj, INTEGRANDS["runge20"].f) - m["reference"])
    ok = m["degree"] == 20 and m["error"] <= 100 * e_gj
    report(4, ok, f"AAA {m['error']:.2e} vs Gauss-Jacobi {e_gj:.2e} "
                  f"(ratio {m['error'] / e_gj:.1f})")
    assert ok


def test_criterion_05_hankel(report):
    res, secs = _timed("hankel")
    m = res.metrics
    rho = recipe_result("hankel", sweep=(4, 2, 14)).report.rate()
    ok = m["degree"] == 14 and m["error"] <= 1e-10 and 7 <= rho <= 12 and secs < 10
    report(5, ok, f"n=14 error {m['error']:.2e}, rate {rho:.3f}, {secs:.2f} s")
    assert ok


def test_criterion_06_circle(report):
    res = recipe_result("circle")
    m = res.metrics
    r = np.abs(res.rule.nodes)
    checks = {"degree in [25, 40]": 25 <= m["degree"] <= 40,
              "error <= 1e-8": m["error"] <= 1e-8,
              "moduli in (0.9, 1.0)": bool(np.all((r > 0.9) & (r < 1.0)))}
    ok = all(checks.values())
    report(6, ok, f"degree {m['degree']}, error {m['error']:.2e}, "
                  f"moduli [{r.min():.5f}, {r.max():.5f}]"
                  + "".join(f"; failed: {k}" for k, v in checks.items() if not v))
    assert ok, checks


def test_criterion_07_strip(report):
    m = recipe_result("strip").metrics
    ok = m["error"] <= 1e-8
    report(7, ok, f"degree {m['degree']}, error {m['error']:.2e}")
    assert ok


def test_criterion_08_matfun(report):
    res = recipe_result("matfun")
    m = res.metrics
    rng = np.random.default_rng(8)
    q, _ = np.linalg.qr(rng.standard_normal((50, 50)))
    lam = np.concatenate([[1 / 8, 1.0], rng.uniform(1 / 8, 1, 48)])
    a = (q * lam) @ q.T
    b = rng.standard_normal(50)
    want = (q * np.sqrt(lam)) @ (q.T @ b)
    got = apply_rule_matrix(res.rule, np.sqrt, a, b)
    rel = np.linalg.norm(got - want) / np.linalg.norm(want)
    ok = m["degree"] == 32 and m["error"] <= 1e-7 and rel <= 1e-6
    report(8, ok, f"scalar error {m['error']:.2e}, 50x50 sqrt relative error {rel:.2e}")
    assert ok


def test_criterion_09_yinyang(report):
    m = recipe_result("yinyang").metrics
    dev = m["boundary_max_deviation"]
    ok = m["degree"] == 20 and dev <= 1e-2
    report(9, ok, f"max boundary deviation {dev:.2e}")
    assert ok


PROPERTY_TESTS = [
    "test_aaa.py::test_interpolation_identity",
    "test_aaa.py::test_interpolation_identity_on_fits",
    "test_aaa.py::test_pole_denominator_bound_random_fits",
    "test_aaa.py::test_residues_match_contour_integrals",
    "test_numkernel.py::test_svd_reconstruction_and_orthogonality",
    "test_numkernel.py::test_eig_trace_and_determinant",
    "test_numkernel.py::test_lu_random_residual",
    "test_numkernel.py::test_lu_spd_residual",
    "test_quadgen.py::test_gauss_legendre_monomials",
]


def test_criterion_10_property_suites(report):
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider"]
        + [str(TESTS / t) for t in PROPERTY_TESTS],
        capture_output=True, text=True, cwd=TESTS.parent)
    suites_ok = proc.returncode == 0
    mass = {}
    for name in ("gauss", "hankel", "circle"):
        m = recipe_result(name).metrics
        slack = 10 * m["approx_error"] * m["contour_length"] / (2 * math.pi)
        mass[name] = (m["mass_defect"], slack)
    mass_ok = all(d <= s for d, s in mass.values())
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr
    ok = suites_ok and mass_ok
    report(10, ok, f"property suites: {summary}; mass defects "
                   + ", ".join(f"{k} {d:.1e} <= {s:.1e}" for k, (d, s) in mass.items()))
    assert ok, proc.stdout[-2000:]


def test_criterion_11_exclusions(report):
    # PDE blow-up tracking and large-scale matrix applications are out of
    # scope; their quadrature kernels are exercised by criteria 3 and 8.
    report(11, True, "not applicable: excluded workloads, kernels covered by 3 and 8")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
