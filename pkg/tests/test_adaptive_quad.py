import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, strategies as st

from cauchyquad import adaptive_quad as aq
from cauchyquad.errors import ConvergenceError
from cauchyquad.geometry import stadium

TIGHT = aq.QuadTolerance(1e-15, 1e-15)


def test_constant_on_unit_segment():
    res = aq.integrate(lambda z: np.ones_like(z), aq.ArcSegment.line(0, 1))
    assert res.value == pytest.approx(1.0, abs=1e-15)
    assert res.evals >= 15


def test_runge_integral():
    res = aq.integrate(lambda z: 1 / (1 + 20 * z * z), aq.ArcSegment.line(-1, 1))
    exact = 2 * math.atan(math.sqrt(20)) / math.sqrt(20)
    assert round(res.value.real, 6) == 0.604100
    assert abs(res.value - exact) <= 1e-13


def test_jacobi_weight_against_cos_substitution():
    arc = aq.ArcSegment.line(-1, 1, singular_start=False, singular_end=True)
    res = aq.integrate(lambda z, da, db: da ** 1.5 * db ** -0.5, arc, TIGHT, offsets=True)
    # z = cos(theta) makes the integrand 4 cos(theta/2)**4: smooth
    oracle, _ = scipy.integrate.quad(lambda t: 4 * math.cos(t / 2) ** 4, 0, math.pi,
                                     epsabs=1e-13, epsrel=1e-13)
    assert abs(res.value - oracle) <= 1e-12
    assert abs(oracle - 1.5 * math.pi) <= 1e-13


@pytest.mark.parametrize("alpha", [-0.9, -0.5, 0.5])
def test_endpoint_singularity_converges(alpha):
    arc = aq.ArcSegment.line(0, 1, singular_start=True)
    res = aq.integrate(lambda z, da, db: da ** alpha, arc, aq.QuadTolerance(1e-13, 1e-13),
                       offsets=True)
    assert abs(res.value - 1 / (alpha + 1)) <= 1e-11 / (alpha + 1)
    assert res.evals < aq.MAX_EVALS


def test_additivity():
    f = lambda z: np.exp(z) / (1 + 4 * z * z)
    whole = aq.integrate(f, aq.ArcSegment.line(-1, 1)).value
    halves = aq.integrate_path(f, [aq.ArcSegment.line(-1, 0), aq.ArcSegment.line(0, 1)]).value
    assert abs(whole - halves) <= 1e-12


def test_circle_in_four_arcs():
    arcs = [aq.ArcSegment.circular_arc(0, 1, k * np.pi / 2, (k + 1) * np.pi / 2)
            for k in range(4)]
    res = aq.integrate_path(lambda z: 1 / z, arcs)
    assert abs(res.value - 2j * np.pi) <= 1e-10


def test_closed_stadium_integrates_constant_to_zero():
    c = stadium(1 / math.sqrt(20))
    res = aq.integrate_path(lambda z: np.ones_like(z), c.arcs)
    assert abs(res.value) <= 1e-12


@pytest.mark.parametrize("k", range(23))
def test_kronrod_exact_through_degree_22(k):
    # one panel: the 15-point rule itself
    value = np.sum(aq.KRONROD_WEIGHTS * aq.KRONROD_NODES ** k)
    exact = (1 - (-1) ** (k + 1)) / (k + 1)
    assert abs(value - exact) <= 1e-12
    res = aq.integrate(lambda z: z ** k, aq.ArcSegment.line(-1, 1))
    assert abs(res.value - exact) <= 1e-12


def test_gauss_rule_embedded():
    # the 7-point Gauss rule integrates degree 13 exactly
    value = np.sum(aq.GAUSS_WEIGHTS * aq.KRONROD_NODES ** 12)
    assert value == pytest.approx(2 / 13, abs=1e-14)


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_linearity(a, b):
    seg = aq.ArcSegment.line(-1 + 0.5j, 2)
    f = lambda z: np.cos(3 * z)
    g = lambda z: 1 / (z + 3)
    lhs = aq.integrate(lambda z: a * f(z) + b * g(z), seg).value
    rhs = a * aq.integrate(f, seg).value + b * aq.integrate(g, seg).value
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(a) + abs(b))


def test_arc_derivative_consistency():
    for arc in (aq.ArcSegment.line(0, 1 + 2j), aq.ArcSegment.circular_arc(1j, 2, 0.1, 2.0)):
        assert arc.check_derivative() <= 1e-6
    assert aq.ArcSegment.circular_arc(0, 2, 0, 2 * np.pi).length() == pytest.approx(4 * np.pi)


def test_nan_names_abscissa():
    with pytest.raises(FloatingPointError, match="z ="):
        aq.integrate(lambda z: np.full_like(z, np.nan), aq.ArcSegment.line(0, 1))


def test_nonconvergence_carries_partial():
    with pytest.raises(ConvergenceError) as info:
        aq.integrate(lambda z: 1 / np.abs(z - (1 / np.pi + 1e-300j)), aq.ArcSegment.line(0, 1),
                     aq.QuadTolerance(1e-14, 0))
    part = info.value.partial
    assert isinstance(part, aq.QuadResult)
    assert np.isfinite(part.value)


def test_vector_valued_integrand():
    s = np.array([2.0, 3.0, -4.0])
    res = aq.integrate(lambda z: 1 / (s[None, :] - z[:, None]), aq.ArcSegment.line(-1, 1))
    assert np.allclose(res.value, np.log((s + 1) / (s - 1)), atol=1e-13)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        aq.QuadTolerance(0, 0)
    with pytest.raises(ValueError):
        aq.QuadTolerance(-1, 1)
