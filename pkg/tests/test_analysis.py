import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cpilab.analysis import curve_distance, envelope, envelope_fwhm, fringe_period, normalize, visibility
from cpilab.correlator import Interferogram
from cpilab.errors import MetricError, NoFringeError

X = np.arange(-300.0, 300.0, 0.5)


def test_visibility_constant_is_zero():
    assert visibility((X, np.full_like(X, 3.0))).value == 0.0


def test_visibility_raised_cosine():
    x = np.linspace(0, 20, 2001)
    assert visibility((x, 1 + np.cos(x))).value == pytest.approx(1.0, abs=1e-3)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 100), st.floats(0, 100), st.floats(0.05, 0.95))
def test_visibility_range_and_affine_scaling(scale, offset, depth):
    y = 1 + depth * np.cos(2 * np.pi * X / 37.0)
    v = visibility((X, y)).value
    assert 0 <= v <= 1
    assert visibility((X, scale * y)).value == pytest.approx(v, rel=1e-12)


def test_visibility_window():
    y = np.where(np.abs(X) < 50, 1 + np.cos(X), 1.0)
    assert visibility((X, y), (100, 200)).value == 0.0
    with pytest.raises(MetricError):
        visibility((X, y), (1000, 2000))


def test_period_of_synthetic_cosine():
    x = np.arange(-1000.0, 1000.0, 3.0)
    m = fringe_period((x, np.cos(2 * np.pi * x / 110.8)))
    assert m.value == pytest.approx(110.8, abs=1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 50), st.floats(-100, 100))
def test_period_invariant_to_offset_and_scale(scale, offset):
    y = np.cos(2 * np.pi * X / 41.9)
    base = fringe_period((X, y)).value
    assert fringe_period((X, scale * y + offset)).value == pytest.approx(base, rel=1e-9)


def test_period_of_constant_raises():
    with pytest.raises(NoFringeError):
        fringe_period((X, np.ones_like(X)))


def test_period_needs_four_fringes():
    with pytest.raises(NoFringeError):
        fringe_period((X, np.cos(2 * np.pi * X / 300.0)))


def test_envelope_fwhm_of_gaussian():
    sigma = 20.0
    env = np.exp(-(X**2) / (2 * sigma**2))
    y = 1 + env * np.cos(2 * np.pi * X / 2.0)
    assert envelope_fwhm((X, y)).value == pytest.approx(2.355 * sigma, rel=0.02)


def test_envelope_mode_curve_uses_bounds():
    env = np.exp(-(X**2) / 200.0)
    curve = Interferogram(X, np.ones_like(X), 1 - env, 1 + env)
    x, e = envelope(curve)
    assert np.allclose(e, 2 * env)
    assert envelope_fwhm(curve).value == pytest.approx(2 * np.sqrt(2 * np.log(2) * 100), rel=1e-3)


def test_envelope_fwhm_undefined():
    curve = Interferogram(X, np.ones_like(X), np.ones_like(X), np.ones_like(X) + 1)
    with pytest.raises(MetricError):
        envelope_fwhm(curve)


def test_normalize_constant_raises():
    with pytest.raises(MetricError):
        normalize(np.ones(10))


def test_distance_self_and_affine():
    y = np.exp(-(X**2) / 500.0)
    assert curve_distance((X, y), (X, y)).l_inf == 0.0
    d = curve_distance((X, y), (X, 2 * y + 5))
    assert d.l_inf <= 1e-12 and d.l2 <= 1e-12


def test_distance_disjoint():
    with pytest.raises(MetricError):
        curve_distance((X, X**2), (X + 1000, X**2))


curves = st.lists(st.floats(-10, 10), min_size=20, max_size=20).filter(lambda v: np.ptp(v) > 1e-3)


@settings(max_examples=50, deadline=None)
@given(curves, curves, curves)
def test_distance_symmetric_triangle(a, b, c):
    x = np.arange(20.0)
    da = lambda p, q: curve_distance((x, np.array(p)), (x, np.array(q)))
    ab, bc, ac = da(a, b), da(b, c), da(a, c)
    assert ab.l_inf == pytest.approx(da(b, a).l_inf, abs=1e-12)
    assert ac.l_inf <= ab.l_inf + bc.l_inf + 1e-12
    assert ac.l2 <= ab.l2 + bc.l2 + 1e-12
