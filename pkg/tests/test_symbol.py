import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vartoeplitz.grid import GridMap
from vartoeplitz.symbol import (DELTA, ETA, Phi, SymbolParams, cos_quadratic, eval_kappa,
                                eval_re_kappa, extrema_on_interval, fourier_coefficients,
                                momentary_correction, momentary_symbol, negative_level_measure,
                                sample_symbol, stationary_quadratic)

P = SymbolParams()
params_st = st.builds(SymbolParams, st.floats(-2, 2), st.floats(-2, 2))


def test_default_parameters():
    assert (P.delta, P.eta) == (DELTA, ETA) == (0.9672, -0.1793)


def test_kappa_point_values():
    assert eval_kappa(P, 0.0, 0.3, 1.1) == pytest.approx(1.0, abs=1e-15)
    assert eval_kappa(SymbolParams(0.0, 0.0), 2.5, 0.3, 0.4) == pytest.approx(1 / 3.5, abs=1e-15)
    assert eval_kappa(P, 1.0, 0.5, 0.0).real == pytest.approx(0.10605, abs=1e-12)
    assert eval_re_kappa(P, 1.0, 0.5, math.pi) == pytest.approx(1.07325, abs=1e-12)
    assert eval_re_kappa(P, 1.0, 0.5, math.pi / 2) == pytest.approx(0.41035, abs=1e-12)


def test_re_kappa_consistency_on_grid():
    x, th = np.meshgrid(np.linspace(0, 1, 100), np.linspace(-math.pi, math.pi, 100))
    phi = Phi.builtin("one_plus_cos2")
    assert np.abs(eval_kappa(P, phi, x, th).real - eval_re_kappa(P, phi, x, th)).max() <= 1e-14


@given(params_st, st.floats(0, 5), st.floats(-math.pi, math.pi))
def test_kappa_conjugate_symmetry(params, r, theta):
    k1 = eval_kappa(params, r, 0.5, theta)
    k2 = eval_kappa(params, r, 0.5, -theta)
    assert abs(k1 - np.conj(k2)) <= 1e-14
    assert abs(eval_re_kappa(params, r, 0.5, theta) - eval_re_kappa(params, r, 0.5, -theta)) <= 1e-15


@given(params_st, st.floats(0.0, 5.0))
def test_cos_quadratic_matches_symbol(params, r):
    theta = np.random.default_rng(1).uniform(-math.pi, math.pi, 1000)
    q = cos_quadratic(params, r)
    np.testing.assert_allclose(q(np.cos(theta)), eval_re_kappa(params, r, 0.0, theta), atol=1e-13)


def test_stationary_quadratic_vertex():
    q = stationary_quadratic(P)
    assert q.vertex == pytest.approx(1.3486, abs=1e-3)
    assert q.vertex_value == pytest.approx(0.0843, abs=1e-3)
    q0 = stationary_quadratic(SymbolParams(0.0, 0.0))
    assert q0(np.linspace(-1, 1, 5)) == pytest.approx(np.full(5, 0.5))
    q1 = cos_quadratic(P, 1.0)
    assert (q1.a, q1.b, q1.c) == pytest.approx((q.a, q.b, q.c))


def test_extrema_defaults():
    ext = extrema_on_interval(P, 1.0)
    assert ext.min == pytest.approx(0.10605, abs=1e-12)
    assert ext.max == pytest.approx(1.07325, abs=1e-12)
    assert ext.argmin == 0.0 and ext.argmax == pytest.approx(math.pi)


def test_extrema_threshold_ratio_moves_minimum_inside():
    ext = extrema_on_interval(P, 1.9398)
    assert abs(ext.min) < 5e-4
    assert 0.0 < ext.argmin < math.pi


@given(st.floats(0.0, 10.0))
def test_extrema_constant_symbol(r):
    ext = extrema_on_interval(SymbolParams(0.0, 0.0), r)
    assert ext.min == pytest.approx(1 / (1 + r)) and ext.max == pytest.approx(1 / (1 + r))


@pytest.mark.parametrize("r", [0.3, 1.0, 1.9398, 2.5, 6.0])
@pytest.mark.parametrize("params", [P, SymbolParams(1.0, 1.0), SymbolParams(0.2, 0.6)])
def test_extrema_brute_force(params, r):
    theta = np.linspace(0, math.pi, 1_000_001)
    vals = eval_re_kappa(params, r, 0.0, theta)
    ext = extrema_on_interval(params, r)
    assert ext.min == pytest.approx(vals.min(), abs=1e-6)
    assert ext.max == pytest.approx(vals.max(), abs=1e-6)
    assert ext.min <= vals.min() + 1e-15 and ext.max >= vals.max() - 1e-15


def test_negative_level_measure_examples():
    assert negative_level_measure(P, 1.0) == 0.0
    assert negative_level_measure(P, 1.9398) <= 1e-3
    theta = (np.arange(1_000_000) + 0.5) * math.pi / 1_000_000
    frac = np.mean(eval_re_kappa(P, 2.5, 0.0, theta) < 0)
    mu = negative_level_measure(P, 2.5)
    assert mu > 0
    assert mu == pytest.approx(frac * math.pi, abs=1e-5)


@given(params_st, st.floats(0.01, 10.0))
def test_negative_measure_iff_negative_minimum(params, r):
    mu = negative_level_measure(params, r)
    m = extrema_on_interval(params, r).min
    if m >= 1e-12:
        assert mu == 0.0
    if mu == 0.0:
        assert m >= -1e-12


def test_momentary_correction():
    th = np.linspace(-3, 3, 7)
    assert np.all(momentary_correction(GridMap.identity(), P, 0.4, th) == 0)
    val = momentary_correction(GridMap.affine_quadratic(), P, 1.0, 0.0)
    assert val == pytest.approx(-(2 / 3) * 0.25 * (1 + ETA), abs=1e-14)
    assert val.real == pytest.approx(-0.1367833, abs=1e-7)
    x = np.linspace(0.1, 1, 5)
    half_pi = momentary_correction(GridMap.affine_quadratic(), P, x, math.pi / 2)
    np.testing.assert_allclose(half_pi, -(2 / (1 + 2 * x)) * (1 - ETA) / 4, atol=1e-15)


@given(st.floats(-2, 2), st.floats(0.05, 1.0), st.floats(-math.pi, math.pi))
def test_momentary_correction_linear_in_eta(eta, x, theta):
    gm = GridMap.affine_quadratic()
    l0 = momentary_correction(gm, SymbolParams(DELTA, 0.0), x, theta)
    l1 = momentary_correction(gm, SymbolParams(DELTA, eta), x, theta)
    l2 = momentary_correction(gm, SymbolParams(DELTA, 2 * eta), x, theta)
    assert abs((l2 - l0) - 2 * (l1 - l0)) <= 1e-14


def test_momentary_symbol_and_domain_checks():
    gm = GridMap.affine_quadratic()
    v = momentary_symbol(gm, P, 100, 0.5, 0.3)
    assert v == pytest.approx(eval_kappa(P, 1.0, 0.5, 0.3) + momentary_correction(gm, P, 0.5, 0.3) / 100)
    with pytest.raises(ValueError):
        momentary_correction(GridMap.power(2), P, 0.0, 0.0)
    with pytest.raises(ValueError):
        momentary_correction(GridMap.table([0, 1], [0, 1]), P, 0.5, 0.0)


def test_sample_symbol():
    vals = sample_symbol(SymbolParams(0.0, 0.0), 1.0, 7, 9)
    assert vals.shape == (63,) and np.all(vals == 0.5)
    s = sample_symbol(P, Phi.builtin("square"), 30, 40, "modulus")
    assert np.all(np.diff(s) >= 0)
    mins = [sample_symbol(P, 1.0, 2, m)[0] for m in (16, 64, 256, 1024)]
    assert mins[-1] == pytest.approx(0.10605, abs=1e-12)
    assert all(b <= a + 1e-15 for a, b in zip(mins[:-1], mins[1:]))
    with pytest.raises(ValueError):
        sample_symbol(P, 1.0, 4, 4, "imaginary")


def test_fourier_coefficients():
    c = fourier_coefficients(lambda t: np.ones_like(t), 3)
    np.testing.assert_allclose(c, [0, 0, 0, 1, 0, 0, 0], atol=1e-15)
    c = fourier_coefficients(lambda t: (2 - 2 * np.cos(t)) ** 2, 2)
    np.testing.assert_allclose(c, [1, -4, 6, -4, 1], atol=1e-12)
    c = fourier_coefficients(lambda t: np.exp(1j * t), 2)
    np.testing.assert_allclose(c, [0, 0, 0, 1, 0], atol=1e-15)


def test_phi_builtins():
    x = np.array([0.0, 0.5, 1.0])
    np.testing.assert_allclose(Phi.builtin("square")(x), x**2)
    np.testing.assert_allclose(Phi.builtin("one_plus_cos2")(x), 1 + np.cos(2 * x))
    assert Phi.builtin("2.5").value == 2.5
    with pytest.raises(ValueError):
        Phi.builtin("zigzag")
    with pytest.raises(ValueError):
        eval_kappa(P, -1.0, 0.0, 0.0)
