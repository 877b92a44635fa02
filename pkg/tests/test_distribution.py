import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vartoeplitz.distribution import (eigen_distribution_test, extreme_convergence_study,
                                      negative_count_law, quantile_distance, ratios_from_phi,
                                      resample_quantiles, singular_distribution_test)
from vartoeplitz.eigsolve import fit_convergence_order, jacobi_eigenvalues
from vartoeplitz.matrix import stationary_toeplitz
from vartoeplitz.symbol import Phi, SymbolParams, sample_symbol

P = SymbolParams()
# frozen after calibration: quantile L1 of T_100(Re kappa_1) eigenvalues vs 400x400 symbol samples
TOEPLITZ_100_L1 = 0.0018782054449871233

samples = st.lists(st.floats(-100, 100), min_size=1, max_size=30)


def test_quantile_distance_examples():
    assert quantile_distance([1, 2, 3], [3, 2, 1]) == (0.0, 0.0)
    assert quantile_distance([0, 1], [1, 2]) == (1.0, 1.0)
    with pytest.raises(ValueError):
        quantile_distance([], [1])


def test_resample_quantiles():
    v = np.arange(10.0)
    assert np.array_equal(resample_quantiles(v, 10), v)
    np.testing.assert_allclose(resample_quantiles(v, 5), [0.5, 2.5, 4.5, 6.5, 8.5])


@given(samples, samples, samples)
def test_pseudometric(a, b, c):
    n = min(len(a), len(b), len(c))
    a, b, c = a[:n], b[:n], c[:n]
    dab, dbc, dac = quantile_distance(a, b)[0], quantile_distance(b, c)[0], quantile_distance(a, c)[0]
    assert dab == pytest.approx(quantile_distance(b, a)[0])
    assert dac <= dab + dbc + 1e-9
    assert quantile_distance(a, a) == (0.0, 0.0)


def test_ratios_from_phi():
    np.testing.assert_allclose(ratios_from_phi(lambda x: x**2, 4), [0.25, 0.5625, 1.0])
    with pytest.raises(ValueError):
        ratios_from_phi(lambda x: x - 0.5, 4)


def test_toeplitz_eigenvalues_close_to_symbol():
    ev = jacobi_eigenvalues(stationary_toeplitz(P, 100)).values
    l1, _ = quantile_distance(ev, sample_symbol(P, Phi.constant(1.0), 400, 400))
    assert l1 < 0.02
    assert l1 == pytest.approx(TOEPLITZ_100_L1, rel=1e-6)


def test_stationary_distance_decay_slope():
    ns = [32, 64, 128, 256]
    reps = eigen_distribution_test(Phi.constant(1.0), P, ns)
    assert all(r.passed for r in reps)
    assert -fit_convergence_order(ns, [r.l1 for r in reps]) <= -0.5


@pytest.mark.parametrize("phi,params", [("square", SymbolParams(1.0, -0.5)),
                                        ("one_plus_cos2", SymbolParams(1.0, 1.0))])
def test_distribution_decreases_small_n(phi, params):
    f = Phi.builtin(phi)
    for fn in (eigen_distribution_test, singular_distribution_test):
        reps = fn(f, params, [80, 120])
        assert reps[1].l1 < reps[0].l1 and reps[1].passed


def test_uncoupled_unit_ratio_is_exact():
    # S_n = I/2 and every singular value is 1/2, matching the constant symbol 1/2
    one, params = Phi.constant(1.0), SymbolParams(0.0, 0.0)
    rep = eigen_distribution_test(one, params, [20])[0]
    assert rep.l1 == 0.0 and rep.lambda_min == rep.lambda_max == 0.5
    rep = singular_distribution_test(one, params, [20])[0]
    assert rep.l1 == 0.0 and rep.lambda_min == rep.lambda_max == 0.5


def test_zero_ratio_function_rejected():
    with pytest.raises(ValueError):
        eigen_distribution_test(Phi.constant(0.0), P, [20])


def test_uncoupled_singular_values():
    phi = Phi.builtin("square")
    reps = singular_distribution_test(phi, SymbolParams(0.0, 0.0), [40, 80, 160])
    assert reps[-1].l1 < reps[0].l1 and reps[-1].l1 < 5e-3
    # singular values are the diagonal entries 1 / (1 + r_i)
    r = ratios_from_phi(phi, 40)
    assert reps[0].lambda_min == pytest.approx((1 / (1 + r)).min())


def test_increasing_ns_required():
    with pytest.raises(ValueError):
        eigen_distribution_test(Phi.constant(1.0), P, [40, 20])


def test_negative_count_law_small():
    recs, mu = negative_count_law(1.0, P, [32, 64, 128])
    assert mu == 0.0 and all(r.count == 0 for r in recs)
    recs, mu = negative_count_law(1.9398, P, [32, 64, 128])
    assert all(r.count <= 2 for r in recs)
    recs, mu = negative_count_law(2.5, P, [32, 64, 128])
    assert all(r.gap <= max(5.0, 2 * recs[0].gap) for r in recs)
    assert recs[-1].predicted == pytest.approx(128 * mu / math.pi)


def test_extreme_study_small():
    st_ = extreme_convergence_study(P, [16, 32, 64, 128])
    assert all(lo > st_.m for lo in st_.lambda_min) and all(hi < st_.M for hi in st_.lambda_max)
    assert all(b <= a for a, b in zip(st_.lambda_min[:-1], st_.lambda_min[1:]))
    assert all(b >= a for a, b in zip(st_.lambda_max[:-1], st_.lambda_max[1:]))
    assert st_.order_min == pytest.approx(2.0, abs=0.3)
