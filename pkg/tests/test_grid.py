from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vartoeplitz.grid import (GridMap, GridSpec, SplitMix64, TimeGrid, grid_from_ratios,
                              mapped_grid, power_ratio_exact, random_ratio_grid, ratios_of,
                              uniform_grid)

# n * max|r_i - 1| for the affine-quadratic map stays below this (it tends to 2 from below)
AFFINE_QUADRATIC_RATIO_CONSTANT = 2.0


def test_uniform_grid_points():
    np.testing.assert_allclose(uniform_grid(4, 1.0).points, [0, 0.25, 0.5, 0.75, 1])
    np.testing.assert_allclose(uniform_grid(2, 2.0).points, [0, 1, 2])
    np.testing.assert_allclose(ratios_of(uniform_grid(100, 1.0)), 1.0, rtol=0, atol=1e-12)


def test_uniform_grid_rejects_small_n():
    with pytest.raises(ValueError):
        uniform_grid(1)


@pytest.mark.parametrize("pts", [[0.0, 0.5, 0.5, 1.0], [0.1, 1.0], [0.0, 1.0], [0.0, 0.7, 0.6]])
def test_timegrid_validation(pts):
    # repeated point, nonzero start, n = 1, decreasing
    with pytest.raises(ValueError):
        TimeGrid(pts)


def test_power_grids():
    np.testing.assert_allclose(mapped_grid(GridMap.power(2), 4).points, np.array([0, 1, 4, 9, 16]) / 16)
    np.testing.assert_allclose(mapped_grid(GridMap.power(3), 10).points, (np.arange(11) / 10) ** 3)
    np.testing.assert_allclose(mapped_grid(GridMap.identity(), 17, 3.0).points, uniform_grid(17, 3.0).points)


def test_power2_ratios_closed_form():
    n = 40
    r = ratios_of(mapped_grid(GridMap.power(2), n))
    i = np.arange(2, n + 1)
    np.testing.assert_allclose(r, (2 * i - 1) / (2 * i - 3), rtol=1e-12)
    assert power_ratio_exact(2, 2) == Fraction(3)
    assert power_ratio_exact(3, 2) == Fraction(7)
    assert power_ratio_exact(2, 5) == Fraction(9, 7)


def test_geometric_grid_ratios():
    q, n = 1.5, 20
    t = q ** np.arange(n + 1) - 1
    r = ratios_of(TimeGrid(t / t[-1]))
    np.testing.assert_allclose(r, q, rtol=1e-12)


def test_grid_from_ratios_examples():
    np.testing.assert_allclose(grid_from_ratios(np.ones(9)).points, uniform_grid(10).points, atol=1e-15)
    g = grid_from_ratios([3, 5 / 3, 7 / 5, 9 / 7])
    np.testing.assert_allclose(g.points, (np.arange(6) / 5) ** 2, atol=1e-15)


@given(st.lists(st.floats(0.05, 20.0), min_size=1, max_size=60), st.floats(0.1, 10.0))
def test_ratio_roundtrip(r, T):
    g = grid_from_ratios(r, T)
    assert g.points[-1] == T
    np.testing.assert_allclose(ratios_of(g), r, rtol=1e-12)


def test_random_grid_bounds_and_determinism():
    g1 = random_ratio_grid(100, 1.0, 0.5, 1.9398, 42)
    g2 = random_ratio_grid(100, 1.0, 0.5, 1.9398, 42)
    r = ratios_of(g1)
    assert r.min() >= 0.5 and r.max() <= 1.9398
    assert np.array_equal(g1.points, g2.points)
    assert not np.array_equal(g1.points, random_ratio_grid(100, 1.0, 0.5, 1.9398, 43).points)
    np.testing.assert_allclose(random_ratio_grid(50, 1.0, 1, 1, 7).points, uniform_grid(50).points, atol=1e-15)


def test_random_grid_roundtrip():
    g = random_ratio_grid(64, 2.0, 0.5, 1.9398, 3)
    back = grid_from_ratios(ratios_of(g), 2.0)
    np.testing.assert_allclose(back.points, g.points, rtol=1e-12, atol=1e-15)


def test_splitmix64_reference_stream():
    # first outputs of splitmix64 seeded with 0, from the published reference implementation
    s = SplitMix64(0)
    assert [s.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_affine_quadratic_ratios_approach_one():
    gm = GridMap.affine_quadratic()
    prev = None
    for n in (8, 32, 128, 512, 2048):
        dev = np.abs(ratios_of(mapped_grid(gm, n)) - 1).max()
        assert n * dev <= AFFINE_QUADRATIC_RATIO_CONSTANT
        if prev is not None:
            assert dev < prev
        prev = dev


def test_table_map_matches_closed_form_roughly():
    x = np.linspace(0, 1, 201)
    tab = GridMap.table(x, x**2)
    np.testing.assert_allclose(tab(np.array([0.3, 0.77])), [0.09, 0.5929], atol=1e-4)
    assert not tab.has_closed_form_derivatives
    np.testing.assert_allclose(tab.derivative(np.array([0.5]), 1), [1.0], atol=1e-3)


def test_gridmap_from_name():
    assert GridMap.from_name("power3").p == 3
    assert GridMap.from_name("affine-quadratic").kind == "affine_quadratic"
    with pytest.raises(ValueError):
        GridMap.from_name("spiral")


def test_gridspec_config_roundtrip():
    spec = GridSpec(kind="random", n=30, T=2.0, lo=0.5, hi=1.5, seed=9)
    again = GridSpec.from_config({k: str(v) for k, v in spec.to_config().items()})
    assert np.array_equal(spec.build().points, again.build().points)
    with pytest.raises(ValueError):
        GridSpec.from_config({"kind": "uniform", "colour": "red"})
    with pytest.raises(ValueError):
        GridSpec(kind="power").build()
