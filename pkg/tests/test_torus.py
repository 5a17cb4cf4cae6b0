import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from tdent.torus import (MapParam, RegimeClass, cat_matrix, classify_regime, frac, lattice_map_U,
                         lattice_map_V, lattice_permutation, nearest_lattice, sawtooth_apply,
                         sawtooth_inverse, torus_distance)


@pytest.mark.parametrize("t,expected", [(1.25, 0.25), (-0.25, 0.75), (3.0, 0.0)])
def test_frac_examples(t, expected):
    assert frac(t) == pytest.approx(expected, abs=1e-15)


def test_torus_distance_examples():
    assert torus_distance((0, 0), (0, 0)) == 0.0
    assert torus_distance((0.9, 0.1), (0.1, 0.9)) == pytest.approx(math.sqrt(0.08), abs=1e-12)
    assert torus_distance((0, 0), (0.5, 0.5)) == pytest.approx(math.sqrt(0.5), abs=1e-15)


def _brute_distance(a, b):
    return min(math.hypot(a[0] - b[0] + i, a[1] - b[1] + j) for i in (-1, 0, 1) for j in (-1, 0, 1))


unit = st.floats(0, 1, exclude_max=True)


@given(unit, unit, unit, unit)
def test_torus_distance_matches_shift_window(a1, a2, b1, b2):
    d = torus_distance((a1, a2), (b1, b2))
    assert d == pytest.approx(_brute_distance((a1, a2), (b1, b2)), abs=1e-12)
    assert d <= math.sqrt(2) / 2 + 1e-12
    assert d == pytest.approx(torus_distance((b1, b2), (a1, a2)), abs=1e-15)


def test_sawtooth_examples():
    assert np.allclose(sawtooth_apply(MapParam(0.5, 2), (0.5, 0.25)), (0.0, 0.5))
    assert np.allclose(sawtooth_apply(MapParam(1, 2), (0.2, 0.3)), (0.7, 0.5))
    assert np.allclose(sawtooth_apply(MapParam(3.3, 2), (0, 0)), (0, 0))
    assert np.allclose(sawtooth_inverse(MapParam(1, 2), (0.7, 0.5)), (0.2, 0.3))
    assert np.allclose(sawtooth_inverse(MapParam(0.5, 2), (0.0, 0.5)), (0.5, 0.25))
    assert np.allclose(sawtooth_inverse(MapParam(-1.7, 2), (0, 0)), (0, 0))


def test_sawtooth_round_trip_random():
    rng = np.random.default_rng(11)
    x = rng.random((10**4, 2))
    for alpha in rng.uniform(-5, 5, 10):
        p = MapParam(alpha, 2)
        assert np.max(torus_distance(sawtooth_inverse(p, sawtooth_apply(p, x)), x)) <= 1e-12
        assert np.max(torus_distance(sawtooth_apply(p, sawtooth_inverse(p, x)), x)) <= 1e-12


@settings(max_examples=50)
@given(st.integers(-6, 6), unit, unit)
def test_integer_alpha_is_cat_map(alpha, x1, x2):
    got = sawtooth_apply(MapParam(alpha, 2), (x1, x2))
    want = frac(cat_matrix(alpha) @ np.array([x1, x2]))
    assert torus_distance(got, want) <= 1e-12


@pytest.mark.parametrize("alpha,expected", [(1, [[2, 1], [1, 1]]), (0, [[1, 1], [0, 1]]),
                                            (-2, [[-1, 1], [-2, 1]])])
def test_cat_matrix(alpha, expected):
    t = cat_matrix(alpha)
    assert t.tolist() == expected
    assert round(np.linalg.det(t)) == 1


def test_cat_matrix_rejects_fraction():
    with pytest.raises(ValueError):
        cat_matrix(0.5)


def test_lattice_maps_examples():
    assert np.allclose(lattice_map_U(MapParam(2, 5), (1, 1)), (4, 3))
    assert np.allclose(lattice_map_U(MapParam(0.5, 4), (2, 1)), (0, 2))
    assert np.allclose(lattice_map_U(MapParam(0.7, 9), (0, 0)), (0, 0))
    assert lattice_map_V(MapParam(2, 5), (1, 1)).tolist() == [4, 3]
    assert lattice_map_V(MapParam(1, 3), (1, 0)).tolist() == [2, 1]


def test_v_is_permutation_at_alpha_03_n7():
    perm = lattice_permutation(MapParam(0.3, 7))
    assert sorted(perm.tolist()) == list(range(49))


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.7, -2.5, 2.7, -0.4])
def test_v_bijective_up_to_64(alpha):
    for n in range(2, 65):
        perm = lattice_permutation(MapParam(alpha, n))
        assert len(np.unique(perm)) == n * n


def test_v_integer_alpha_matches_matrix_floor_path():
    # the float path floor(U(l)) must agree with exact integer matrix action
    for alpha in (-3, -1, 1, 2, 4):
        for n in (5, 16, 31):
            g = np.stack(np.meshgrid(np.arange(n), np.arange(n), indexing="ij"), -1).reshape(-1, 2)
            exact = lattice_map_V(MapParam(alpha, n), g)
            flt = np.mod(np.floor(lattice_map_U(MapParam(alpha, n), g) + 1e-9).astype(int), n)
            assert np.array_equal(exact, flt)
            assert np.array_equal(exact, np.mod(g @ cat_matrix(alpha).T, n))


def test_nearest_lattice_examples():
    assert nearest_lattice((0.5, 0.5), 4).tolist() == [2, 2]
    assert nearest_lattice((0.9, 0.1), 10).tolist() == [9, 1]
    assert nearest_lattice((0.96, 0.01), 10).tolist() == [0, 0]


@given(unit, unit, st.integers(2, 300))
def test_nearest_lattice_within_half_diagonal(x1, x2, n):
    lat = nearest_lattice((x1, x2), n)
    assert torus_distance((x1, x2), lat / n) <= 1 / (math.sqrt(2) * n) + 1e-12


def test_classify_regime():
    assert classify_regime(1) is RegimeClass.HYPERBOLIC
    assert classify_regime(-2) is RegimeClass.ELLIPTIC
    assert classify_regime(0) is RegimeClass.PARABOLIC
    assert classify_regime(-4) is RegimeClass.PARABOLIC
    assert classify_regime(-4.5) is RegimeClass.HYPERBOLIC


def test_mapparam_validation():
    with pytest.raises(ValueError):
        MapParam(1.0, 1)
    with pytest.raises(ValueError):
        MapParam(float("nan"), 4)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.7])
def test_measure_preservation_chi_square(alpha):
    rng = np.random.default_rng(5)
    y = sawtooth_apply(MapParam(alpha, 2), rng.random((10**6, 2)))
    counts, _, _ = np.histogram2d(y[:, 0], y[:, 1], bins=16, range=[[0, 1], [0, 1]])
    assert stats.chisquare(counts.ravel()).pvalue > 1e-3


def test_alpha_within_tolerance_of_integer_is_snapped():
    assert MapParam(-4.6e-13, 3).alpha == 0.0
    assert MapParam(2 + 1e-13, 5).is_integer
    assert not MapParam(2 + 1e-9, 5).is_integer
    perm = lattice_permutation(MapParam(-4.6e-13, 3))
    assert len(np.unique(perm)) == 9
