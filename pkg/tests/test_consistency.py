import numpy as np
import pytest

from vda.consistency import (BOUNDARY_TOL, check_fisher, contour_grid,
                             minimize_risk, risk)
from vda.simplex import build_simplex, default_epsilon


def test_risk_at_vertices():
    code = build_simplex(3)
    eps = default_epsilon(3)
    assert risk(code.vertices[0], [1.0, 0, 0], code, eps) == 0.0
    # from vertex 1 the other vertices sit at distance 2*eps
    val = risk(code.vertices[0], [0, 0.5, 0.5], code, eps)
    assert abs(val - eps) < 1e-12


def test_risk_at_origin_uniform():
    for k in (3, 4):
        code = build_simplex(k)
        eps = default_epsilon(k)
        val = risk(np.zeros(k - 1), np.ones(k) / k, code, eps)
        assert abs(val - (1.0 - eps)) < 1e-12  # all vertices at distance 1


def test_risk_batch_and_validation():
    code = build_simplex(3)
    pts = np.zeros((4, 2))
    vals = risk(pts, [0.2, 0.3, 0.5], code, 0.866)
    assert vals.shape == (4,)
    with pytest.raises(ValueError):
        risk(np.zeros(3), [0.2, 0.3, 0.5], code, 0.866)


def test_probs_validation():
    with pytest.raises(ValueError):
        minimize_risk([0.5, 0.5], 3)
    with pytest.raises(ValueError):
        minimize_risk([0.7, 0.4, -0.1], 3)
    with pytest.raises(ValueError):
        minimize_risk(np.ones(6) / 6, 6)  # k > 5 unsupported


def test_uniform_probs_minimized_at_center():
    land = minimize_risk([1 / 3, 1 / 3, 1 / 3], 3)
    assert np.linalg.norm(land.minimizer) < 1e-6
    assert abs(land.min_value - (1 - np.sqrt(3) / 2)) < 1e-9
    assert land.exterior
    assert check_fisher([1 / 3, 1 / 3, 1 / 3], 3) is None  # tie


def test_dominant_class_boundary_scenario():
    land = minimize_risk([0.6, 0.3, 0.1], 3)
    assert land.winner == 1
    assert land.on_boundary
    assert abs(land.min_value - 0.0561369284) < 1e-6


def test_small_tilt_exterior_scenario():
    t = 0.025
    land = minimize_risk([1 / 3 + t, 1 / 3, 1 / 3 - t], 3)
    assert land.winner == 1
    assert land.exterior and not land.on_boundary
    assert abs(land.min_value - 0.1320818041) < 1e-6


def test_degenerate_single_class():
    land = minimize_risk([1.0, 0.0, 0.0], 3)
    assert land.winner == 1
    assert np.linalg.norm(land.minimizer - build_simplex(3).vertices[0]) \
        < default_epsilon(3) + BOUNDARY_TOL
    assert land.min_value < 1e-9


def test_label_permutation_symmetry():
    base = np.array([0.55, 0.3, 0.15])
    land1 = minimize_risk(base, 3)
    land2 = minimize_risk(base[[1, 0, 2]], 3)
    assert land1.winner == 1 and land2.winner == 2
    assert abs(land1.min_value - land2.min_value) < 1e-9


def test_random_sweep_fisher_and_dichotomy():
    rng = np.random.default_rng(0)
    for k in (3, 4):
        for _ in range(10):
            probs = rng.dirichlet(np.ones(k))
            order = np.sort(probs)[::-1]
            if order[0] - order[1] < 0.02:
                continue
            assert check_fisher(probs, k) is True
            land = minimize_risk(probs, k)
            assert land.on_boundary or land.exterior


def test_contour_grid_shape_and_minimum():
    probs = [0.6, 0.3, 0.1]
    grid = contour_grid(probs, 3, radius=1.5, resolution=61)
    assert grid.shape == (61 * 61, 3)
    land = minimize_risk(probs, 3)
    best = grid[np.argmin(grid[:, 2])]
    assert np.linalg.norm(best[:2] - land.minimizer) < 0.1
    with pytest.raises(ValueError):
        contour_grid([0.25] * 4, 4)


def test_risk_is_convex_along_segments():
    rng = np.random.default_rng(1)
    code = build_simplex(4)
    eps = default_epsilon(4)
    probs = np.array([0.4, 0.3, 0.2, 0.1])
    for _ in range(50):
        a, b = rng.normal(size=(2, 3))
        t = rng.random()
        mid = t * a + (1 - t) * b
        assert risk(mid, probs, code, eps) <= \
            t * risk(a, probs, code, eps) \
            + (1 - t) * risk(b, probs, code, eps) + 1e-12
