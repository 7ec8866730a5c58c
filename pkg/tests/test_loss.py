import numpy as np
import pytest

from vda.loss import (QUADRATIC, QUARTIC, Residual, SmoothingConfig,
                      exact_loss, partials_intercept, partials_slope,
                      scalar_smooth, scalar_smooth_d1, scalar_smooth_d2,
                      vector_loss)

CFG_PAIRS = [(0.866, 0.2165), (1.0, 0.25), (0.5, 0.1), (2.0, 0.9)]


def configs(polynomial):
    return [SmoothingConfig(e, d, polynomial) for e, d in CFG_PAIRS]


def test_config_validation():
    with pytest.raises(ValueError):
        SmoothingConfig(epsilon=1.0, delta=0.0)
    with pytest.raises(ValueError):
        SmoothingConfig(epsilon=1.0, delta=1.0)
    with pytest.raises(ValueError):
        SmoothingConfig(epsilon=-1.0, delta=0.1)
    with pytest.raises(ValueError):
        SmoothingConfig(epsilon=1.0, delta=0.1, polynomial="cubic")


def test_for_classes_defaults():
    cfg = SmoothingConfig.for_classes(3)
    assert abs(cfg.epsilon - 0.8660254037844386) < 1e-12
    assert abs(cfg.delta - cfg.epsilon / 4) < 1e-12
    assert cfg.polynomial == QUARTIC


def test_exact_loss():
    assert exact_loss(np.array([0.5, 0.0]), 0.866) == 0.0
    assert abs(exact_loss(np.array([1.866, 0.0]), 0.866) - 1.0) < 1e-12
    v = np.array([1 / np.sqrt(2) - (-1 / np.sqrt(2)),
                  1 / np.sqrt(2) - (-1 / np.sqrt(2))])  # not used directly
    from vda.simplex import build_simplex
    V = build_simplex(3).vertices
    val = exact_loss(V[0] - V[1], 0.866)
    assert abs(val - (np.sqrt(3) - 0.866)) < 1e-12


@pytest.mark.parametrize("poly", [QUADRATIC, QUARTIC])
def test_smooth_join_values(poly):
    for cfg in configs(poly):
        e, d = cfg.epsilon, cfg.delta
        assert abs(scalar_smooth(e - d, cfg)) < 1e-14
        assert abs(scalar_smooth(e + d, cfg) - d) < 1e-14


def test_quartic_midpoint_and_derivative_joins():
    for cfg in configs(QUARTIC):
        e, d = cfg.epsilon, cfg.delta
        assert abs(scalar_smooth(e, cfg) - 3 * d / 16) < 1e-14
        assert abs(scalar_smooth_d1(e + d, cfg) - 1.0) < 1e-14
        assert abs(scalar_smooth_d2(e + d, cfg)) < 1e-14
        assert abs(scalar_smooth_d1(e - d, cfg)) < 1e-14
        assert abs(scalar_smooth_d2(e - d, cfg)) < 1e-14
        assert abs(scalar_smooth_d2(e, cfg) - 3 / (4 * d)) < 1e-12


def test_quadratic_curvature_jump():
    for cfg in configs(QUADRATIC):
        e, d = cfg.epsilon, cfg.delta
        # closed join interval: left-limit value at the upper join
        assert abs(scalar_smooth_d2(e + d, cfg) - 1 / (2 * d)) < 1e-14
        assert scalar_smooth_d2(e + d + 1e-12, cfg) == 0.0


@pytest.mark.parametrize("poly", [QUADRATIC, QUARTIC])
def test_continuity_at_joins(poly):
    h = 1e-9
    for cfg in configs(poly):
        for s0 in (cfg.epsilon - cfg.delta, cfg.epsilon + cfg.delta):
            lo = scalar_smooth(max(s0 - h, 0.0), cfg)
            hi = scalar_smooth(s0 + h, cfg)
            assert abs(hi - lo) < 1e-8
        if poly == QUARTIC:
            for s0 in (cfg.epsilon - cfg.delta, cfg.epsilon + cfg.delta):
                assert abs(scalar_smooth_d1(s0 + h, cfg)
                           - scalar_smooth_d1(s0 - h, cfg)) < 1e-6


@pytest.mark.parametrize("poly", [QUADRATIC, QUARTIC])
def test_bounding_and_monotone(poly):
    for cfg in configs(poly):
        s = np.linspace(0, cfg.epsilon + 5 * cfg.delta, 2001)
        smooth = scalar_smooth(s, cfg)
        exact = np.maximum(s - cfg.epsilon, 0.0)
        gap = smooth - exact
        assert np.all(gap >= -1e-14)
        assert np.all(gap <= cfg.delta + 1e-14)
        assert np.all(np.diff(smooth) >= -1e-14)


def test_quartic_convexity_on_grid():
    for cfg in configs(QUARTIC):
        s = np.linspace(0, cfg.epsilon + 5 * cfg.delta, 5001)
        assert np.all(scalar_smooth_d2(s, cfg) >= -1e-14)


def test_vector_loss_regions():
    cfg = SmoothingConfig(0.866, 0.2)
    assert vector_loss(np.array([0.1, 0.2]), cfg) == 0.0
    v = np.array([0.866 + 0.4, 0.0])
    assert abs(vector_loss(v, cfg) - 0.4) < 1e-14
    rng = np.random.default_rng(1)
    for _ in range(100):
        v = rng.normal(size=3)
        assert abs(vector_loss(v, cfg)
                   - scalar_smooth(np.linalg.norm(v), cfg)) < 1e-14


def test_partials_dead_zone():
    cfg = SmoothingConfig(0.866, 0.2)
    res = Residual(np.array([0.1, 0.1]))
    assert partials_intercept(res, 0, cfg) == (0.0, 0.0)
    assert partials_slope(res, 1, 2.5, cfg) == (0.0, 0.0)
    assert partials_intercept(Residual(np.zeros(2)), 0, cfg) == (0.0, 0.0)


def test_partials_linear_region():
    cfg = SmoothingConfig(0.866, 0.2)
    r = np.array([1.5, -0.7])
    res = Residual(r)
    s = res.norm
    assert s > cfg.epsilon + cfg.delta
    for j in range(2):
        d1, d2 = partials_intercept(res, j, cfg)
        assert abs(d1 - (-r[j] / s)) < 1e-14
        assert abs(d2 - (1 - r[j] ** 2 / s ** 2) / s) < 1e-14


def _total_loss_in_bj(r, j, t, cfg):
    shifted = r.copy()
    shifted[j] -= t  # raising b_j lowers residual component j
    return vector_loss(shifted, cfg)


def test_partials_match_finite_differences():
    rng = np.random.default_rng(42)
    h = 1e-6
    checked = 0
    for _ in range(1000):
        k = int(rng.integers(2, 5))
        poly = QUARTIC if rng.random() < 0.7 else QUADRATIC
        eps = float(rng.uniform(0.4, 1.5))
        cfg = SmoothingConfig(eps, float(rng.uniform(0.1, 0.9)) * eps, poly)
        r = rng.normal(scale=1.2, size=k - 1)
        res = Residual(r)
        j = int(rng.integers(0, k - 1))
        # skip draws straddling a join point where the fd stencil is invalid
        if min(abs(res.norm - (eps - cfg.delta)),
               abs(res.norm - (eps + cfg.delta))) < 1e-3:
            continue
        d1, _ = partials_intercept(res, j, cfg)
        fd = (_total_loss_in_bj(r, j, h, cfg)
              - _total_loss_in_bj(r, j, -h, cfg)) / (2 * h)
        assert abs(d1 - fd) <= 1e-5 * max(1.0, abs(fd))
        x_il = float(rng.normal(scale=1.5))
        d1s, _ = partials_slope(res, j, x_il, cfg)
        assert abs(d1s - d1 * x_il) < 1e-12
        checked += 1
    assert checked > 800


def test_second_partials_match_finite_differences():
    rng = np.random.default_rng(43)
    h = 1e-5
    for _ in range(300):
        cfg = SmoothingConfig(0.9, 0.3, QUARTIC)
        r = rng.normal(scale=1.0, size=3)
        res = Residual(r)
        if min(abs(res.norm - 0.6), abs(res.norm - 1.2)) < 2e-2:
            continue
        j = int(rng.integers(0, 3))
        _, d2 = partials_intercept(res, j, cfg)
        fd2 = (_total_loss_in_bj(r, j, h, cfg) - 2 * vector_loss(r, cfg)
               + _total_loss_in_bj(r, j, -h, cfg)) / h ** 2
        assert abs(d2 - fd2) <= 1e-4 * max(1.0, abs(fd2))
