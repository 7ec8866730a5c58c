import numpy as np
import pytest

from vda.penalty import (PenaltyConfig, directional_derivatives,
                         group_partials, penalty_value)


def random_orthogonal(dim, rng):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q * np.sign(np.diag(r))


def test_config_validation():
    with pytest.raises(ValueError):
        PenaltyConfig(-0.1, 0.0)
    with pytest.raises(ValueError):
        PenaltyConfig(0.0, -1.0)


def test_penalty_value_basics():
    cfg = PenaltyConfig(1.0, 1.0)
    assert penalty_value(np.zeros((2, 5)), cfg) == 0.0
    A = np.zeros((2, 3))
    A[1, 2] = -1.7
    assert abs(penalty_value(A, cfg) - 2 * 1.7) < 1e-14
    A = np.zeros((2, 3))
    A[:, 1] = [3.0, 4.0]
    assert abs(penalty_value(A, PenaltyConfig(0.0, 1.0)) - 5.0) < 1e-14


def test_penalty_is_a_norm():
    rng = np.random.default_rng(0)
    cfg = PenaltyConfig(0.7, 1.3)
    for _ in range(50):
        A = rng.normal(size=(3, 6))
        B = rng.normal(size=(3, 6))
        t = float(rng.uniform(-3, 3))
        assert abs(penalty_value(t * A, cfg)
                   - abs(t) * penalty_value(A, cfg)) < 1e-10
        assert penalty_value(A + B, cfg) <= \
            penalty_value(A, cfg) + penalty_value(B, cfg) + 1e-12


def test_euclidean_penalty_orthogonal_invariance():
    rng = np.random.default_rng(1)
    cfg = PenaltyConfig(0.0, 1.0)
    for _ in range(20):
        A = rng.normal(size=(4, 7))
        O = random_orthogonal(4, rng)
        assert abs(penalty_value(O @ A, cfg) - penalty_value(A, cfg)) < 1e-10


def test_group_partials_axis_aligned():
    d1, d2 = group_partials(np.array([2.5, 0.0]), 0, 1.0)
    assert abs(d1 - 1.0) < 1e-14
    assert abs(d2) < 1e-14
    d1, d2 = group_partials(np.array([-2.5, 0.0]), 0, 1.0)
    assert abs(d1 + 1.0) < 1e-14


def test_group_partials_example():
    d1, d2 = group_partials(np.array([3.0, 4.0]), 0, 1.0)
    assert abs(d1 - 0.6) < 1e-14
    assert abs(d2 - (1 / 5) * (1 - 9 / 25)) < 1e-14


def test_group_partials_zero_group_rejected():
    with pytest.raises(ValueError):
        group_partials(np.zeros(3), 0, 1.0)


def test_group_partials_match_finite_differences():
    rng = np.random.default_rng(2)
    h = 1e-7
    for _ in range(1000):
        m = int(rng.integers(2, 5))
        a = rng.normal(size=m)
        if np.linalg.norm(a) < 0.1:
            continue
        j = int(rng.integers(0, m))
        lam = float(rng.uniform(0.1, 2.0))
        d1, d2 = group_partials(a, j, lam)

        def pen(t):
            b = a.copy()
            b[j] += t
            return lam * np.linalg.norm(b)

        fd1 = (pen(h) - pen(-h)) / (2 * h)
        h2 = 1e-4  # wider stencil: second differences cancel badly
        fd2 = (pen(h2) - 2 * pen(0) + pen(-h2)) / h2 ** 2
        assert abs(d1 - fd1) < 1e-6
        assert abs(d2 - fd2) < 1e-3 * max(1.0, abs(fd2))


def test_directional_derivatives_origin_cases():
    cfg = PenaltyConfig(1.0, 0.0)
    fwd, bwd = directional_derivatives(0.5, 0.0, np.zeros(2), cfg)
    assert abs(fwd - 1.5) < 1e-14 and abs(bwd - 0.5) < 1e-14
    assert fwd >= 0 and bwd >= 0  # origin optimal

    cfg = PenaltyConfig(1.0, 0.5)
    fwd, bwd = directional_derivatives(-2.0, 0.0, np.zeros(2), cfg)
    assert abs(fwd - (-0.5)) < 1e-14  # move right
    assert fwd < 0


def test_directional_derivatives_smooth_case():
    cfg = PenaltyConfig(0.0, 0.0)
    for g in (-1.3, 0.0, 2.4):
        fwd, bwd = directional_derivatives(g, 0.7, np.array([0.7, 0.0]), cfg)
        assert abs(fwd - g) < 1e-14
        assert abs(bwd + g) < 1e-14


def test_forward_plus_backward_nonnegative_for_convex_data():
    # derivatives of a genuinely convex objective along a coordinate:
    # slope-gradient drawn as the true derivative of a smooth convex piece
    rng = np.random.default_rng(3)
    for _ in range(200):
        a = rng.normal(size=3) * (rng.random() > 0.3)
        j = int(rng.integers(0, 3))
        cfg = PenaltyConfig(float(rng.uniform(0, 2)),
                            float(rng.uniform(0, 2)))
        # any smooth_d1 value is admissible; convexity shows in fwd+bwd
        g = float(rng.normal())
        fwd, bwd = directional_derivatives(g, float(a[j]), a, cfg)
        assert fwd + bwd >= -1e-12
