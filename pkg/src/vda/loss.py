"""Epsilon-insensitive loss, its smoothed replacement, and partial derivatives.

The exact loss of a residual v is max{||v|| - eps, 0}, flat inside the "dead
zone" ball of radius eps.  For Newton-based coordinate descent the corner at
||v|| = eps is replaced on [eps-delta, eps+delta] by a polynomial:

    quadratic: p2(s) = (s - eps + delta)^2 / (4 delta)
    quartic:   p4(s) = (s - eps + delta)^3 (3 delta - s + eps) / (16 delta^3)

The quartic matches value, slope, and curvature of both linear pieces at the
join points; the quadratic leaves curvature jumps of 1/(2 delta).
"""

from dataclasses import dataclass, field

import numpy as np

from vda.simplex import default_epsilon

QUADRATIC = "quadratic"
QUARTIC = "quartic"


@dataclass(frozen=True)
class SmoothingConfig:
    """Dead-zone radius eps, smoothing half-width delta, polynomial choice."""

    epsilon: float
    delta: float
    polynomial: str = QUARTIC

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.delta < self.epsilon:
            raise ValueError(
                f"delta must lie in (0, epsilon), got delta={self.delta}, "
                f"epsilon={self.epsilon}")
        if self.polynomial not in (QUADRATIC, QUARTIC):
            raise ValueError(f"unknown polynomial {self.polynomial!r}")

    @classmethod
    def for_classes(cls, k: int, delta: float | None = None,
                    polynomial: str = QUARTIC) -> "SmoothingConfig":
        """Default config for k classes: eps = half the vertex spacing,
        delta = eps/4 unless overridden."""
        eps = default_epsilon(k)
        return cls(epsilon=eps, delta=eps / 4 if delta is None else delta,
                   polynomial=polynomial)


def exact_loss(v: np.ndarray, epsilon: float) -> float:
    """Unsmoothed epsilon-insensitive Euclidean loss max{||v|| - eps, 0}."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return max(float(np.linalg.norm(v)) - epsilon, 0.0)


def scalar_smooth(s, cfg: SmoothingConfig):
    """Smoothed loss as a function of the residual norm s >= 0.

    Accepts scalars or arrays; 0 below eps-delta, polynomial on the join
    interval, s - eps above eps+delta.
    """
    s = np.asarray(s, dtype=float)
    eps, dlt = cfg.epsilon, cfg.delta
    t = s - eps + dlt
    if cfg.polynomial == QUARTIC:
        mid = t ** 3 * (3 * dlt - s + eps) / (16 * dlt ** 3)
    else:
        mid = t ** 2 / (4 * dlt)
    out = np.where(s < eps - dlt, 0.0,
                   np.where(s > eps + dlt, s - eps, mid))
    return out if out.ndim else float(out)


def scalar_smooth_d1(s, cfg: SmoothingConfig):
    """First derivative of scalar_smooth in s."""
    s = np.asarray(s, dtype=float)
    eps, dlt = cfg.epsilon, cfg.delta
    t = s - eps + dlt
    if cfg.polynomial == QUARTIC:
        mid = t ** 2 * (2 * dlt - s + eps) / (4 * dlt ** 3)
    else:
        mid = t / (2 * dlt)
    out = np.where(s < eps - dlt, 0.0,
                   np.where(s > eps + dlt, 1.0, mid))
    return out if out.ndim else float(out)


def scalar_smooth_d2(s, cfg: SmoothingConfig):
    """Second derivative of scalar_smooth in s.

    With the quadratic the join interval (taken closed) carries the constant
    1/(2 delta), so the value at s = eps+delta is the one-sided limit from
    the left.
    """
    s = np.asarray(s, dtype=float)
    eps, dlt = cfg.epsilon, cfg.delta
    if cfg.polynomial == QUARTIC:
        mid = 3 * (s - eps + dlt) * (eps + dlt - s) / (4 * dlt ** 3)
    else:
        mid = np.full_like(s, 1.0 / (2 * dlt))
    out = np.where(s < eps - dlt, 0.0,
                   np.where(s > eps + dlt, 0.0, mid))
    return out if out.ndim else float(out)


def vector_loss(v: np.ndarray, cfg: SmoothingConfig) -> float:
    """Smoothed loss of a residual vector, scalar_smooth(||v||)."""
    return float(scalar_smooth(np.linalg.norm(v), cfg))


@dataclass
class Residual:
    """A residual vector r = y - Ax - b with its cached Euclidean norm."""

    r: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.norm = float(np.linalg.norm(self.r))


def partials_intercept(res: Residual, j: int, cfg: SmoothingConfig):
    """First and second partials of the smoothed loss in intercept b_j.

    d1 = -p'(||r||) r_j / ||r||
    d2 = p''(||r||) r_j^2/||r||^2 + p'(||r||)/||r|| (1 - r_j^2/||r||^2)

    Inside the dead zone (||r|| < eps - delta, which covers ||r|| = 0) both
    are 0 and no division is performed.
    """
    return partials_slope(res, j, 1.0, cfg)


def partials_slope(res: Residual, j: int, x_il: float, cfg: SmoothingConfig):
    """First and second partials of the smoothed loss in slope a_jl, for an
    observation with predictor value x_il.  Same formulas as the intercept
    scaled by x_il (first order) and via (r_j x_il) (second order)."""
    s = res.norm
    if s < cfg.epsilon - cfg.delta:
        return 0.0, 0.0
    p1 = float(scalar_smooth_d1(s, cfg))
    p2 = float(scalar_smooth_d2(s, cfg))
    u = res.r[j] * x_il
    d1 = -p1 * u / s
    d2 = p2 * u ** 2 / s ** 2 + p1 / s * (x_il ** 2 - u ** 2 / s ** 2)
    return d1, d2
