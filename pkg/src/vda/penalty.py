"""Lasso and grouped Euclidean penalties on the slope matrix.

The mixed penalty is

    lambda_L * sum_{j,l} |a_jl|  +  lambda_E * sum_l ||a_l||_2,

where a_l is column l of the (k-1) x p slope matrix.  The lasso term zeroes
individual coefficients; the Euclidean term zeroes whole predictor columns
and is invariant under rotations of the simplex orientation.
"""

from dataclasses import dataclass

import numpy as np

# Columns with norm below this are treated as zero groups to avoid
# catastrophic cancellation in a_jl / ||a_l||.
ZERO_GROUP_TOL = 1e-10


@dataclass(frozen=True)
class PenaltyConfig:
    """Nonnegative weights for the lasso and Euclidean group penalties."""

    lambda_l: float = 0.0
    lambda_e: float = 0.0

    def __post_init__(self):
        if self.lambda_l < 0 or self.lambda_e < 0:
            raise ValueError(
                f"penalty weights must be nonnegative, got "
                f"({self.lambda_l}, {self.lambda_e})")


def penalty_value(A: np.ndarray, cfg: PenaltyConfig) -> float:
    """Mixed penalty value for a slope matrix A of shape (k-1, p)."""
    A = np.asarray(A, dtype=float)
    val = 0.0
    if cfg.lambda_l > 0:
        val += cfg.lambda_l * np.abs(A).sum()
    if cfg.lambda_e > 0:
        val += cfg.lambda_e * np.linalg.norm(A, axis=0).sum()
    return float(val)


def group_partials(a_l: np.ndarray, j: int, lambda_e: float):
    """First and second partials of lambda_E ||a_l|| in a_jl for a nonzero
    group.

    d1 = lambda_E a_jl / ||a_l||, d2 = lambda_E/||a_l|| (1 - a_jl^2/||a_l||^2).
    """
    a_l = np.asarray(a_l, dtype=float)
    norm = float(np.linalg.norm(a_l))
    if norm <= ZERO_GROUP_TOL:
        raise ValueError("group_partials requires a nonzero group; use the "
                         "directional form at the origin")
    t = a_l[j] / norm
    return lambda_e * t, lambda_e / norm * (1.0 - t * t)


def directional_derivatives(smooth_d1: float, a_jl: float, a_l: np.ndarray,
                            cfg: PenaltyConfig):
    """Forward and backward directional derivatives of the full objective
    along coordinate a_jl.

    smooth_d1 is the loss-only partial (1/n) sum_i d g / d a_jl.  The lasso
    contributes +/- lambda_L depending on the sign of a_jl; a zero Euclidean
    group contributes +lambda_E in both directions, a nonzero group its
    smooth derivative.  Convexity guarantees forward + backward >= 0.
    """
    a_l = np.asarray(a_l, dtype=float)
    norm = float(np.linalg.norm(a_l))
    lasso_fwd = -cfg.lambda_l if a_jl < 0 else cfg.lambda_l
    lasso_bwd = -cfg.lambda_l if a_jl > 0 else cfg.lambda_l
    if norm <= ZERO_GROUP_TOL:
        e_fwd = e_bwd = cfg.lambda_e
    else:
        e_fwd = cfg.lambda_e * a_jl / norm
        e_bwd = -e_fwd
    forward = smooth_d1 + lasso_fwd + e_fwd
    backward = -smooth_d1 + lasso_bwd + e_bwd
    return forward, backward
