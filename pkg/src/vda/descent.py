"""Cyclic coordinate descent for the penalized vertex-discriminant objective.

Minimizes

    f(A, b) = (1/n) sum_i g(y_i - A x_i - b)
              + lambda_L sum_{j,l} |a_jl| + lambda_E sum_l ||a_l||

where g is the smoothed epsilon-insensitive loss and y_i is the simplex
vertex of class i.  All parameters start at the origin.  Each sweep updates
the intercepts b_1..b_{k-1}, then the slope columns in index order, with
one-dimensional Newton steps safeguarded by step halving.  At a_jl = 0 the
forward and backward directional derivatives decide whether the coordinate
moves at all; in sparse problems most slope updates are skipped.
"""

from dataclasses import dataclass, field

import numpy as np

from vda.loss import (SmoothingConfig, scalar_smooth, scalar_smooth_d1,
                      scalar_smooth_d2)
from vda.penalty import (PenaltyConfig, ZERO_GROUP_TOL,
                         directional_derivatives, penalty_value)
from vda.simplex import build_simplex

# Newton updates with curvature below this are skipped: the 1-D problem is
# locally flat (dead-zone plateau) and any move is wasted work.
CURVATURE_TOL = 1e-12


@dataclass
class CoefficientSet:
    """Slope matrix A of shape (k-1, p) and intercept vector b of length k-1."""

    A: np.ndarray
    b: np.ndarray

    def copy(self) -> "CoefficientSet":
        return CoefficientSet(A=self.A.copy(), b=self.b.copy())


@dataclass(frozen=True)
class DescentConfig:
    smoothing: SmoothingConfig
    penalties: PenaltyConfig = PenaltyConfig()
    max_sweeps: int = 1000
    tol: float = 1e-6
    max_halvings: int = 20
    standardize: bool = True

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_halvings < 1:
            raise ValueError("max_halvings must be >= 1")


@dataclass
class FitResult:
    coefficients: CoefficientSet
    active_set: list
    objective_trace: list
    sweeps_used: int
    converged: bool
    # standardization applied inside fit; identity when standardize=False
    means: np.ndarray = field(default=None, repr=False)
    scales: np.ndarray = field(default=None, repr=False)


def objective(theta: CoefficientSet, X: np.ndarray, Y: np.ndarray,
              cfg: DescentConfig) -> float:
    """Penalized objective at theta for predictors X (n x p) and vertex
    targets Y (n x (k-1)).  The loss carries the 1/n normalization; the
    penalty does not."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape[0] != Y.shape[0] or theta.A.shape != (Y.shape[1], X.shape[1]):
        raise ValueError(
            f"dimension mismatch: X {X.shape}, Y {Y.shape}, A {theta.A.shape}")
    R = Y - X @ theta.A.T - theta.b
    norms = np.linalg.norm(R, axis=1)
    loss = float(np.mean(scalar_smooth(norms, cfg.smoothing)))
    return loss + penalty_value(theta.A, cfg.penalties)


class DescentState:
    """Mutable solver state: coefficients, residual matrix, cached norms,
    and incrementally tracked objective."""

    def __init__(self, X: np.ndarray, Y: np.ndarray, cfg: DescentConfig):
        self.X = np.asarray(X, dtype=float)
        self.Y = np.asarray(Y, dtype=float)
        self.cfg = cfg
        n, p = self.X.shape
        km1 = self.Y.shape[1]
        self.n, self.p, self.km1 = n, p, km1
        self.A = np.zeros((km1, p))
        self.b = np.zeros(km1)
        self.refresh()

    def refresh(self):
        """Recompute residuals, norms, and objective pieces from scratch,
        clearing any float drift accumulated by incremental updates."""
        self.R = self.Y - self.X @ self.A.T - self.b
        self.norms2 = np.einsum("ij,ij->i", self.R, self.R)
        self.norms = np.sqrt(self.norms2)
        self.loss = self._mean_loss(self.norms)
        self.pen = penalty_value(self.A, self.cfg.penalties)

    def _mean_loss(self, norms):
        return float(np.mean(scalar_smooth(norms, self.cfg.smoothing)))

    @property
    def objective_value(self) -> float:
        return self.loss + self.pen

    def _weights(self):
        """Per-observation p'(||r||)/||r|| and p''(||r||); both vanish inside
        the dead zone, so the guarded division never matters there."""
        s = self.norms
        safe = np.where(s > 0, s, 1.0)
        w1 = scalar_smooth_d1(s, self.cfg.smoothing) / safe
        p2 = scalar_smooth_d2(s, self.cfg.smoothing)
        return w1, p2, safe

    def _loss_partials(self, j: int, xl=None):
        """Mean first/second loss partials in coordinate (b_j) or (a_jl)."""
        w1, p2, safe = self._weights()
        rj = self.R[:, j]
        if xl is None:
            u = rj
            x2 = 1.0
        else:
            u = rj * xl
            x2 = xl * xl
        d1 = -np.mean(w1 * u)
        t = u / safe
        d2 = np.mean(p2 * t * t + w1 * (x2 - t * t))
        return float(d1), float(d2)

    def update_intercept(self, j: int):
        """One Newton update of b_j with step halving; no-op when the
        curvature sum is degenerate (all residuals dead)."""
        d1, d2 = self._loss_partials(j)
        if d2 < CURVATURE_TOL:
            return
        step = -d1 / d2
        if step == 0.0:
            return
        # raising b_j by t lowers residual column j by t
        rj = self.R[:, j]
        base = self.norms2 - rj * rj
        obj = self.objective_value
        frac = 1.0
        for _ in range(self.cfg.max_halvings):
            new_rj = rj - frac * step
            ns2 = np.maximum(base + new_rj * new_rj, 0.0)
            new_norms = np.sqrt(ns2)
            new_loss = self._mean_loss(new_norms)
            if new_loss <= self.loss:
                self.b[j] += frac * step
                self.R[:, j] = new_rj
                self.norms2 = ns2
                self.norms = new_norms
                self.loss = new_loss
                return
            frac *= 0.5

    def update_slope(self, j: int, l: int):
        """One coordinate update of a_jl.

        At the origin the update is skipped when both directional derivatives
        are nonnegative.  Otherwise a Newton step with the penalty-adjusted
        gradient is taken, truncated at zero if it would cross the lasso
        kink, and step-halved until the objective does not increase.
        """
        pen = self.cfg.penalties
        a = self.A[j, l]
        col = self.A[:, l]
        colnorm = float(np.linalg.norm(col))
        d1, d2 = self._loss_partials(j, self.X[:, l])

        if a == 0.0:
            fwd, bwd = directional_derivatives(d1, 0.0, col, pen)
            if fwd >= 0.0 and bwd >= 0.0:
                return
            grad = fwd if fwd < 0.0 else -bwd
        else:
            grad = d1 + (pen.lambda_l if a > 0 else -pen.lambda_l)
            if pen.lambda_e > 0:
                grad += pen.lambda_e * a / colnorm
        if pen.lambda_e > 0 and colnorm > ZERO_GROUP_TOL:
            t = a / colnorm
            d2 += pen.lambda_e / colnorm * (1.0 - t * t)
        if d2 < CURVATURE_TOL:
            return
        new_a = a - grad / d2
        if a != 0.0 and new_a * a < 0.0:
            new_a = 0.0  # do not jump the nonsmooth origin in one move
        if new_a == a:
            return

        xl = self.X[:, l]
        rj = self.R[:, j]
        base = self.norms2 - rj * rj
        obj = self.objective_value
        lasso_others = np.abs(col).sum() - abs(a)
        group_others2 = colnorm * colnorm - a * a
        frac = 1.0
        for _ in range(self.cfg.max_halvings):
            cand = a + frac * (new_a - a)
            new_rj = rj - (cand - a) * xl
            ns2 = np.maximum(base + new_rj * new_rj, 0.0)
            new_norms = np.sqrt(ns2)
            new_loss = self._mean_loss(new_norms)
            new_pen = self.pen
            if pen.lambda_l > 0:
                new_pen += pen.lambda_l * (abs(cand) - abs(a))
            if pen.lambda_e > 0:
                new_colnorm = np.sqrt(max(group_others2 + cand * cand, 0.0))
                new_pen += pen.lambda_e * (new_colnorm - colnorm)
            if new_loss + new_pen <= obj:
                self.A[j, l] = cand
                self.R[:, j] = new_rj
                self.norms2 = ns2
                self.norms = new_norms
                self.loss = new_loss
                self.pen = new_pen
                return
            frac *= 0.5

    def _column_loss_partials(self, l: int):
        """Mean first/second loss partials in every a_jl of column l at once."""
        w1, p2, safe = self._weights()
        xl = self.X[:, l]
        wx = w1 * xl
        d1 = -(wx @ self.R) / self.n
        c = (p2 - w1) * (xl / safe) ** 2
        d2 = (c @ (self.R * self.R)) / self.n + np.mean(w1 * xl * xl)
        return d1, d2

    def _update_zero_column(self, l: int) -> bool:
        """Origin test and joint escape step for an all-zero column under a
        group penalty.

        Per-coordinate directional derivatives cannot detect that a zero
        column should move when every |gradient entry| is below lambda_E but
        the column gradient norm is not; the exact condition for the column
        to stay at zero is ||soft(g, lambda_L)|| <= lambda_E.  When violated,
        a Newton-sized step along the joint steepest descent direction moves
        the column off the origin; the regular coordinate updates then take
        over.  Returns True when the column provably stays at zero.
        """
        pen = self.cfg.penalties
        g, d2 = self._column_loss_partials(l)
        soft = np.sign(g) * np.maximum(np.abs(g) - pen.lambda_l, 0.0)
        nrm = float(np.linalg.norm(soft))
        if nrm <= pen.lambda_e:
            return True
        u = -soft / nrm
        curv = float(d2 @ (u * u))
        if curv < CURVATURE_TOL:
            return True
        t = (nrm - pen.lambda_e) / curv
        xl = self.X[:, l]
        obj = self.objective_value
        frac = 1.0
        for _ in range(self.cfg.max_halvings):
            step = frac * t
            new_R = self.R - (step * xl)[:, None] * u[None, :]
            ns2 = np.einsum("ij,ij->i", new_R, new_R)
            new_norms = np.sqrt(ns2)
            new_loss = self._mean_loss(new_norms)
            new_pen = (self.pen + pen.lambda_l * step * np.abs(u).sum()
                       + pen.lambda_e * step)
            if new_loss + new_pen <= obj:
                self.A[:, l] = step * u
                self.R = new_R
                self.norms2 = ns2
                self.norms = new_norms
                self.loss = new_loss
                self.pen = new_pen
                return False
            frac *= 0.5
        return True

    def sweep(self):
        """One full cycle: intercepts, then slope columns in index order."""
        for j in range(self.km1):
            self.update_intercept(j)
        for l in range(self.p):
            if self.cfg.penalties.lambda_e > 0 and \
                    not np.any(self.A[:, l]):
                if self._update_zero_column(l):
                    continue
            for j in range(self.km1):
                self.update_slope(j, l)

    def coefficients(self) -> CoefficientSet:
        return CoefficientSet(A=self.A.copy(), b=self.b.copy())


def standardize_columns(X: np.ndarray):
    """Column means and standard deviations; constant columns get scale 1."""
    means = X.mean(axis=0)
    scales = X.std(axis=0)
    scales = np.where(scales > 1e-12, scales, 1.0)
    return means, scales


def fit_targets(X: np.ndarray, Y: np.ndarray, cfg: DescentConfig) -> FitResult:
    """Coordinate descent from the origin for arbitrary vertex targets Y."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValueError("predictor matrix contains NaN or Inf")
    if X.shape[0] != Y.shape[0]:
        raise ValueError(
            f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    if cfg.standardize:
        means, scales = standardize_columns(X)
        Xw = (X - means) / scales
    else:
        means = np.zeros(X.shape[1])
        scales = np.ones(X.shape[1])
        Xw = X

    state = DescentState(Xw, Y, cfg)
    trace = [state.objective_value]
    converged = False
    sweeps = 0
    for sweeps in range(1, cfg.max_sweeps + 1):
        state.refresh()
        state.sweep()
        state.refresh()
        obj = state.objective_value
        trace.append(obj)
        prev = trace[-2]
        if abs(prev - obj) <= cfg.tol * max(1.0, abs(prev)):
            converged = True
            break
    coefs = state.coefficients()
    active = [l for l in range(state.p)
              if np.linalg.norm(coefs.A[:, l]) > 0.0]
    return FitResult(coefficients=coefs, active_set=active,
                     objective_trace=trace, sweeps_used=sweeps,
                     converged=converged, means=means, scales=scales)


def fit(X: np.ndarray, labels: np.ndarray, k: int,
        cfg: DescentConfig) -> FitResult:
    """Fit the penalized VDA model for integer labels in 1..k."""
    labels = np.asarray(labels)
    X = np.asarray(X, dtype=float)
    if X.shape[0] != len(labels):
        raise ValueError("X and labels disagree on sample count")
    if X.shape[0] < 1:
        raise ValueError("need at least one observation")
    present = set(int(c) for c in np.unique(labels))
    if not present <= set(range(1, k + 1)):
        raise ValueError(f"labels outside 1..{k}: {sorted(present)}")
    if len(present) < k:
        missing = sorted(set(range(1, k + 1)) - present)
        raise ValueError(f"classes with no observations: {missing}")
    code = build_simplex(k)
    Y = code.vertices[np.asarray(labels, dtype=int) - 1]
    return fit_targets(X, Y, cfg)
