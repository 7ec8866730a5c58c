"""Penalty tuning: stratified cross-validation and stability selection.

Stability selection refits the model on random half-samples across a grid of
penalty values and tallies, per predictor, how often its column is selected.
A predictor is stable when its maximal selection frequency over the grid
reaches the threshold pi; the expected number of false positives in the
stable set is bounded by q^2 / [(2 pi - 1) p], with q the average size of the
union of per-subsample selected sets.
"""

import os
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from vda.loss import SmoothingConfig, scalar_smooth_d1
from vda.model import active_predictors, predict, train
from vda.simplex import build_simplex


def worker_count() -> int:
    """Worker cap from VDA_THREADS, defaulting to machine parallelism."""
    env = os.environ.get("VDA_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class Grid:
    """Sorted nonnegative penalty values; cells are the cartesian product."""

    lambda_l: tuple
    lambda_e: tuple

    def __post_init__(self):
        for name, vals in (("lambda_l", self.lambda_l),
                           ("lambda_e", self.lambda_e)):
            vals = tuple(vals)
            object.__setattr__(self, name, vals)
            if len(vals) == 0:
                raise ValueError(f"{name} grid is empty")
            if any(v < 0 for v in vals):
                raise ValueError(f"{name} grid has negative values")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} grid must be strictly increasing")

    @property
    def cells(self):
        return [(ll, le) for ll in self.lambda_l for le in self.lambda_e]


@dataclass
class CvResult:
    best_lambda_l: float
    best_lambda_e: float
    mean_error: np.ndarray = field(repr=False)  # (len(grid_l), len(grid_e))
    se: np.ndarray = field(repr=False)
    grid: Grid = None

    def rows(self):
        """(lambda_l, lambda_e, mean_error, se) rows for CSV export."""
        out = []
        for i, ll in enumerate(self.grid.lambda_l):
            for j, le in enumerate(self.grid.lambda_e):
                out.append((ll, le, self.mean_error[i, j], self.se[i, j]))
        return out


@dataclass
class StabilityReport:
    grid: Grid
    pi: float
    # selection frequency of each predictor at each grid cell, (n_cells, p)
    probabilities: np.ndarray = field(repr=False)
    stable_set: list = None
    q: float = 0.0
    fp_bound: float = 0.0
    n_subsamples: int = 0

    def max_probability(self) -> np.ndarray:
        return self.probabilities.max(axis=0)

    def rows(self):
        """(predictor, lambda_l, lambda_e, pi_hat) long-format rows."""
        out = []
        for c, (ll, le) in enumerate(self.grid.cells):
            for pred in range(self.probabilities.shape[1]):
                out.append((pred + 1, ll, le, self.probabilities[c, pred]))
        return out


def lambda_max(X, labels, delta: float | None = None,
               polynomial: str = "quartic"):
    """Smallest penalty weights that keep every slope at the origin.

    Computed from the loss gradient at theta = 0 on standardized predictors:
    the lasso bound is the largest |gradient| entry, the Euclidean bound the
    largest column norm of the gradient matrix.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    uniq = sorted(set(labels.tolist()))
    k = len(uniq)
    index = {lab: i for i, lab in enumerate(uniq)}
    code = build_simplex(k)
    Y = code.vertices[[index[lab] for lab in labels.tolist()]]
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd > 1e-12, sd, 1.0)
    Z = (X - mu) / sd
    cfg = SmoothingConfig.for_classes(k, delta=delta, polynomial=polynomial)
    norms = np.linalg.norm(Y, axis=1)  # all 1 for simplex targets
    safe = np.where(norms > 0, norms, 1.0)
    w1 = scalar_smooth_d1(norms, cfg) / safe
    G = -(w1[:, None] * Y).T @ Z / len(labels)  # (k-1, p) gradient at origin
    return float(np.abs(G).max()), float(np.linalg.norm(G, axis=0).max())


def default_grid(X, labels, n_points: int = 10, ratio: float = 0.01,
                 **smooth_opts) -> Grid:
    """Log-spaced grids from lambda_max * ratio up to lambda_max."""
    lmax_l, lmax_e = lambda_max(X, labels, **smooth_opts)
    gl = np.geomspace(max(lmax_l, 1e-8) * ratio, max(lmax_l, 1e-8), n_points)
    ge = np.geomspace(max(lmax_e, 1e-8) * ratio, max(lmax_e, 1e-8), n_points)
    return Grid(lambda_l=tuple(gl), lambda_e=tuple(ge))


def _stratified_folds(labels, folds: int, rng: np.random.Generator):
    """Per-class round-robin assignment into folds after a shuffle."""
    labels = np.asarray(labels)
    assignment = np.empty(len(labels), dtype=int)
    for lab in sorted(set(labels.tolist())):
        idx = np.flatnonzero(labels == lab)
        idx = rng.permutation(idx)
        assignment[idx] = np.arange(len(idx)) % folds
    return assignment


def _training_has_all_classes(labels, assignment, folds):
    classes = set(np.asarray(labels).tolist())
    for f in range(folds):
        if set(np.asarray(labels)[assignment != f].tolist()) != classes:
            return False
    return True


def cross_validate(X, labels, grid: Grid, folds: int = 10, seed: int = 0,
                   **train_opts) -> CvResult:
    """Stratified k-fold CV over the penalty grid.

    Returns the cell minimizing mean held-out misclassification; ties break
    toward the larger lambda_l + lambda_e (more parsimonious fit).
    """
    if folds < 2:
        raise ValueError("folds must be >= 2")
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    rng = np.random.Generator(np.random.PCG64(seed))
    assignment = _stratified_folds(labels, folds, rng)
    if not _training_has_all_classes(labels, assignment, folds):
        assignment = _stratified_folds(labels, folds, rng)  # repartition once
        if not _training_has_all_classes(labels, assignment, folds):
            raise ValueError("a training fold is missing a class; too few "
                             "observations in some class for this fold count")

    nl, ne = len(grid.lambda_l), len(grid.lambda_e)

    def _one_fold(f):
        tr = assignment != f
        te = ~tr
        err = np.zeros((nl, ne))
        for i, ll in enumerate(grid.lambda_l):
            for j, le in enumerate(grid.lambda_e):
                m = train(X[tr], labels[tr], lambda_l=ll, lambda_e=le,
                          **train_opts)
                err[i, j] = np.mean(predict(m, X[te]) != labels[te])
        return err

    per_fold = Parallel(n_jobs=min(worker_count(), folds))(
        delayed(_one_fold)(f) for f in range(folds))
    per_fold = np.stack(per_fold)
    mean = per_fold.mean(axis=0)
    se = per_fold.std(axis=0, ddof=1) / np.sqrt(folds)

    best = None
    for i, ll in enumerate(grid.lambda_l):
        for j, le in enumerate(grid.lambda_e):
            key = (mean[i, j], -(ll + le))
            if best is None or key < best[0]:
                best = (key, ll, le)
    return CvResult(best_lambda_l=best[1], best_lambda_e=best[2],
                    mean_error=mean, se=se, grid=grid)


def _stratified_half(labels, rng: np.random.Generator,
                     max_retries: int = 20) -> np.ndarray:
    """Indices of a stratified half-sample with every class represented."""
    labels = np.asarray(labels)
    classes = sorted(set(labels.tolist()))
    for _ in range(max_retries):
        picked = []
        for lab in classes:
            idx = np.flatnonzero(labels == lab)
            take = max(1, len(idx) // 2)
            picked.append(rng.choice(idx, size=take, replace=False))
        sel = np.sort(np.concatenate(picked))
        if set(labels[sel].tolist()) == set(classes):
            return sel
    raise ValueError("could not draw a half-sample containing every class")


def stability_select(X, labels, grid: Grid, n_subsamples: int = 100,
                     pi: float = 0.9, seed: int = 0,
                     **train_opts) -> StabilityReport:
    """Stability selection over random stratified half-samples.

    Per-subsample seeds are seed + subsample index, so results are
    reproducible and independent of scheduling.  q is the average over
    subsamples of the size of the union of selected sets across the grid.
    """
    if not 0.5 < pi <= 1.0:
        raise ValueError("pi must lie in (0.5, 1]")
    if n_subsamples < 2:
        raise ValueError("n_subsamples must be >= 2")
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    p = X.shape[1]
    cells = grid.cells

    def _one_subsample(i):
        rng = np.random.Generator(np.random.PCG64(seed + i))
        sel_idx = _stratified_half(labels, rng)
        Xs, ys = X[sel_idx], labels[sel_idx]
        hit = np.zeros((len(cells), p), dtype=bool)
        for c, (ll, le) in enumerate(cells):
            m = train(Xs, ys, lambda_l=ll, lambda_e=le, **train_opts)
            hit[c, active_predictors(m)] = True
        return hit

    hits = Parallel(n_jobs=min(worker_count(), n_subsamples))(
        delayed(_one_subsample)(i) for i in range(n_subsamples))
    hits = np.stack(hits)  # (n_subsamples, n_cells, p)
    probabilities = hits.mean(axis=0)
    union_sizes = hits.any(axis=1).sum(axis=1)
    q = float(union_sizes.mean())
    stable = [int(j) for j in np.flatnonzero(probabilities.max(axis=0) >= pi)]
    return StabilityReport(grid=grid, pi=pi, probabilities=probabilities,
                           stable_set=stable, q=q,
                           fp_bound=false_positive_bound(q, pi, p),
                           n_subsamples=n_subsamples)


def false_positive_bound(q: float, pi: float, p: int) -> float:
    """Expected false positives in the stable set: q^2 / [(2 pi - 1) p]."""
    if not 0.5 < pi <= 1.0:
        raise ValueError("pi must lie in (0.5, 1]")
    return q * q / ((2 * pi - 1) * p)
