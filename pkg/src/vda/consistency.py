"""Numeric check of the Bayes-rule property of epsilon-insensitive loss.

For class probabilities p = (p_1..p_k) the population risk of predicting the
point z is sum_j p_j max{||v_j - z|| - eps, 0}.  A Fisher-consistent loss
puts the risk minimizer z* closest to the vertex of the most probable class;
with eps equal to half the vertex spacing, z* is either exterior to every
insensitivity ball or on the boundary of the winning ball, never strictly
inside one.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from vda.simplex import SimplexCode, build_simplex, default_epsilon

# classification tolerance for the boundary-or-exterior dichotomy;
# matches the accuracy of the grid + simplex refinement
BOUNDARY_TOL = 1e-4

# coarse search resolution per dimension of R^(k-1); finer grids are
# pointless beyond 2-D since the local refinement does the real work
_GRID_STEP = {1: 0.005, 2: 0.02, 3: 0.06, 4: 0.12}


@dataclass
class RiskLandscape:
    k: int
    probs: np.ndarray = field(repr=False)
    epsilon: float
    minimizer: np.ndarray
    min_value: float
    winner: int              # 1-based nearest vertex of the minimizer
    on_boundary: bool        # within BOUNDARY_TOL of the winner's ball
    exterior: bool           # outside (or on) every ball up to BOUNDARY_TOL


def risk(z, probs, code: SimplexCode, epsilon: float):
    """Population risk at z (a point, or an (m, k-1) batch of points)."""
    z = np.atleast_2d(np.asarray(z, dtype=float))
    if z.shape[1] != code.dim:
        raise ValueError(f"points of dimension {z.shape[1]}, expected {code.dim}")
    probs = np.asarray(probs, dtype=float)
    dists = np.sqrt(((z[:, None, :] - code.vertices[None]) ** 2).sum(axis=2))
    vals = np.maximum(dists - epsilon, 0.0) @ probs
    return float(vals[0]) if vals.shape == (1,) else vals


def _check_probs(probs, k):
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (k,) or np.any(probs < 0) or \
            abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError("probs must be a length-k probability vector")
    return probs


def minimize_risk(probs, k: int, epsilon: float | None = None) -> RiskLandscape:
    """Locate the risk minimizer by coarse grid search plus local refinement.

    The risk is convex in z, so the polished local minimum is global.
    Feasible for k <= 5.
    """
    if k > 5:
        raise ValueError("grid search supported for k <= 5 only")
    probs = _check_probs(probs, k)
    eps = default_epsilon(k) if epsilon is None else epsilon
    code = build_simplex(k)
    dim = k - 1

    step = _GRID_STEP[dim]
    axis = np.arange(-1.5, 1.5 + step / 2, step)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    grid = np.column_stack([m.ravel() for m in mesh])
    vals = risk(grid, probs, code, eps)
    start = grid[int(np.argmin(vals))]

    res = _scipy_minimize(
        lambda z: risk(z, probs, code, eps), start, method="Nelder-Mead",
        options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 20000,
                 "maxfev": 20000})
    zstar, fstar = res.x, float(res.fun)
    # second polish from vertex-aligned starts guards against a bad basin
    # of the first polish on flat plateaus
    for v in code.vertices:
        alt = _scipy_minimize(
            lambda z: risk(z, probs, code, eps), (1 - eps) * v,
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 20000,
                     "maxfev": 20000})
        if alt.fun < fstar - 1e-12:
            zstar, fstar = alt.x, float(alt.fun)

    dists = np.linalg.norm(code.vertices - zstar, axis=1)
    winner = int(np.argmin(dists)) + 1
    on_boundary = abs(dists[winner - 1] - eps) <= BOUNDARY_TOL
    exterior = bool(np.all(dists >= eps - BOUNDARY_TOL))
    return RiskLandscape(k=k, probs=probs, epsilon=eps, minimizer=zstar,
                         min_value=fstar, winner=winner,
                         on_boundary=on_boundary, exterior=exterior)


def check_fisher(probs, k: int):
    """True/False whether the risk minimizer points at the most probable
    class; None (indeterminate) when the maximal probability is tied."""
    probs = _check_probs(probs, k)
    order = np.sort(probs)[::-1]
    if order[0] - order[1] <= 1e-12:
        return None
    landscape = minimize_risk(probs, k)
    return landscape.winner == int(np.argmax(probs)) + 1


def contour_grid(probs, k: int, epsilon: float | None = None,
                 radius: float = 1.6, resolution: int = 161):
    """Tidy (z1, z2, risk) rows over a square grid; k=3 only (2-D plane)."""
    if k != 3:
        raise ValueError("contour grids are only defined for k=3")
    probs = _check_probs(probs, k)
    eps = default_epsilon(k) if epsilon is None else epsilon
    code = build_simplex(k)
    axis = np.linspace(-radius, radius, resolution)
    zz1, zz2 = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([zz1.ravel(), zz2.ravel()])
    vals = risk(pts, probs, code, eps)
    return np.column_stack([pts, vals])
