"""Regular simplex class coding and nearest-vertex assignment.

With k classes, class j is represented by vertex v_j of a regular simplex
inscribed in the unit ball of R^(k-1).  The vertices are

    v_1 = (k-1)^(-1/2) * 1,
    v_j = c * 1 + d * e_{j-1},   2 <= j <= k,

with c = -(1 + sqrt(k)) / (k-1)^(3/2) and d = sqrt(k / (k-1)).  All vertices
have unit norm, pairwise distance sqrt(2k/(k-1)), and pairwise inner product
-1/(k-1).
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SimplexCode:
    """Vertex coding of k classes in R^(k-1).

    vertices has shape (k, k-1); row j-1 is the vertex of class j.
    """

    k: int
    vertices: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.k - 1


def build_simplex(k: int) -> SimplexCode:
    """Construct the regular simplex code for k >= 2 classes."""
    if k < 2:
        raise ValueError(f"need at least 2 classes, got k={k}")
    km1 = k - 1
    c = -(1.0 + np.sqrt(k)) / km1 ** 1.5
    d = np.sqrt(k / km1)
    vertices = np.full((k, km1), c)
    vertices[0, :] = 1.0 / np.sqrt(km1)
    for j in range(1, k):
        vertices[j, j - 1] += d
    vertices.setflags(write=False)
    return SimplexCode(k=k, vertices=vertices)


def default_epsilon(k: int) -> float:
    """Largest insensitivity radius with nonoverlapping balls: half the
    pairwise vertex distance, (1/2) * sqrt(2k/(k-1))."""
    if k < 2:
        raise ValueError(f"need at least 2 classes, got k={k}")
    return 0.5 * np.sqrt(2.0 * k / (k - 1))


def classify(code: SimplexCode, point: np.ndarray) -> int:
    """Assign a point in R^(k-1) to the class of the nearest vertex.

    Returns a 1-based class index; ties go to the lowest index.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (code.dim,):
        raise ValueError(
            f"point has shape {point.shape}, expected ({code.dim},)")
    dists = np.linalg.norm(code.vertices - point, axis=1)
    return int(np.argmin(dists)) + 1


def classify_batch(code: SimplexCode, points: np.ndarray) -> np.ndarray:
    """Vectorized nearest-vertex assignment; points has shape (m, k-1).

    Returns 1-based class indices, lowest index on ties.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != code.dim:
        raise ValueError(
            f"points have shape {points.shape}, expected (m, {code.dim})")
    d2 = ((points[:, None, :] - code.vertices[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1) + 1
