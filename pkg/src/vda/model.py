"""User-facing classifier API: training, prediction, persistence.

A trained model stores the simplex code, fitted coefficients on the
standardized predictor scale, the label map, and the standardization
statistics frozen at training time.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from vda.descent import (CoefficientSet, DescentConfig, FitResult,
                         fit_targets, standardize_columns)
from vda.loss import SmoothingConfig
from vda.penalty import PenaltyConfig
from vda.simplex import SimplexCode, build_simplex, classify_batch

MODEL_FORMAT = "vda-model/1"


@dataclass
class VdaModel:
    code: SimplexCode
    coefficients: CoefficientSet
    labels: list  # sorted original labels; position i-1 <-> class index i
    means: np.ndarray = field(repr=False)
    scales: np.ndarray = field(repr=False)
    smoothing: SmoothingConfig = None
    penalties: PenaltyConfig = None
    fit_result: FitResult = field(default=None, repr=False)

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def p(self) -> int:
        return self.coefficients.A.shape[1]


def train(X, labels, lambda_l: float = 0.0, lambda_e: float = 0.0,
          epsilon: float | None = None, delta: float | None = None,
          polynomial: str = "quartic", tol: float = 1e-6,
          max_sweeps: int = 1000, standardize: bool = True) -> VdaModel:
    """Train a penalized VDA classifier.

    k is inferred from the distinct labels (sorted order defines the class
    indices).  Predictors are standardized internally by default; the
    statistics are frozen into the model and reapplied at prediction time.
    Disable standardization when penalty weights are calibrated to the raw
    predictor scale.  epsilon defaults to half the simplex vertex spacing,
    delta to epsilon/4.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    if X.ndim != 2 or X.shape[0] != len(labels):
        raise ValueError("X must be 2-D with one row per label")
    if not np.all(np.isfinite(X)):
        raise ValueError("predictor matrix contains NaN or Inf")
    uniq = sorted(set(labels.tolist()))
    if len(uniq) < 2:
        raise ValueError("need at least 2 distinct labels")
    k = len(uniq)
    index = {lab: i for i, lab in enumerate(uniq)}
    code = build_simplex(k)
    Y = code.vertices[[index[lab] for lab in labels.tolist()]]

    if epsilon is None:
        smoothing = SmoothingConfig.for_classes(k, delta=delta,
                                                polynomial=polynomial)
    else:
        smoothing = SmoothingConfig(
            epsilon=epsilon,
            delta=epsilon / 4 if delta is None else delta,
            polynomial=polynomial)
    cfg = DescentConfig(smoothing=smoothing,
                        penalties=PenaltyConfig(lambda_l, lambda_e),
                        tol=tol, max_sweeps=max_sweeps, standardize=False)
    if standardize:
        means, scales = standardize_columns(X)
    else:
        means = np.zeros(X.shape[1])
        scales = np.ones(X.shape[1])
    result = fit_targets((X - means) / scales, Y, cfg)
    return VdaModel(code=code, coefficients=result.coefficients,
                    labels=uniq, means=means, scales=scales,
                    smoothing=smoothing, penalties=cfg.penalties,
                    fit_result=result)


def decision_values(model: VdaModel, X_new) -> np.ndarray:
    """Linear predictions A z + b in R^(k-1) on the standardized scale."""
    X_new = np.asarray(X_new, dtype=float)
    if X_new.ndim == 1:
        X_new = X_new[None, :]
    if X_new.shape[1] != model.p:
        raise ValueError(
            f"expected {model.p} predictor columns, got {X_new.shape[1]}")
    Z = (X_new - model.means) / model.scales
    return Z @ model.coefficients.A.T + model.coefficients.b


def predict(model: VdaModel, X_new) -> np.ndarray:
    """Predict original labels by nearest-vertex assignment."""
    preds = decision_values(model, X_new)
    idx = classify_batch(model.code, preds)
    return np.array([model.labels[i - 1] for i in idx])


def active_predictors(model: VdaModel) -> list:
    """Sorted indices (0-based) of predictors with a nonzero slope column."""
    A = model.coefficients.A
    return [l for l in range(A.shape[1]) if np.linalg.norm(A[:, l]) > 0.0]


def to_json(model: VdaModel) -> str:
    """Serialize to the vda-model/1 JSON document with round-trip floats."""
    doc = {
        "format": MODEL_FORMAT,
        "k": model.k,
        "labels": [_plain(lab) for lab in model.labels],
        "epsilon": model.smoothing.epsilon,
        "delta": model.smoothing.delta,
        "polynomial": model.smoothing.polynomial,
        "lambda_L": model.penalties.lambda_l,
        "lambda_E": model.penalties.lambda_e,
        "means": model.means.tolist(),
        "scales": model.scales.tolist(),
        "A": model.coefficients.A.flatten().tolist(),  # row-major
        "b": model.coefficients.b.tolist(),
    }
    return json.dumps(doc, indent=2)


def from_json(text: str) -> VdaModel:
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"unsupported model format {doc.get('format')!r}")
    k = int(doc["k"])
    means = np.asarray(doc["means"], dtype=float)
    p = len(means)
    A = np.asarray(doc["A"], dtype=float).reshape(k - 1, p)
    smoothing = SmoothingConfig(epsilon=doc["epsilon"], delta=doc["delta"],
                                polynomial=doc["polynomial"])
    return VdaModel(
        code=build_simplex(k),
        coefficients=CoefficientSet(A=A, b=np.asarray(doc["b"], dtype=float)),
        labels=doc["labels"],
        means=means,
        scales=np.asarray(doc["scales"], dtype=float),
        smoothing=smoothing,
        penalties=PenaltyConfig(doc["lambda_L"], doc["lambda_E"]))


def save(model: VdaModel, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(model))


def load(path) -> VdaModel:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def _plain(value):
    """Coerce numpy scalars to builtin types for JSON."""
    if isinstance(value, np.generic):
        return value.item()
    return value
