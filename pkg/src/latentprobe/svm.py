"""Soft-margin SVM for gating generated samples as Good or Bad.

The trainer minimizes the primal objective

    0.5 * ||w||^2 + C * sum_i max(0, 1 - y_i * (w . x_i + b))

by deterministic full-batch descent: each iteration evaluates the exact
subgradient on the whole training set and a backtracking line search only ever
accepts a step that decreases the objective, so the recorded trace is monotone
by construction. The RBF variant minimizes the same objective over a kernel
expansion w = sum_i beta_i k(x_i, .), reusing the solver with the Gram matrix
in place of the raw features.

There is no stochastic element: for a fixed input set the result is exactly
reproducible, and permuting the training order only perturbs float summation
order. Trained models are immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import ConvergenceError, DegenerateTrainingError, DimensionError, FormatError
from .features import (
    FeatureMatrix,
    LabeledFeatureSet,
    QualityLabel,
    l2_normalize,
)

KERNEL_LINEAR = "linear"
KERNEL_RBF = "rbf"

# Label for a decision value of exactly 0. The gate fails closed: an
# on-the-boundary sample is not Good.
_TIE_LABEL = QualityLabel.BAD


@dataclass(frozen=True)
class SvmConfig:
    kernel: str = KERNEL_LINEAR
    c: float = 1.0
    tolerance: float = 1e-6
    max_iterations: int = 10000
    seed: int = 0
    normalize: bool = True
    gamma: Optional[float] = None  # RBF width; defaults to 1/feature_dim

    def __post_init__(self):
        if self.kernel not in (KERNEL_LINEAR, KERNEL_RBF):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError("regularization c must be positive")
        if not (np.isfinite(self.tolerance) and self.tolerance > 0):
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.gamma is not None and not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError("rbf gamma must be positive")


@dataclass(frozen=True, eq=False)
class SvmModel:
    """A trained decision function plus the metadata needed to reproduce it."""

    kernel: str
    c: float
    bias: float
    feature_dim: int
    normalize: bool
    weights: Optional[np.ndarray] = None          # linear: (F,)
    alphas: Optional[np.ndarray] = None           # rbf: signed dual coefficients
    support_vectors: Optional[np.ndarray] = None  # rbf: (n_sv, F), preprocessed
    gamma: Optional[float] = None
    train_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kernel == KERNEL_LINEAR:
            w = np.array(self.weights, dtype=np.float64, copy=True)
            if w.shape != (self.feature_dim,):
                raise DimensionError(
                    f"linear weights shape {w.shape} does not match feature_dim {self.feature_dim}"
                )
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)
        elif self.kernel == KERNEL_RBF:
            alphas = np.array(self.alphas, dtype=np.float64, copy=True)
            svs = np.array(self.support_vectors, dtype=np.float64, copy=True)
            svs = svs.reshape(alphas.size, self.feature_dim)
            alphas.setflags(write=False)
            svs.setflags(write=False)
            object.__setattr__(self, "alphas", alphas)
            object.__setattr__(self, "support_vectors", svs)
            if self.gamma is None or self.gamma <= 0:
                raise ValueError("rbf model needs a positive gamma")
        else:
            raise ValueError(f"unknown kernel {self.kernel!r}")

    @property
    def weight_norm(self) -> float:
        if self.kernel != KERNEL_LINEAR:
            raise ValueError("weight_norm is only defined for linear models")
        return float(np.linalg.norm(self.weights))

    def _preprocess(self, x: np.ndarray) -> np.ndarray:
        return l2_normalize(x) if self.normalize else x

    def decision_values(self, features: np.ndarray) -> np.ndarray:
        """Raw decision values for a (n, F) feature block."""
        x = np.asarray(features, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.feature_dim:
            raise DimensionError(
                f"features of shape {x.shape} do not match model dimension {self.feature_dim}"
            )
        x = self._preprocess(x)
        if self.kernel == KERNEL_LINEAR:
            return x @ self.weights + self.bias
        sq = (
            (x * x).sum(axis=1)[:, None]
            - 2.0 * x @ self.support_vectors.T
            + (self.support_vectors * self.support_vectors).sum(axis=1)[None, :]
        )
        kernel = np.exp(-self.gamma * np.maximum(sq, 0.0))
        return kernel @ self.alphas + self.bias

    def signed_distances(self, features: np.ndarray) -> np.ndarray:
        """Margin distances for linear models; raw decision values for RBF."""
        decisions = self.decision_values(features)
        if self.kernel == KERNEL_LINEAR:
            norm = self.weight_norm
            if norm > 0.0:
                return decisions / norm
        return decisions

    @property
    def distance_kind(self) -> str:
        """How signed distances are scaled: 'margin' or 'decision-value' (RBF)."""
        return "margin" if self.kernel == KERNEL_LINEAR else "decision-value"


def _descend(objective, subgradient, theta0: np.ndarray, *, tolerance: float, max_iterations: int):
    """Backtracking full-batch descent on a convex piecewise-smooth objective.

    Returns (theta, trace, stop_reason). Steps are accepted only under an
    Armijo decrease, so the trace is strictly non-increasing. Convergence is
    declared on a vanishing subgradient, a stalled relative decrease, or an
    exhausted line search (the iterate is pinned at a hinge kink); hitting the
    iteration cap while still making progress raises ConvergenceError.
    """
    theta = np.asarray(theta0, dtype=np.float64).copy()
    value = float(objective(theta))
    trace = [value]
    step = 1.0
    stalled = 0
    for _ in range(max_iterations):
        grad = subgradient(theta)
        grad_sq = float(grad @ grad)
        if math.sqrt(grad_sq) <= tolerance:
            return theta, trace, "subgradient"
        candidate = None
        t = step
        while t > 1e-20:
            trial = theta - t * grad
            trial_value = float(objective(trial))
            if trial_value <= value - 1e-4 * t * grad_sq:
                candidate = (trial, trial_value)
                break
            t *= 0.5
        if candidate is None:
            return theta, trace, "line-search-exhausted"
        drop = value - candidate[1]
        theta, value = candidate
        trace.append(value)
        step = min(t * 2.0, 1e6)
        if drop <= tolerance * max(1.0, abs(value)):
            stalled += 1
            if stalled >= 5:
                return theta, trace, "stalled"
        else:
            stalled = 0
    raise ConvergenceError(
        f"solver still improving after {max_iterations} iterations "
        f"(final objective {value:.6g})",
        value,
    )


def _linear_problem(x: np.ndarray, y: np.ndarray, c: float):
    def objective(theta):
        w, b = theta[:-1], theta[-1]
        margins = y * (x @ w + b)
        return 0.5 * float(w @ w) + c * float(np.maximum(0.0, 1.0 - margins).sum())

    def subgradient(theta):
        w, b = theta[:-1], theta[-1]
        margins = y * (x @ w + b)
        coef = y * (margins < 1.0)
        grad = np.empty_like(theta)
        grad[:-1] = w - c * (x.T @ coef)
        grad[-1] = -c * float(coef.sum())
        return grad

    return objective, subgradient


def _rbf_problem(kernel: np.ndarray, y: np.ndarray, c: float):
    def objective(theta):
        beta, b = theta[:-1], theta[-1]
        fx = kernel @ beta
        margins = y * (fx + b)
        return 0.5 * float(beta @ fx) + c * float(np.maximum(0.0, 1.0 - margins).sum())

    def subgradient(theta):
        beta, b = theta[:-1], theta[-1]
        fx = kernel @ beta
        margins = y * (fx + b)
        coef = y * (margins < 1.0)
        grad = np.empty_like(theta)
        grad[:-1] = fx - c * (kernel @ coef)
        grad[-1] = -c * float(coef.sum())
        return grad

    return objective, subgradient


def _rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    sq = (a * a).sum(axis=1)[:, None] - 2.0 * a @ b.T + (b * b).sum(axis=1)[None, :]
    return np.exp(-gamma * np.maximum(sq, 0.0))


def train_svm(train: LabeledFeatureSet, config: SvmConfig = SvmConfig()) -> SvmModel:
    """Fit a Good/Bad decision function on a labeled feature set.

    Raises DegenerateTrainingError unless both classes are present, and
    ConvergenceError if the iteration cap is hit while the objective is still
    dropping faster than the tolerance.
    """
    n_good = train.count(QualityLabel.GOOD)
    if n_good == 0 or n_good == len(train):
        raise DegenerateTrainingError(
            f"training set must contain both classes "
            f"(got {n_good} Good, {len(train) - n_good} Bad)"
        )
    x = l2_normalize(train.features) if config.normalize else np.asarray(train.features, np.float64)
    y = train.signs()
    n, dim = x.shape

    if config.kernel == KERNEL_LINEAR:
        objective, subgradient = _linear_problem(x, y, config.c)
        theta0 = np.zeros(dim + 1)
    else:
        gamma = config.gamma if config.gamma is not None else 1.0 / dim
        gram = _rbf_kernel(x, x, gamma)
        objective, subgradient = _rbf_problem(gram, y, config.c)
        theta0 = np.zeros(n + 1)

    theta, trace, reason = _descend(
        objective, subgradient, theta0,
        tolerance=config.tolerance, max_iterations=config.max_iterations,
    )
    meta = {
        "seed": config.seed,
        "iterations": len(trace) - 1,
        "final_objective": trace[-1],
        "objective_trace": tuple(trace),
        "stop_reason": reason,
    }
    if config.kernel == KERNEL_LINEAR:
        return SvmModel(
            kernel=KERNEL_LINEAR, c=config.c, bias=float(theta[-1]),
            feature_dim=dim, normalize=config.normalize,
            weights=theta[:-1], train_meta=meta,
        )
    beta = theta[:-1]
    keep = np.abs(beta) > 1e-12
    return SvmModel(
        kernel=KERNEL_RBF, c=config.c, bias=float(theta[-1]),
        feature_dim=dim, normalize=config.normalize,
        alphas=beta[keep], support_vectors=x[keep], gamma=gamma, train_meta=meta,
    )


def predict(model: SvmModel, x) -> tuple[QualityLabel, float]:
    """Classify one feature vector; returns (label, signed distance).

    The label is Good only for a strictly positive decision value; a decision
    value of exactly 0 is Bad. Linear distances are decision values divided by
    the weight norm; RBF distances are raw decision values.
    """
    vec = np.asarray(x, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != model.feature_dim:
        raise DimensionError(
            f"feature of shape {vec.shape} does not match model dimension {model.feature_dim}"
        )
    decision = float(model.decision_values(vec[None, :])[0])
    distance = float(model.signed_distances(vec[None, :])[0])
    label = QualityLabel.GOOD if decision > 0.0 else _TIE_LABEL
    return label, distance


@dataclass(frozen=True)
class SampleResult:
    id: str
    label: QualityLabel
    predicted: QualityLabel
    distance: float


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    samples: tuple[SampleResult, ...]
    confusion: dict  # keys tp/fp/tn/fn with Good as the positive class

    def correct(self) -> int:
        return self.confusion["tp"] + self.confusion["tn"]


def evaluate(model: SvmModel, test: LabeledFeatureSet) -> EvalReport:
    """Accuracy, confusion counts, and per-sample margins over a labeled set."""
    if len(test) == 0:
        raise ValueError("cannot evaluate on an empty set")
    decisions = model.decision_values(test.features)
    distances = model.signed_distances(test.features)
    samples = []
    confusion = {"tp": 0, "fp": 0, "tn": 0, "fn": 0}
    for i, sample_id in enumerate(test.ids):
        predicted = QualityLabel.GOOD if decisions[i] > 0.0 else _TIE_LABEL
        actual = test.labels[i]
        if predicted is QualityLabel.GOOD:
            confusion["tp" if actual is QualityLabel.GOOD else "fp"] += 1
        else:
            confusion["tn" if actual is QualityLabel.BAD else "fn"] += 1
        samples.append(SampleResult(sample_id, actual, predicted, float(distances[i])))
    accuracy = (confusion["tp"] + confusion["tn"]) / len(test)
    return EvalReport(accuracy, tuple(samples), confusion)


@dataclass(frozen=True)
class RankedSample:
    id: str
    label: Optional[QualityLabel]
    distance: float


def rank_by_margin(
    model: SvmModel, samples: Union[LabeledFeatureSet, FeatureMatrix]
) -> list[RankedSample]:
    """Samples ordered by signed distance, most confidently Good first.

    Ties are broken by id so the order is total and reproducible. For RBF
    models the distance is the raw decision value (model.distance_kind says
    which scaling applies). Unlabeled input yields label=None entries.
    """
    if isinstance(samples, LabeledFeatureSet):
        values, labels = samples.features, list(samples.labels)
    else:
        values, labels = samples.values, [None] * len(samples)
    distances = model.signed_distances(values)
    ranked = [
        RankedSample(sample_id, labels[i], float(distances[i]))
        for i, sample_id in enumerate(samples.ids)
    ]
    ranked.sort(key=lambda r: (-r.distance, r.id))
    return ranked


# --- JSON forms -------------------------------------------------------------

def model_to_dict(model: SvmModel) -> dict:
    meta = {
        "seed": model.train_meta.get("seed", 0),
        "iterations": model.train_meta.get("iterations", 0),
        "final_objective": model.train_meta.get("final_objective"),
    }
    doc = {
        "kernel": model.kernel,
        "c": model.c,
        "bias": model.bias,
        "feature_dim": model.feature_dim,
        "normalize": model.normalize,
        "train_meta": meta,
    }
    if model.kernel == KERNEL_LINEAR:
        doc["weights"] = model.weights.tolist()
    else:
        doc["alphas"] = model.alphas.tolist()
        doc["support_vectors"] = model.support_vectors.tolist()
        doc["gamma"] = model.gamma
    return doc


def model_from_dict(doc: dict) -> SvmModel:
    try:
        kernel = doc["kernel"]
        common = dict(
            c=float(doc["c"]),
            bias=float(doc["bias"]),
            feature_dim=int(doc["feature_dim"]),
            normalize=bool(doc["normalize"]),
            train_meta=dict(doc.get("train_meta", {})),
        )
        if kernel == KERNEL_LINEAR:
            return SvmModel(kernel=kernel, weights=np.asarray(doc["weights"], np.float64), **common)
        if kernel == KERNEL_RBF:
            return SvmModel(
                kernel=kernel,
                alphas=np.asarray(doc["alphas"], np.float64),
                support_vectors=np.asarray(doc["support_vectors"], np.float64),
                gamma=float(doc["gamma"]),
                **common,
            )
    except (KeyError, TypeError, ValueError, DimensionError) as exc:
        raise FormatError(f"malformed SVM model document: {exc}") from exc
    raise FormatError(f"malformed SVM model document: unknown kernel {kernel!r}")


def report_to_dict(report: EvalReport) -> dict:
    return {
        "accuracy": report.accuracy,
        "confusion": dict(report.confusion),
        "samples": [
            {
                "id": s.id,
                "label": s.label.value,
                "predicted": s.predicted.value,
                "distance": s.distance,
            }
            for s in report.samples
        ],
    }
