"""Principal-component baseline: project pixel features onto top-k directions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionError, FormatError
from .features import SOURCE_PCA, FeatureMatrix, LabeledFeatureSet


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Mean vector and orthonormal component rows, ordered by explained variance."""

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=np.float64, copy=True)
        components = np.array(self.components, dtype=np.float64, copy=True)
        variance = np.array(self.explained_variance, dtype=np.float64, copy=True)
        if components.ndim != 2 or mean.ndim != 1 or components.shape[1] != mean.size:
            raise DimensionError(
                f"components of shape {components.shape} do not match mean of length {mean.size}"
            )
        if variance.shape != (components.shape[0],):
            raise DimensionError("one explained-variance entry is required per component")
        for arr in (mean, components, variance):
            arr.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "explained_variance", variance)

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def feature_dim(self) -> int:
        return self.components.shape[1]


def _as_matrix(data: Union[LabeledFeatureSet, FeatureMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(data, LabeledFeatureSet):
        return data.features
    if isinstance(data, FeatureMatrix):
        return data.values
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D sample matrix, got shape {arr.shape}")
    return arr


def fit_pca(train, k: int) -> PcaModel:
    """Top-k principal directions of the mean-centered training matrix.

    Component rows are orthonormal and ordered by non-increasing explained
    variance; each row's sign is fixed so its largest-magnitude entry is
    positive, which makes the fit reproducible across factorization backends.
    """
    x = _as_matrix(train)
    n, dim = x.shape
    if not 1 <= k <= min(dim, n - 1):
        raise DimensionError(
            f"k must satisfy 1 <= k <= min(dim, n_samples - 1) = {min(dim, n - 1)}, got {k}"
        )
    mean = x.mean(axis=0)
    centered = x - mean
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:k].copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    explained = (singular[:k] ** 2) / (n - 1)
    return PcaModel(mean, components, explained)


def pca_transform(model: PcaModel, x) -> np.ndarray:
    """Project one feature vector: components @ (x - mean)."""
    vec = np.asarray(x, dtype=np.float64)
    if vec.ndim != 1 or vec.size != model.feature_dim:
        raise DimensionError(
            f"feature of shape {vec.shape} does not match model dimension {model.feature_dim}"
        )
    return model.components @ (vec - model.mean)


def pca_transform_matrix(model: PcaModel, features: FeatureMatrix) -> FeatureMatrix:
    """Project every row of a feature matrix; rows keep their ids, source becomes 'pca'."""
    if features.dim != model.feature_dim:
        raise DimensionError(
            f"features of dim {features.dim} do not match model dimension {model.feature_dim}"
        )
    projected = (features.values - model.mean) @ model.components.T
    return FeatureMatrix(features.ids, projected, SOURCE_PCA)


def pca_to_dict(model: PcaModel) -> dict:
    return {
        "mean": model.mean.tolist(),
        "components": model.components.tolist(),
        "explained_variance": model.explained_variance.tolist(),
        "k": model.k,
        "feature_dim": model.feature_dim,
    }


def pca_from_dict(doc: dict) -> PcaModel:
    try:
        return PcaModel(
            np.asarray(doc["mean"], np.float64),
            np.asarray(doc["components"], np.float64),
            np.asarray(doc["explained_variance"], np.float64),
        )
    except (KeyError, TypeError, ValueError, DimensionError) as exc:
        raise FormatError(f"malformed PCA model document: {exc}") from exc
