"""Feature containers shared by the classifier, the baselines, and file IO."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from .errors import DimensionError, ParseError

# Well-known feature source tags. FVEC footers carry these as free-form
# strings; deep features append the layer name, e.g. "deep:conv5_1".
SOURCE_PIXELS = "pixels"
SOURCE_PCA = "pca"
SOURCE_LATENT = "latent"
SOURCE_DEEP = "deep"


class QualityLabel(Enum):
    GOOD = "good"
    BAD = "bad"

    @property
    def sign(self) -> int:
        return 1 if self is QualityLabel.GOOD else -1

    @classmethod
    def from_string(cls, text: str) -> "QualityLabel":
        try:
            return cls(text)
        except ValueError:
            raise ParseError(f"unknown quality label {text!r} (expected 'good' or 'bad')") from None

    @classmethod
    def from_sign(cls, value: float) -> "QualityLabel":
        return QualityLabel.GOOD if value > 0 else QualityLabel.BAD


def _checked_matrix(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 2:
        raise DimensionError(f"feature matrix must be 2-D, got shape {arr.shape}")
    if arr.shape[1] < 1:
        raise DimensionError("feature vectors must have at least one component")
    if not np.isfinite(arr).all():
        raise ValueError("feature matrix contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _checked_ids(ids, count: int) -> tuple[str, ...]:
    ids = tuple(str(i) for i in ids)
    if len(ids) != count:
        raise DimensionError(f"{len(ids)} ids for {count} feature rows")
    seen = set()
    for sample_id in ids:
        if sample_id in seen:
            raise ParseError(f"duplicate sample id {sample_id!r}")
        seen.add(sample_id)
    return ids


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Unlabeled feature rows with stable ids; the in-memory form of an FVEC file."""

    ids: tuple[str, ...]
    values: np.ndarray
    source: str = SOURCE_DEEP

    def __post_init__(self):
        values = _checked_matrix(self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ids", _checked_ids(self.ids, values.shape[0]))

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class LabeledFeatureSet:
    """Feature rows with Good/Bad labels; the classifier's training/testing unit."""

    ids: tuple[str, ...]
    features: np.ndarray
    labels: tuple[QualityLabel, ...]
    source: str = SOURCE_DEEP

    def __post_init__(self):
        features = _checked_matrix(self.features)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "ids", _checked_ids(self.ids, features.shape[0]))
        labels = tuple(self.labels)
        if len(labels) != features.shape[0]:
            raise DimensionError(f"{len(labels)} labels for {features.shape[0]} feature rows")
        if not all(isinstance(l, QualityLabel) for l in labels):
            raise ValueError("labels must be QualityLabel values")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def signs(self) -> np.ndarray:
        """Labels as a +/-1 vector (Good = +1)."""
        return np.array([l.sign for l in self.labels], dtype=np.float64)

    def count(self, label: QualityLabel) -> int:
        return sum(1 for l in self.labels if l is label)


def labeled_set(features: FeatureMatrix, labels: Mapping[str, QualityLabel]) -> LabeledFeatureSet:
    """Join an FVEC-style feature matrix with an id -> label map."""
    resolved = []
    for sample_id in features.ids:
        if sample_id not in labels:
            raise ParseError(f"no label for sample id {sample_id!r}")
        resolved.append(labels[sample_id])
    return LabeledFeatureSet(features.ids, features.values, tuple(resolved), features.source)


def l2_normalize(values: np.ndarray) -> np.ndarray:
    """Scale each row (or a single vector) to unit length; zero rows pass through."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        norm = float(np.linalg.norm(arr))
        return arr.copy() if norm == 0.0 else arr / norm
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    norms = np.where(norms == 0.0, 1.0, norms)
    return arr / norms
