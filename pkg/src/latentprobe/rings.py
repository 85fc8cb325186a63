"""Synthetic concentric-rings task: a desk-scale nonlinear-to-linear benchmark.

Two noisy circles cannot be split by a line in the plane, but appending the
squared radius as a third coordinate makes the classes linearly separable.
Training the same linear classifier on the raw and lifted sets therefore
demonstrates, at toy scale, how a feature space that straightens the data
turns a hopeless linear problem into an easy one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import LabeledFeatureSet, QualityLabel


@dataclass(frozen=True)
class RingsConfig:
    seed: int = 7
    n_train: int = 300
    n_test: int = 120
    radii: tuple[float, float] = (1.0, 2.0)
    noise: float = 0.1

    def __post_init__(self):
        r = tuple(float(v) for v in self.radii)
        if len(r) != 2 or not all(np.isfinite(v) and v > 0 for v in r) or r[0] == r[1]:
            raise ValueError(f"radii must be two distinct positive reals, got {self.radii}")
        if not (np.isfinite(self.noise) and self.noise >= 0):
            raise ValueError(f"noise must be a non-negative real, got {self.noise}")
        for name, count in (("n_train", self.n_train), ("n_test", self.n_test)):
            if count % 2 != 0 or count < 8:
                raise ValueError(f"{name} must be an even total of at least 8, got {count}")
        object.__setattr__(self, "radii", r)


@dataclass(frozen=True)
class RingsData:
    raw_train: LabeledFeatureSet
    raw_test: LabeledFeatureSet
    lifted_train: LabeledFeatureSet
    lifted_test: LabeledFeatureSet


def _lift(points: np.ndarray) -> np.ndarray:
    return np.column_stack([points, (points * points).sum(axis=1)])


def _sample_split(rng: np.random.Generator, tag: str, total: int, radii, noise):
    inner, outer = min(radii), max(radii)
    per_class = total // 2
    ids, labels, rows = [], [], []
    for radius, label, word in ((inner, QualityLabel.GOOD, "good"), (outer, QualityLabel.BAD, "bad")):
        angles = rng.uniform(0.0, 2.0 * np.pi, per_class)
        r = radius + noise * rng.standard_normal(per_class)
        rows.append(np.column_stack([r * np.cos(angles), r * np.sin(angles)]))
        ids.extend(f"{tag}-{word}-{i:04d}" for i in range(per_class))
        labels.extend([label] * per_class)
    return tuple(ids), np.vstack(rows), tuple(labels)


def rings_oracle(config: RingsConfig = RingsConfig()) -> RingsData:
    """Generate matched raw (2-D) and lifted (3-D) train/test ring sets.

    The inner ring is Good, the outer Bad; class counts are exactly balanced
    and the lifted sets are the raw points with x^2 + y^2 appended, so raw and
    lifted rows correspond one-to-one. Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(config.seed)
    train_ids, train_raw, train_labels = _sample_split(
        rng, "train", config.n_train, config.radii, config.noise
    )
    test_ids, test_raw, test_labels = _sample_split(
        rng, "test", config.n_test, config.radii, config.noise
    )
    return RingsData(
        raw_train=LabeledFeatureSet(train_ids, train_raw, train_labels, "rings-raw"),
        raw_test=LabeledFeatureSet(test_ids, test_raw, test_labels, "rings-raw"),
        lifted_train=LabeledFeatureSet(train_ids, _lift(train_raw), train_labels, "rings-lifted"),
        lifted_test=LabeledFeatureSet(test_ids, _lift(test_raw), test_labels, "rings-lifted"),
    )
