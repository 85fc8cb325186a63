import numpy as np
import pytest

from latentprobe.features import LabeledFeatureSet, QualityLabel

GOOD, BAD = QualityLabel.GOOD, QualityLabel.BAD


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_labeled(values, labels, prefix="s", source="deep"):
    values = np.asarray(values, dtype=np.float64)
    ids = tuple(f"{prefix}{i:04d}" for i in range(values.shape[0]))
    return LabeledFeatureSet(ids, values, tuple(labels), source)


def separated_gaussians(rng, n_per_class=150, dim=4, distance=10.0):
    """Two unit-variance blobs with means `distance` apart along the first axis."""
    offset = np.zeros(dim)
    offset[0] = distance / 2.0
    good = rng.standard_normal((n_per_class, dim)) + offset
    bad = rng.standard_normal((n_per_class, dim)) - offset
    values = np.vstack([good, bad])
    labels = (GOOD,) * n_per_class + (BAD,) * n_per_class
    return make_labeled(values, labels)


def canonical_manifest_doc(dim=8, seed=0):
    """A manifest document with the expected 210/210, 150/150, 60/60 layout."""
    rng = np.random.default_rng(seed)
    entries = []
    for label, prefix in (("good", "g"), ("bad", "b")):
        for i in range(210):
            entries.append(
                {
                    "id": f"{prefix}{i:03d}",
                    "image": f"images/{prefix}{i:03d}.png",
                    "latent": rng.standard_normal(dim).tolist(),
                    "label": label,
                    "split": "train" if i < 150 else "test",
                }
            )
    return {"dim": dim, "entries": entries}
