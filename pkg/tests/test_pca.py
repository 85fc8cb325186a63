import numpy as np
import pytest

from latentprobe.errors import DimensionError, FormatError
from latentprobe.features import FeatureMatrix
from latentprobe.pca import (
    fit_pca,
    pca_from_dict,
    pca_to_dict,
    pca_transform,
    pca_transform_matrix,
)


def test_single_direction_variance_recovers_axis(rng):
    t = rng.standard_normal(50)
    data = np.zeros((50, 6))
    data[:, 0] = t  # variance only along e1
    model = fit_pca(data, 1)
    e1 = np.zeros(6)
    e1[0] = 1.0
    assert np.abs(model.components[0] - e1).max() < 1e-8  # sign fixed positive


def test_transform_of_training_mean_is_zero(rng):
    data = rng.standard_normal((40, 9))
    model = fit_pca(data, 4)
    assert np.abs(pca_transform(model, model.mean)).max() == 0.0


def test_components_orthonormal(rng):
    model = fit_pca(rng.standard_normal((60, 20)), 12)
    gram = model.components @ model.components.T
    assert np.abs(gram - np.eye(12)).max() < 1e-6


def test_explained_variance_non_increasing(rng):
    model = fit_pca(rng.standard_normal((80, 15)), 10)
    assert np.all(np.diff(model.explained_variance) <= 1e-12)


def test_projection_contracts_norm(rng):
    data = rng.standard_normal((30, 8))
    model = fit_pca(data, 3)
    for x in data[:10]:
        assert np.linalg.norm(pca_transform(model, x)) <= np.linalg.norm(x - model.mean) + 1e-12


def test_rank_k_data_reconstructs_exactly(rng):
    # oracle: data of exact rank k lies in the span of the top-k components,
    # so projecting and lifting back must reproduce it
    k = 4
    basis = rng.standard_normal((k, 12))
    coords = rng.standard_normal((40, k))
    data = coords @ basis
    model = fit_pca(data, k)
    for x in data[:10]:
        reconstructed = model.mean + model.components.T @ pca_transform(model, x)
        assert np.abs(reconstructed - x).max() < 1e-8


def test_k_out_of_range(rng):
    data = rng.standard_normal((10, 5))
    with pytest.raises(DimensionError):
        fit_pca(data, 0)
    with pytest.raises(DimensionError):
        fit_pca(data, 6)  # k > dim
    with pytest.raises(DimensionError):
        fit_pca(rng.standard_normal((4, 20)), 4)  # k > n - 1


def test_transform_dimension_mismatch(rng):
    model = fit_pca(rng.standard_normal((20, 6)), 2)
    with pytest.raises(DimensionError):
        pca_transform(model, np.zeros(7))


def test_matrix_transform_keeps_ids_and_sets_source(rng):
    data = rng.standard_normal((20, 6))
    model = fit_pca(data, 3)
    fm = FeatureMatrix(tuple(f"r{i}" for i in range(5)), data[:5])
    out = pca_transform_matrix(model, fm)
    assert out.ids == fm.ids
    assert out.source == "pca"
    assert out.dim == 3
    for i in range(5):
        assert np.allclose(out.values[i], pca_transform(model, data[i]), rtol=0, atol=1e-12)


def test_json_roundtrip(rng):
    model = fit_pca(rng.standard_normal((25, 7)), 3)
    back = pca_from_dict(pca_to_dict(model))
    assert np.array_equal(back.mean, model.mean)
    assert np.array_equal(back.components, model.components)
    assert np.array_equal(back.explained_variance, model.explained_variance)


def test_malformed_document_rejected():
    with pytest.raises(FormatError):
        pca_from_dict({"mean": [0.0]})


def test_deterministic_sign_convention(rng):
    model = fit_pca(rng.standard_normal((30, 10)), 5)
    for row in model.components:
        assert row[np.argmax(np.abs(row))] > 0
