"""Deep-feature extraction with a VGG-16 trunk.

Activations are taken after the ReLU of the chosen block-5 convolution and
reduced to one row per image, either by global average pooling (512-d) or by
flattening the spatial map. Images are resized to 224x224 and normalized with
the network's original per-channel statistics before the forward pass;
extraction runs in eval mode under no_grad, so rows are deterministic for
fixed weights.
"""

from __future__ import annotations

import numpy as np
import torch
from torchvision.models import vgg16

from .errors import DimensionError, FormatError
from .images import list_images, load_batch

# Post-ReLU cut points inside torchvision vgg16().features for each block-5 conv.
LAYER_CUTOFFS = {"conv5_1": 26, "conv5_2": 28, "conv5_3": 30}

POOL_GAP = "global-average"
POOL_FLATTEN = "flatten"
_POOL_ALIASES = {"gap": POOL_GAP, POOL_GAP: POOL_GAP, POOL_FLATTEN: POOL_FLATTEN}

INPUT_SIZE = 224
_CHANNEL_MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
_CHANNEL_STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)


def resolve_pooling(name: str) -> str:
    try:
        return _POOL_ALIASES[name]
    except KeyError:
        raise FormatError(f"unknown pooling {name!r} (use gap or flatten)") from None


def build_trunk(layer: str, weights_path=None, device: str = "cpu") -> torch.nn.Module:
    """The VGG-16 convolutional trunk, truncated after the requested activation.

    weights_path may hold a state dict for the full torchvision vgg16 (keys
    prefixed "features.") or for just its features trunk; without a path the
    torchvision pretrained weights are fetched.
    """
    if layer not in LAYER_CUTOFFS:
        raise FormatError(f"unknown feature layer {layer!r} (use one of {sorted(LAYER_CUTOFFS)})")
    if weights_path is None:
        from torchvision.models import VGG16_Weights

        model = vgg16(weights=VGG16_Weights.IMAGENET1K_V1)
        trunk_source = model.features
    else:
        state = torch.load(weights_path, map_location="cpu")
        if any(key.startswith("features.") for key in state):
            state = {
                key[len("features."):]: value
                for key, value in state.items()
                if key.startswith("features.")
            }
        trunk_source = vgg16(weights=None).features
        trunk_source.load_state_dict(state)
    trunk = trunk_source[: LAYER_CUTOFFS[layer]]
    trunk.eval()
    for param in trunk.parameters():
        param.requires_grad_(False)
    return trunk.to(device)


def _preprocess(arrays: list[np.ndarray]) -> torch.Tensor:
    batch = np.stack(arrays)  # (n, H, W, 3) in [0, 1]
    batch = (batch - _CHANNEL_MEAN) / _CHANNEL_STD
    return torch.from_numpy(batch.transpose(0, 3, 1, 2).copy())


def extract_features(source, layer: str = "conv5_1", pooling: str = POOL_GAP,
                     weights_path=None, batch_size: int = 16, device: str = "cpu",
                     strict: bool = True) -> tuple[list[str], np.ndarray, str]:
    """Extract one feature row per image, in manifest (or sorted) order.

    Returns (ids, matrix, source_tag); the tag records the layer, e.g.
    "deep:conv5_1".
    """
    pooling = resolve_pooling(pooling)
    trunk = build_trunk(layer, weights_path, device)
    paths = list_images(source)
    ids, arrays = load_batch(paths, INPUT_SIZE, strict)
    rows = []
    with torch.no_grad():
        for start in range(0, len(arrays), batch_size):
            batch = _preprocess(arrays[start : start + batch_size]).to(device)
            activation = trunk(batch)
            if pooling == POOL_GAP:
                reduced = activation.mean(dim=(2, 3))
            else:
                reduced = activation.flatten(start_dim=1)
            rows.append(reduced.cpu().numpy())
    if rows:
        matrix = np.vstack(rows)
    else:
        width = 512 if pooling == POOL_GAP else 0
        matrix = np.zeros((0, max(width, 1)), dtype=np.float32)
    if len(ids) != matrix.shape[0]:
        raise DimensionError(f"{len(ids)} ids for {matrix.shape[0]} feature rows")
    return ids, matrix, f"deep:{layer}"
