"""Raw-pixel export: the baseline feature space is the resized image itself."""

from __future__ import annotations

import numpy as np

from .images import list_images, load_batch


def export_pixels(source, size: int = 64, strict: bool = True) -> tuple[list[str], np.ndarray, str]:
    """One row per image: flattened row-major RGB in [0, 1] at size x size.

    Returns (ids, matrix, source_tag) with rows in manifest (or sorted) order.
    """
    if size < 1:
        raise ValueError(f"resize must be at least 1 pixel, got {size}")
    paths = list_images(source)
    ids, arrays = load_batch(paths, size, strict)
    if arrays:
        matrix = np.stack([a.reshape(-1) for a in arrays])
    else:
        matrix = np.zeros((0, size * size * 3), dtype=np.float32)
    return ids, matrix, "pixels"
