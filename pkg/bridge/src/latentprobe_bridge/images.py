"""Image loading helpers shared by feature extraction and pixel export."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import FormatError, ImageError

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".webp"}


def list_images(source) -> list[Path]:
    """Resolve an image source to an ordered list of files.

    A manifest.json path (or a directory containing one) yields images in
    manifest order; a plain directory yields its image files sorted by name.
    """
    source = Path(source)
    manifest = None
    if source.is_file() and source.suffix == ".json":
        manifest = source
    elif source.is_dir() and (source / "manifest.json").is_file():
        manifest = source / "manifest.json"
    if manifest is not None:
        doc = json.loads(manifest.read_text(encoding="utf-8"))
        if "images" not in doc:
            raise FormatError(f"{manifest}: manifest has no 'images' list")
        return [manifest.parent / entry["file"] for entry in doc["images"]]
    if not source.is_dir():
        raise FileNotFoundError(f"no such image directory or manifest: {source}")
    return sorted(p for p in source.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)


def load_rgb(path, size: int | None = None) -> np.ndarray:
    """Decode one image to a float (H, W, 3) array in [0, 1], optionally resized."""
    try:
        with Image.open(path) as img:
            img = img.convert("RGB")
            if size is not None:
                img = img.resize((size, size), Image.BILINEAR)
            return np.asarray(img, dtype=np.float32) / 255.0
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise ImageError(f"cannot decode {path}: {exc}") from exc


def load_batch(paths, size: int | None, strict: bool) -> tuple[list[str], list[np.ndarray]]:
    """Decode many images; skip-with-warning or fail on undecodable files."""
    ids, arrays = [], []
    for path in paths:
        try:
            arrays.append(load_rgb(path, size))
        except ImageError as exc:
            if strict:
                raise
            logger.warning("skipping undecodable image: %s", exc)
            continue
        ids.append(Path(path).stem)
    return ids, arrays
