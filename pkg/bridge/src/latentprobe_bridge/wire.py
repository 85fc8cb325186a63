"""The toolkit's wire formats, as spoken by the bridge.

The bridge is a standalone process: it emits FVEC bytes and reads plan JSON
without importing the toolkit, so the byte layout here must stay in lockstep
with the format contract (magic FVEC1\\n, u32 LE count and dim, float32 LE
row-major payload, trailing JSON footer with ids and a source tag).

Unlike the toolkit's strict plan reader, read_plan here accepts a document
whose points list is empty: an empty work order renders nothing and is not an
error for a batch driver.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import FormatError

FVEC_MAGIC = b"FVEC1\n"
_FVEC_HEADER = struct.Struct("<II")

PAIRWISE_KINDS = ("lerp-latent", "lerp-linguistic")
TRIANGULAR_KINDS = ("tri-latent", "tri-linguistic")
PLAN_KINDS = PAIRWISE_KINDS + TRIANGULAR_KINDS


def write_fvec(ids, values, source: str, path) -> int:
    values = np.ascontiguousarray(values, dtype="<f4")
    if values.ndim != 2:
        raise FormatError(f"FVEC payload must be 2-D, got shape {values.shape}")
    count, dim = values.shape
    if len(ids) != count:
        raise FormatError(f"{len(ids)} ids for {count} rows")
    if count >= 2**32 or dim >= 2**32 or count * dim >= 2**32:
        raise FormatError(f"count*dim = {count}*{dim} exceeds the 32-bit FVEC limit")
    footer = json.dumps({"ids": list(ids), "source": source}, allow_nan=False).encode("utf-8")
    blob = FVEC_MAGIC + _FVEC_HEADER.pack(count, dim) + values.tobytes() + footer
    Path(path).write_bytes(blob)
    return len(blob)


@dataclass(frozen=True)
class WirePoint:
    gamma1: float
    gamma2: float
    latent: np.ndarray
    words: Optional[np.ndarray]
    sentence: Optional[np.ndarray]


@dataclass(frozen=True)
class WirePlan:
    kind: str
    steps: int
    dim: int
    points: tuple[WirePoint, ...]

    @property
    def is_triangular(self) -> bool:
        return self.kind in TRIANGULAR_KINDS


def _reject_constant(text: str):
    raise FormatError(f"non-finite literal {text!r} is not permitted")


def _finite(name: str, arr: np.ndarray) -> np.ndarray:
    if not np.isfinite(arr).all():
        raise FormatError(f"{name} contains non-finite values")
    return arr


def read_plan(path) -> WirePlan:
    """Parse a plan document; tolerates an empty points list."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc.msg} (line {exc.lineno})") from exc
    try:
        kind = doc["kind"]
        steps = int(doc["steps"])
        dim = int(doc["dim"])
        raw_points = doc["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed plan document: {exc}") from exc
    if kind not in PLAN_KINDS:
        raise FormatError(f"{path}: unknown plan kind {kind!r}")
    expected = steps if kind in PAIRWISE_KINDS else steps * (steps + 1) // 2
    if raw_points and len(raw_points) != expected:
        raise FormatError(
            f"{path}: {kind} plan with steps={steps} must carry {expected} points, "
            f"got {len(raw_points)}"
        )
    points = []
    for i, raw in enumerate(raw_points):
        try:
            latent = _finite("latent", np.asarray(raw["latent"], dtype=np.float64))
            if latent.shape != (dim,):
                raise FormatError(
                    f"point {i}: latent has shape {latent.shape}, plan declares dim {dim}"
                )
            words = sentence = None
            if "words" in raw or "sentence" in raw:
                words = _finite("words", np.asarray(raw["words"], dtype=np.float64))
                sentence = _finite("sentence", np.asarray(raw["sentence"], dtype=np.float64))
            points.append(
                WirePoint(float(raw["gamma1"]), float(raw["gamma2"]), latent, words, sentence)
            )
        except FormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}: malformed point {i}: {exc}") from exc
    return WirePlan(kind, steps, dim, tuple(points))


def tri_center_index(steps: int) -> int:
    """Index of the triangular grid node nearest (1/3, 1/3), in plan order."""
    best, best_dist = 0, float("inf")
    index = 0
    q = steps - 1
    for i in range(steps):
        for j in range(steps - i):
            dist = (j / q - 1 / 3) ** 2 + (i / q - 1 / 3) ** 2
            if dist < best_dist:
                best, best_dist = index, dist
            index += 1
    return best
