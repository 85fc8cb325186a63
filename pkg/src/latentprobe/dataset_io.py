"""File formats: the FVEC feature container, plan JSON, manifests, and label maps.

FVEC layout, byte-exact:

    magic   6 bytes   b"FVEC1\\n"
    count   4 bytes   unsigned 32-bit little-endian row count
    dim     4 bytes   unsigned 32-bit little-endian row width
    payload count*dim little-endian IEEE-754 float32, row-major
    footer  UTF-8 JSON object {"ids": [...], "source": "..."} to end of file

Features tolerate the float32 rounding; plan JSON keeps full 64-bit values
(floats are serialized with shortest round-trip representations), so plans
read back value-exact. Readers validate and reject rather than truncate.
"""

from __future__ import annotations

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Union

import numpy as np

from .errors import DimensionError, FormatError, ParseError, RangeError, SplitError
from .features import SOURCE_LATENT, FeatureMatrix, LabeledFeatureSet, QualityLabel
from .interp import (
    PAIRWISE_KINDS,
    PLAN_KINDS,
    ConditioningPair,
    InterpolationPlan,
    LatentCode,
    MixParams,
    PlanPoint,
)

logger = logging.getLogger(__name__)

FVEC_MAGIC = b"FVEC1\n"
_FVEC_HEADER = struct.Struct("<II")

# Expected Good/Bad dataset layout: per-class counts for the full set and its
# train/test partition.
EXPECTED_FULL_PER_CLASS = 210
EXPECTED_TRAIN_PER_CLASS = 150
EXPECTED_TEST_PER_CLASS = 60

SPLIT_TRAIN = "train"
SPLIT_TEST = "test"


def _reject_constant(text: str):
    raise FormatError(f"non-finite literal {text!r} is not permitted")


def _load_json(path, error_cls=ParseError):
    """Read a UTF-8 JSON document, rejecting NaN/Infinity literals."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise error_cls(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _dump_json(doc, path) -> int:
    data = json.dumps(doc, indent=2, allow_nan=False).encode("utf-8")
    Path(path).write_bytes(data)
    return len(data)


# --- FVEC -------------------------------------------------------------------

def write_fvec(features: Union[FeatureMatrix, LabeledFeatureSet], path) -> int:
    """Write a feature block to FVEC; returns the byte count written.

    Accepts anything exposing ids/source with a values (or features) matrix;
    labels are never stored in FVEC. Values are rounded to float32.
    """
    values = features.features if hasattr(features, "features") else features.values
    count, dim = values.shape
    if count >= 2**32 or dim >= 2**32 or count * dim >= 2**32:
        raise RangeError(f"count*dim = {count}*{dim} exceeds the 32-bit FVEC limit")
    payload = np.ascontiguousarray(values, dtype="<f4")
    footer = json.dumps(
        {"ids": list(features.ids), "source": features.source}, allow_nan=False
    ).encode("utf-8")
    blob = FVEC_MAGIC + _FVEC_HEADER.pack(count, dim) + payload.tobytes() + footer
    Path(path).write_bytes(blob)
    return len(blob)


def read_fvec(path) -> FeatureMatrix:
    """Parse an FVEC file back into a FeatureMatrix (exact inverse of write_fvec)."""
    data = Path(path).read_bytes()
    if len(data) < len(FVEC_MAGIC) + _FVEC_HEADER.size:
        raise FormatError(f"{path}: too short to hold an FVEC header ({len(data)} bytes)")
    if data[: len(FVEC_MAGIC)] != FVEC_MAGIC:
        raise FormatError(f"{path}: bad magic {data[:6]!r}")
    count, dim = _FVEC_HEADER.unpack_from(data, len(FVEC_MAGIC))
    if dim == 0:
        raise FormatError(f"{path}: zero feature dimension")
    start = len(FVEC_MAGIC) + _FVEC_HEADER.size
    expected = 4 * count * dim
    available = len(data) - start
    if available < expected:
        raise FormatError(
            f"{path}: truncated payload, expected {expected} bytes but found {available}"
        )
    payload = np.frombuffer(data, dtype="<f4", count=count * dim, offset=start)
    values = payload.reshape(count, dim).copy()
    if not np.isfinite(values).all():
        raise FormatError(f"{path}: payload contains non-finite values")
    footer_bytes = data[start + expected :]
    if not footer_bytes:
        raise FormatError(f"{path}: missing JSON footer")
    try:
        footer = json.loads(footer_bytes.decode("utf-8"), parse_constant=_reject_constant)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: unreadable JSON footer: {exc}") from exc
    if not isinstance(footer, dict) or "ids" not in footer:
        raise FormatError(f"{path}: footer must be an object with an 'ids' list")
    ids = footer["ids"]
    if len(ids) != count:
        raise FormatError(f"{path}: footer lists {len(ids)} ids for {count} rows")
    return FeatureMatrix(tuple(ids), values, str(footer.get("source", "")))


# --- Interpolation plans ----------------------------------------------------

def _corner_to_dict(corner) -> dict:
    if isinstance(corner, LatentCode):
        return {"latent": corner.values.tolist()}
    return {"words": corner.words.tolist(), "sentence": corner.sentence.tolist()}


def plan_to_dict(plan: InterpolationPlan) -> dict:
    points = []
    for p in plan.points:
        entry = {
            "gamma1": p.mix.gamma1,
            "gamma2": p.mix.gamma2,
            "latent": p.latent.values.tolist(),
        }
        if p.conditioning is not None:
            entry["words"] = p.conditioning.words.tolist()
            entry["sentence"] = p.conditioning.sentence.tolist()
        points.append(entry)
    return {
        "kind": plan.kind,
        "steps": plan.steps,
        "dim": plan.dim,
        "corners": [_corner_to_dict(c) for c in plan.corners],
        "points": points,
    }


def plan_from_dict(doc: dict) -> InterpolationPlan:
    try:
        kind = doc["kind"]
        if kind not in PLAN_KINDS:
            raise FormatError(f"unknown plan kind {kind!r}")
        steps = doc["steps"]
        if not isinstance(steps, int) or steps < 2:
            raise FormatError(f"steps must be an integer >= 2, got {steps!r}")
        dim = doc["dim"]
        expected = steps if kind in PAIRWISE_KINDS else steps * (steps + 1) // 2
        raw_points = doc["points"]
        if len(raw_points) != expected:
            raise FormatError(
                f"{kind} plan with steps={steps} must carry {expected} points, "
                f"got {len(raw_points)}"
            )
        corners = []
        for raw in doc["corners"]:
            if "latent" in raw:
                corners.append(LatentCode(np.asarray(raw["latent"], np.float64)))
            else:
                corners.append(
                    ConditioningPair(
                        np.asarray(raw["words"], np.float64),
                        np.asarray(raw["sentence"], np.float64),
                    )
                )
        points = []
        for raw in raw_points:
            latent = LatentCode(np.asarray(raw["latent"], np.float64))
            if latent.dim != dim:
                raise FormatError(
                    f"point latent has length {latent.dim}, plan declares dim {dim}"
                )
            conditioning = None
            if "words" in raw or "sentence" in raw:
                conditioning = ConditioningPair(
                    np.asarray(raw["words"], np.float64),
                    np.asarray(raw["sentence"], np.float64),
                )
            points.append(
                PlanPoint(MixParams(raw["gamma1"], raw["gamma2"]), latent, conditioning)
            )
        return InterpolationPlan(kind, steps, tuple(corners), tuple(points))
    except FormatError:
        raise
    except Exception as exc:  # malformed structure, bad numbers, invariant breaks
        raise FormatError(f"malformed plan document: {exc}") from exc


def write_plan(plan: InterpolationPlan, path) -> int:
    """Serialize a plan to JSON; returns the byte count written."""
    return _dump_json(plan_to_dict(plan), path)


def read_plan(path) -> InterpolationPlan:
    """Parse a plan JSON file, enforcing kind, steps, and point-count consistency."""
    return plan_from_dict(_load_json(path, error_cls=FormatError))


# --- Good/Bad manifest -------------------------------------------------------

@dataclass(frozen=True)
class ManifestEntry:
    id: str
    image: str
    latent: LatentCode
    label: QualityLabel
    split: str


@dataclass(frozen=True, eq=False)
class GoodBadManifest:
    dim: int
    entries: tuple[ManifestEntry, ...]

    def count(self, label: QualityLabel, split: Union[str, None] = None) -> int:
        return sum(
            1
            for e in self.entries
            if e.label is label and (split is None or e.split == split)
        )

    def split_entries(self, split: str) -> tuple[ManifestEntry, ...]:
        return tuple(e for e in self.entries if e.split == split)

    def latent_feature_sets(self) -> tuple[LabeledFeatureSet, LabeledFeatureSet]:
        """Latent codes as (train, test) labeled feature sets for the latent baseline."""
        sets = []
        for split in (SPLIT_TRAIN, SPLIT_TEST):
            entries = self.split_entries(split)
            values = (
                np.stack([e.latent.values for e in entries])
                if entries
                else np.zeros((0, self.dim))
            )
            sets.append(
                LabeledFeatureSet(
                    tuple(e.id for e in entries),
                    values,
                    tuple(e.label for e in entries),
                    SOURCE_LATENT,
                )
            )
        return sets[0], sets[1]


def _manifest_entry(raw: dict, dim: int, index: int) -> ManifestEntry:
    for key in ("id", "image", "latent", "label", "split"):
        if key not in raw:
            raise ParseError(f"manifest entry {index} is missing field {key!r}")
    entry_id = str(raw["id"])
    try:
        latent = LatentCode(np.asarray(raw["latent"], np.float64))
    except Exception as exc:
        raise ParseError(f"entry {entry_id!r}: invalid latent: {exc}") from exc
    if latent.dim != dim:
        raise ParseError(
            f"entry {entry_id!r}: latent has length {latent.dim}, manifest declares dim {dim}"
        )
    label = QualityLabel.from_string(raw["label"])
    split = raw["split"]
    if split not in (SPLIT_TRAIN, SPLIT_TEST):
        raise ParseError(f"entry {entry_id!r}: unknown split {split!r}")
    return ManifestEntry(entry_id, str(raw["image"]), latent, label, split)


def load_manifest(path, strict: bool = True) -> GoodBadManifest:
    """Load and validate a Good/Bad dataset manifest.

    Strict mode rejects split counts other than 210/210 overall, 150/150
    train, and 60/60 test; lenient mode logs a warning and returns the
    manifest anyway.
    """
    doc = _load_json(path)
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise ParseError(f"{path}: manifest must be an object with 'dim' and 'entries'")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{path}: dim must be a positive integer, got {dim!r}")
    entries = []
    seen = set()
    for index, raw in enumerate(doc["entries"]):
        entry = _manifest_entry(raw, dim, index)
        if entry.id in seen:
            raise ParseError(f"duplicate manifest id {entry.id!r}")
        seen.add(entry.id)
        entries.append(entry)
    manifest = GoodBadManifest(dim, tuple(entries))

    expected = {
        ("full", None): EXPECTED_FULL_PER_CLASS,
        ("train", SPLIT_TRAIN): EXPECTED_TRAIN_PER_CLASS,
        ("test", SPLIT_TEST): EXPECTED_TEST_PER_CLASS,
    }
    problems = []
    for (name, split), want in expected.items():
        for label in (QualityLabel.GOOD, QualityLabel.BAD):
            got = manifest.count(label, split)
            if got != want:
                problems.append(f"{name} {label.value} count {got} != {want}")
    if problems:
        message = f"{path}: split counts are off: " + "; ".join(problems)
        if strict:
            raise SplitError(message)
        logger.warning(message)
    return manifest


# --- Label maps ---------------------------------------------------------------

def write_labels(labels: Mapping[str, QualityLabel], path) -> int:
    """Write an id -> 'good'/'bad' JSON map."""
    return _dump_json({key: value.value for key, value in labels.items()}, path)


def read_labels(path) -> dict[str, QualityLabel]:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: label map must be a JSON object")
    return {str(key): QualityLabel.from_string(value) for key, value in doc.items()}


def labels_of(labeled: LabeledFeatureSet) -> dict[str, QualityLabel]:
    return dict(zip(labeled.ids, labeled.labels))
