"""Run interpolation plans through a TorchScript generator, one image per point.

The generator is any scripted module with signature G(z, words, sentence)
returning NCHW images in [-1, 1]: exporting such an archive from the
generator's own repository keeps its architecture out of this codebase.
Latent-only plans need a text-metadata JSON ({"words": [[...]],
"sentence": [...]}) supplying the fixed conditioning; linguistic plans carry
blended conditioning per point.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .errors import DimensionError, FormatError
from .wire import WirePlan, read_plan, tri_center_index


def load_generator(path, device: str = "cpu") -> torch.jit.ScriptModule:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"generator weights not found: {path}")
    try:
        module = torch.jit.load(str(path), map_location=device)
    except Exception as exc:
        raise FormatError(f"cannot load TorchScript generator {path}: {exc}") from exc
    module.eval()
    return module


def _load_text_metadata(path) -> tuple[np.ndarray, np.ndarray]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if "words" not in doc or "sentence" not in doc:
        raise FormatError(f"{path}: text metadata must carry 'words' and 'sentence'")
    return (
        np.asarray(doc["words"], dtype=np.float32),
        np.asarray(doc["sentence"], dtype=np.float32),
    )


def _conditioning_batches(plan: WirePlan, text_path) -> tuple[np.ndarray, np.ndarray]:
    if plan.points and plan.points[0].words is not None:
        words = np.stack([p.words for p in plan.points]).astype(np.float32)
        sentences = np.stack([p.sentence for p in plan.points]).astype(np.float32)
        return words, sentences
    if text_path is None:
        raise FormatError(
            "plan points carry no conditioning; pass text metadata for latent-only plans"
        )
    words, sentence = _load_text_metadata(text_path)
    n = len(plan.points)
    return (
        np.repeat(words[None, :, :], n, axis=0),
        np.repeat(sentence[None, :], n, axis=0),
    )


def _to_unit_interval(frames: torch.Tensor) -> np.ndarray:
    arr = frames.detach().cpu().numpy()
    return np.clip((arr + 1.0) / 2.0, 0.0, 1.0)


def generate(plan_path, weights_path, out_dir, text_path=None,
             batch_size: int = 16, device: str = "cpu") -> dict:
    """Render every plan point to a PNG and write a manifest; returns the manifest.

    Images are named by plan index and listed in plan order; triangular plans
    also record which index sits nearest the (1/3, 1/3) barycenter.
    """
    plan = read_plan(plan_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    if plan.points:
        generator = load_generator(weights_path, device)
        latents = np.stack([p.latent for p in plan.points]).astype(np.float32)
        words, sentences = _conditioning_batches(plan, text_path)
        index = 0
        with torch.no_grad():
            for start in range(0, len(plan.points), batch_size):
                stop = start + batch_size
                try:
                    frames = generator(
                        torch.from_numpy(latents[start:stop]).to(device),
                        torch.from_numpy(words[start:stop]).to(device),
                        torch.from_numpy(sentences[start:stop]).to(device),
                    )
                except RuntimeError as exc:
                    raise DimensionError(
                        f"generator rejected plan inputs (dim {plan.dim}): {exc}"
                    ) from exc
                for frame in _to_unit_interval(frames):
                    name = f"point-{index:05d}.png"
                    pixels = (frame.transpose(1, 2, 0) * 255.0).round().astype(np.uint8)
                    Image.fromarray(pixels).save(out_dir / name)
                    point = plan.points[index]
                    entries.append(
                        {
                            "index": index,
                            "file": name,
                            "gamma1": point.gamma1,
                            "gamma2": point.gamma2,
                        }
                    )
                    index += 1
    manifest = {
        "kind": plan.kind,
        "steps": plan.steps,
        "count": len(entries),
        "images": entries,
    }
    if plan.is_triangular and entries:
        manifest["center_index"] = tri_center_index(plan.steps)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return manifest
