"""Deterministic stand-in image generator for exercising plan smoothness.

A seeded random projection followed by a sigmoid maps a plan point's flattened
inputs to an H x W x 3 tensor in [0, 1]. The pre-sigmoid map is linear and the
sigmoid slope is at most 1/4, so frame-to-frame deltas along a plan obey an
analytic Lipschitz bound computable from the projection matrix alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .interp import InterpolationPlan, PlanPoint


@dataclass(frozen=True)
class ToyGenParams:
    seed: int = 0
    height: int = 16
    width: int = 16
    projection_scale: float = 0.1

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise ValueError(f"image size must be at least 1x1, got {self.height}x{self.width}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if not np.isfinite(self.projection_scale):
            raise ValueError("projection scale must be finite")


def point_input(point: PlanPoint) -> np.ndarray:
    """Flattened generator input: latent, then sentence and per-column word means."""
    parts = [point.latent.values]
    if point.conditioning is not None:
        parts.append(point.conditioning.sentence)
        parts.append(point.conditioning.words.mean(axis=0))
    return np.concatenate(parts)


def _projection(params: ToyGenParams, n_inputs: int) -> np.ndarray:
    rng = np.random.default_rng(params.seed)
    return rng.standard_normal((params.height * params.width * 3, n_inputs))


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _render(projection: np.ndarray, scale: float, u: np.ndarray) -> np.ndarray:
    return _sigmoid(scale * (projection @ u))


def toy_generate(point: PlanPoint, params: ToyGenParams) -> np.ndarray:
    """Render one plan point to an (height, width, 3) tensor in [0, 1]."""
    u = point_input(point)
    frame = _render(_projection(params, u.size), params.projection_scale, u)
    return frame.reshape(params.height, params.width, 3)


def render_plan(plan: InterpolationPlan, params: ToyGenParams) -> np.ndarray:
    """Render every plan point; returns (n_points, height*width*3) rows in plan order.

    The projection matrix is built once and each row matches toy_generate for
    the same point bit-for-bit.
    """
    inputs = [point_input(p) for p in plan.points]
    projection = _projection(params, inputs[0].size)
    return np.stack([_render(projection, params.projection_scale, u) for u in inputs])


def toy_lipschitz_bound(params: ToyGenParams, n_inputs: int) -> float:
    """Per-pixel Lipschitz constant of toy_generate wrt its flattened input.

    |sigmoid(a) - sigmoid(b)| <= |a - b|/4 and each logit is scale * (row . u),
    so the max-abs pixel delta between two inputs u, v is bounded by
    scale * max_row_norm / 4 * ||u - v||.
    """
    projection = _projection(params, n_inputs)
    row_norms = np.sqrt((projection * projection).sum(axis=1))
    return float(abs(params.projection_scale) * row_norms.max() / 4.0)


def max_consecutive_delta(frames: np.ndarray) -> float:
    """Largest max-abs pixel difference between consecutive rendered frames."""
    if frames.shape[0] < 2:
        return 0.0
    return float(np.abs(np.diff(frames, axis=0)).max())
