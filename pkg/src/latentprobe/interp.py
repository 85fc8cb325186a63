"""Pairwise and triangular interpolation plans over latent codes and text embeddings.

A plan is a pure value: the corner inputs, a deterministic mixing grid, and one
blended point per grid node. Pairwise plans sweep a single scalar gamma from 0
to 1 inclusive; triangular plans sweep barycentric weights over the 2-simplex.
Grid nodes are quotients of integers, endpoints are returned as the original
corner objects (so they are reproduced bit-exactly), and all arrays are frozen
64-bit, which makes plans safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, PlanSizeError, ShapeError

KIND_LERP_LATENT = "lerp-latent"
KIND_LERP_LINGUISTIC = "lerp-linguistic"
KIND_TRI_LATENT = "tri-latent"
KIND_TRI_LINGUISTIC = "tri-linguistic"

PAIRWISE_KINDS = (KIND_LERP_LATENT, KIND_LERP_LINGUISTIC)
TRIANGULAR_KINDS = (KIND_TRI_LATENT, KIND_TRI_LINGUISTIC)
PLAN_KINDS = PAIRWISE_KINDS + TRIANGULAR_KINDS

# Grid gammas are correctly rounded quotients, so any feasibility excess over
# 1 is a few ulp at most; this slack absorbs it without admitting bad input.
_BARY_EPS = 1e-12


def _frozen_array(values, dims: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    arr = np.atleast_1d(arr) if dims == 1 else np.atleast_2d(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LatentCode:
    """A fixed-length real vector from the generator's noise prior."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, 1)
        if arr.ndim != 1 or arr.size < 1:
            raise DimensionError(
                f"latent code must be a non-empty 1-D vector, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise ValueError("latent code contains non-finite entries")
        object.__setattr__(self, "values", arr)

    @property
    def dim(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        return isinstance(other, LatentCode) and np.array_equal(self.values, other.values)


@dataclass(frozen=True, eq=False)
class ConditioningPair:
    """Word-embedding matrix plus sentence vector encoding one text description."""

    words: np.ndarray
    sentence: np.ndarray

    def __post_init__(self):
        words = _frozen_array(self.words, 2)
        sentence = _frozen_array(self.sentence, 1)
        if words.ndim != 2 or words.shape[0] < 1 or words.shape[1] < 1:
            raise ShapeError(f"word matrix must be 2-D and non-empty, got shape {words.shape}")
        if sentence.ndim != 1 or sentence.size < 1:
            raise ShapeError(f"sentence must be a non-empty vector, got shape {sentence.shape}")
        if not (np.isfinite(words).all() and np.isfinite(sentence).all()):
            raise ValueError("conditioning contains non-finite entries")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "sentence", sentence)

    @property
    def shape_key(self) -> tuple[int, int, int]:
        """(word count, word width, sentence length) — blended pairs must agree on all three."""
        return (self.words.shape[0], self.words.shape[1], self.sentence.size)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ConditioningPair)
            and np.array_equal(self.words, other.words)
            and np.array_equal(self.sentence, other.sentence)
        )


@dataclass(frozen=True)
class MixParams:
    """Barycentric mixing weights; pairwise plans keep gamma2 at zero."""

    gamma1: float
    gamma2: float = 0.0

    def __post_init__(self):
        g1, g2 = float(self.gamma1), float(self.gamma2)
        if not (np.isfinite(g1) and np.isfinite(g2)):
            raise ValueError("mix parameters must be finite")
        if not (0.0 <= g1 <= 1.0 and 0.0 <= g2 <= 1.0):
            raise ValueError(f"mix parameters must lie in [0, 1], got ({g1}, {g2})")
        if g1 + g2 > 1.0 + _BARY_EPS:
            raise ValueError(f"infeasible barycentric mix: gamma1 + gamma2 = {g1 + g2}")
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)

    @property
    def weights(self) -> tuple[float, float, float]:
        return (1.0 - self.gamma1 - self.gamma2, self.gamma1, self.gamma2)


@dataclass(frozen=True)
class PlanPoint:
    """One blended evaluation point: mix weights, latent, optional conditioning."""

    mix: MixParams
    latent: LatentCode
    conditioning: Optional[ConditioningPair] = None


Corner = Union[LatentCode, ConditioningPair]


@dataclass(frozen=True)
class InterpolationPlan:
    """Ordered list of blended points plus the corners they were blended from."""

    kind: str
    steps: int
    corners: tuple[Corner, ...]
    points: tuple[PlanPoint, ...]

    def __post_init__(self):
        if self.kind not in PLAN_KINDS:
            raise ValueError(f"unknown plan kind {self.kind!r}")
        steps = _checked_steps(self.steps)
        expected = steps if self.kind in PAIRWISE_KINDS else steps * (steps + 1) // 2
        if len(self.points) != expected:
            raise ValueError(
                f"{self.kind} plan with steps={steps} must have {expected} points, "
                f"got {len(self.points)}"
            )
        n_corners = 2 if self.kind in PAIRWISE_KINDS else 3
        if len(self.corners) != n_corners:
            raise ValueError(f"{self.kind} plan must have {n_corners} corners")
        dims = {p.latent.dim for p in self.points}
        if len(dims) != 1:
            raise DimensionError(f"plan mixes latent dimensions {sorted(dims)}")
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "corners", tuple(self.corners))

    @property
    def dim(self) -> int:
        return self.points[0].latent.dim


def as_latent(value) -> LatentCode:
    """Coerce an array-like (or pass through a LatentCode) to a LatentCode."""
    return value if isinstance(value, LatentCode) else LatentCode(np.asarray(value, dtype=np.float64))


def as_conditioning(value) -> ConditioningPair:
    if isinstance(value, ConditioningPair):
        return value
    words, sentence = value
    return ConditioningPair(np.asarray(words, dtype=np.float64), np.asarray(sentence, dtype=np.float64))


def _checked_steps(steps) -> int:
    if isinstance(steps, bool) or not isinstance(steps, (int, np.integer)):
        raise PlanSizeError(f"steps must be an integer, got {steps!r}")
    if steps < 2:
        raise PlanSizeError(f"need at least 2 interpolation steps, got {steps}")
    return int(steps)


def _matched_latents(codes: Sequence) -> list[LatentCode]:
    out = [as_latent(z) for z in codes]
    dims = {z.dim for z in out}
    if len(dims) != 1:
        raise DimensionError(f"latent codes disagree on dimension: {sorted(dims)}")
    return out


def _matched_conditionings(conds: Sequence) -> list[ConditioningPair]:
    out = [as_conditioning(c) for c in conds]
    keys = {c.shape_key for c in out}
    if len(keys) != 1:
        raise ShapeError(f"conditioning pairs disagree on shape: {sorted(keys)}")
    return out


def lerp_latent(z0, z1, steps: int, conditioning=None) -> InterpolationPlan:
    """Linear interpolation between two latent codes.

    Point j carries gamma = j/(steps-1) and latent (1-gamma)*z0 + gamma*z1; the
    first and last points are the inputs themselves. An optional conditioning
    pair is attached unchanged to every point.
    """
    z0, z1 = _matched_latents([z0, z1])
    steps = _checked_steps(steps)
    cond = as_conditioning(conditioning) if conditioning is not None else None
    q = steps - 1
    points = []
    for j in range(steps):
        gamma = j / q
        if j == 0:
            latent = z0
        elif j == q:
            latent = z1
        else:
            latent = LatentCode((1.0 - gamma) * z0.values + gamma * z1.values)
        points.append(PlanPoint(MixParams(gamma, 0.0), latent, cond))
    return InterpolationPlan(KIND_LERP_LATENT, steps, (z0, z1), tuple(points))


def lerp_linguistic(z, c0, c1, steps: int) -> InterpolationPlan:
    """Linear interpolation between two conditioning pairs at a fixed latent code.

    A single gamma per point blends the word matrices and the sentence vectors
    together; the latent code is attached unchanged to every point.
    """
    z = as_latent(z)
    c0, c1 = _matched_conditionings([c0, c1])
    steps = _checked_steps(steps)
    q = steps - 1
    points = []
    for j in range(steps):
        gamma = j / q
        if j == 0:
            cond = c0
        elif j == q:
            cond = c1
        else:
            cond = ConditioningPair(
                (1.0 - gamma) * c0.words + gamma * c1.words,
                (1.0 - gamma) * c0.sentence + gamma * c1.sentence,
            )
        points.append(PlanPoint(MixParams(gamma, 0.0), z, cond))
    return InterpolationPlan(KIND_LERP_LINGUISTIC, steps, (c0, c1), tuple(points))


def tri_grid(steps: int) -> list[MixParams]:
    """All (gamma1, gamma2) nodes of the triangular grid, as a flat ordered list.

    Node (i, j) maps to (j/(steps-1), i/(steps-1)) for i, j >= 0 with
    i + j <= steps-1: steps*(steps+1)/2 nodes, row-major with i (the gamma2
    index) outermost, so the gamma2 = 0 row is the leading prefix and matches
    the pairwise grid.
    """
    steps = _checked_steps(steps)
    q = steps - 1
    return [MixParams(j / q, i / q) for i in range(steps) for j in range(steps - i)]


def tri_center_index(steps: int) -> int:
    """Index of the grid node nearest the simplex barycenter (1/3, 1/3)."""
    grid = tri_grid(steps)
    third = 1.0 / 3.0
    dists = [(m.gamma1 - third) ** 2 + (m.gamma2 - third) ** 2 for m in grid]
    return int(np.argmin(dists))


def tri_latent(z0, z1, z2, steps: int, conditioning=None) -> InterpolationPlan:
    """Barycentric interpolation over the triangle spanned by three latent codes.

    Each grid node (gamma1, gamma2) yields the blend
    (1-gamma1-gamma2)*z0 + gamma1*z1 + gamma2*z2; the gamma2 = 0 row therefore
    reduces to lerp_latent(z0, z1, steps). Corner nodes return the inputs.
    """
    z0, z1, z2 = _matched_latents([z0, z1, z2])
    steps = _checked_steps(steps)
    cond = as_conditioning(conditioning) if conditioning is not None else None
    q = steps - 1
    points = []
    for i in range(steps):
        gamma2 = i / q
        for j in range(steps - i):
            gamma1 = j / q
            k = q - i - j
            if k == q:
                latent = z0
            elif j == q:
                latent = z1
            elif i == q:
                latent = z2
            else:
                # The z0 weight comes from the integer counters, not
                # 1 - gamma1 - gamma2, so it is a correctly rounded quotient.
                latent = LatentCode(
                    (k / q) * z0.values + gamma1 * z1.values + gamma2 * z2.values
                )
            points.append(PlanPoint(MixParams(gamma1, gamma2), latent, cond))
    return InterpolationPlan(KIND_TRI_LATENT, steps, (z0, z1, z2), tuple(points))


def tri_linguistic(z, c0, c1, c2, steps: int) -> InterpolationPlan:
    """Barycentric interpolation over three conditioning pairs at a fixed latent.

    Words and sentences are blended with the same weights
    (1-gamma1-gamma2, gamma1, gamma2); the gamma2 = 0 row reduces to
    lerp_linguistic(z, c0, c1, steps).
    """
    z = as_latent(z)
    c0, c1, c2 = _matched_conditionings([c0, c1, c2])
    steps = _checked_steps(steps)
    q = steps - 1
    points = []
    for i in range(steps):
        gamma2 = i / q
        for j in range(steps - i):
            gamma1 = j / q
            k = q - i - j
            if k == q:
                cond = c0
            elif j == q:
                cond = c1
            elif i == q:
                cond = c2
            else:
                w0 = k / q
                cond = ConditioningPair(
                    w0 * c0.words + gamma1 * c1.words + gamma2 * c2.words,
                    w0 * c0.sentence + gamma1 * c1.sentence + gamma2 * c2.sentence,
                )
            points.append(PlanPoint(MixParams(gamma1, gamma2), z, cond))
    return InterpolationPlan(KIND_TRI_LINGUISTIC, steps, (c0, c1, c2), tuple(points))
