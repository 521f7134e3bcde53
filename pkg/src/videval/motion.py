"""Tracking-based motion-binding metric.

An object's true screen motion is its tracked displacement minus the
background displacement, which cancels camera pans exactly. The relative
vector is classified into left/right/up/down (image coordinates) and
compared against the prompt's direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import Direction, EngineConfig, MotionMeta
from .errors import (
    EmptyInputError,
    NoBackgroundPointsError,
    NoForegroundPointsError,
)
from .frames import VideoAsset
from .gateway import Mask, TrackedPoint, TrackSet


@dataclass(frozen=True)
class MotionVector:
    dx: float
    dy: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dx) and math.isfinite(self.dy)):
            raise ValueError("motion vector components must be finite")


@dataclass(frozen=True)
class MotionVerdict:
    object_query: str
    relative: MotionVector
    direction: Direction | None
    score: float
    note: str = ""


@dataclass(frozen=True)
class MotionBindingResult:
    score: float
    verdicts: tuple[MotionVerdict, ...]
    note: str = ""


def _on_mask(mask: Mask, x: float, y: float) -> bool:
    xi = int(round(x))
    yi = int(round(y))
    h, w = mask.bitmap.shape
    if not (0 <= xi < w and 0 <= yi < h):
        return False
    return bool(mask.bitmap[yi, xi])


def split_tracks(tracks: TrackSet, fg_mask: Mask,
                 all_masks: Sequence[Mask] | None = None
                 ) -> tuple[list[TrackedPoint], list[TrackedPoint]]:
    """Partition points by their first-frame position.

    Foreground: the point starts on a set pixel of ``fg_mask``. Background:
    it starts off every mask in ``all_masks`` (defaults to just ``fg_mask``).
    Points visible in fewer than 2 sampled frames are discarded.
    """
    masks = list(all_masks) if all_masks is not None else [fg_mask]
    fg: list[TrackedPoint] = []
    bg: list[TrackedPoint] = []
    for point in tracks.points:
        if int(point.visible.sum()) < 2:
            continue
        x, y = point.positions[0]
        if _on_mask(fg_mask, x, y):
            fg.append(point)
        elif not any(_on_mask(m, x, y) for m in masks):
            bg.append(point)
    if not fg:
        raise NoForegroundPointsError(f"no points start on the {fg_mask.object_query!r} mask")
    if not bg:
        raise NoBackgroundPointsError("every point starts on an object mask")
    return fg, bg


def mean_displacement(points: Sequence[TrackedPoint]) -> MotionVector:
    """Component-wise mean of per-point (last visible - first visible)."""
    if not points:
        raise EmptyInputError("mean_displacement needs at least one point")
    displacements = []
    for point in points:
        idx = np.flatnonzero(point.visible)
        if idx.size < 2:
            raise ValueError(f"point {point.point_id} is visible in fewer than 2 frames")
        displacements.append(point.positions[idx[-1]] - point.positions[idx[0]])
    mean = np.mean(displacements, axis=0)
    return MotionVector(float(mean[0]), float(mean[1]))


def relative_motion(fg: MotionVector, bg: MotionVector) -> MotionVector:
    """Object motion with the camera contribution removed: fg - bg."""
    return MotionVector(fg.dx - bg.dx, fg.dy - bg.dy)


def classify_direction(v: MotionVector, eps: float,
                       dominance: float = 1.0) -> Direction | None:
    """Dominant-axis direction of v, or None when the vector is too small
    (below eps) or neither axis dominates. Axis ties resolve to x."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if dominance < 1.0:
        raise ValueError("dominance must be >= 1")
    adx = abs(v.dx)
    ady = abs(v.dy)
    if max(adx, ady) < eps:
        return None
    if adx >= dominance * ady:
        return Direction.RIGHT if v.dx > 0 else Direction.LEFT
    if ady >= dominance * adx:
        return Direction.DOWN if v.dy > 0 else Direction.UP
    return None


def motion_binding(video: VideoAsset, tracks: TrackSet,
                   masks: Mapping[str, Mask | None], meta: MotionMeta,
                   cfg: EngineConfig) -> MotionBindingResult:
    """Per-object direction verdicts and their mean.

    ``masks`` maps each metadata object to its first-frame mask (None when
    the object was never detected, which scores 0). A video with no
    background points scores 0 with a diagnostic rather than failing.
    """
    eps = cfg.motion_eps_frac * math.hypot(video.width, video.height)
    targets: list[tuple[str, Direction]] = [(meta.object_1, meta.d_1)]
    if meta.object_2 is not None and meta.d_2 is not None:
        targets.append((meta.object_2, meta.d_2))
    all_masks = [m for m in masks.values() if m is not None]

    verdicts: list[MotionVerdict] = []
    zero = MotionVector(0.0, 0.0)
    for obj, want in targets:
        mask = masks.get(obj)
        if mask is None:
            verdicts.append(MotionVerdict(obj, zero, None, 0.0, note="object not detected"))
            continue
        try:
            fg, bg = split_tracks(tracks, mask, all_masks)
        except NoBackgroundPointsError:
            return MotionBindingResult(
                0.0, tuple(verdicts), note="no background points; camera motion unrecoverable"
            )
        except NoForegroundPointsError:
            verdicts.append(MotionVerdict(obj, zero, None, 0.0, note="no points on mask"))
            continue
        rel = relative_motion(mean_displacement(fg), mean_displacement(bg))
        direction = classify_direction(rel, eps, cfg.dominance_ratio)
        score = 1.0 if direction is want else 0.0
        verdicts.append(MotionVerdict(obj, rel, direction, score))

    total = float(np.mean([v.score for v in verdicts])) if verdicts else 0.0
    return MotionBindingResult(total, tuple(verdicts))


def motion_binding_score(video: VideoAsset, tracks: TrackSet,
                         masks: Mapping[str, Mask | None], meta: MotionMeta,
                         cfg: EngineConfig) -> float:
    return motion_binding(video, tracks, masks, meta, cfg).score
