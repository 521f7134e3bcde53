"""Detection-based frame metrics: IoU, 2D/3D spatial rules, numeracy.

All functions here are pure; the runner feeds them already-deduplicated
detections plus the masks and depth maps it fetched through the gateway.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import NumeracyMeta, SpatialMeta, SpatialRelation
from .errors import DimensionMismatchError, EmptyInputError, EmptyMaskError
from .gateway import BoundingBox, DepthMap, Detection, Mask

_DEPTH_TIE_REL = 1e-9


@dataclass(frozen=True)
class FrameScore:
    frame_index: int
    score: float
    selected_pair: tuple[Detection, Detection] | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"frame score {self.score} outside [0, 1]")


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two axis-aligned boxes; 0 when disjoint."""
    iw = min(a.x1, b.x1) - max(a.x0, b.x0)
    ih = min(a.y1, b.y1) - max(a.y0, b.y0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def eval_2d_relation(c1: tuple[float, float], c2: tuple[float, float],
                     rel: SpatialRelation) -> bool:
    """Strict-dominance 2D rule: e.g. Left holds iff x1 < x2 and the
    horizontal gap exceeds the vertical gap."""
    if not rel.is_2d:
        raise ValueError(f"{rel.value!r} is not a 2D relation")
    x1, y1 = c1
    x2, y2 = c2
    dx = abs(x1 - x2)
    dy = abs(y1 - y2)
    if rel is SpatialRelation.LEFT:
        return x1 < x2 and dx > dy
    if rel is SpatialRelation.RIGHT:
        return x1 > x2 and dx > dy
    if rel is SpatialRelation.ABOVE:
        return y1 < y2 and dy > dx
    return y1 > y2 and dy > dx  # BELOW


def candidate_pairs(dets: Sequence[Detection], object_1: str,
                    object_2: str) -> list[tuple[Detection, Detection]]:
    """All (object_1 det, object_2 det) pairs; when both objects share one
    query, a detection is never paired with itself or an identical box."""
    same = object_1 == object_2
    pairs = []
    for d1 in dets:
        if d1.query != object_1:
            continue
        for d2 in dets:
            if d2.query != object_2:
                continue
            if same and (d1 is d2 or d1.box == d2.box):
                continue
            pairs.append((d1, d2))
    return pairs


def _pair_key(pair: tuple[Detection, Detection]):
    d1, d2 = pair
    return (
        -(d1.confidence * d2.confidence),
        iou(d1.box, d2.box),
        d1.box.as_tuple(),
        d2.box.as_tuple(),
    )


def best_pair(dets: Sequence[Detection], object_1: str,
              object_2: str) -> tuple[Detection, Detection] | None:
    """Most probable pair: max confidence product, ties broken by lower IoU
    then lexicographic box coordinates."""
    pairs = candidate_pairs(dets, object_1, object_2)
    if not pairs:
        return None
    return min(pairs, key=_pair_key)


def frame_spatial_score_2d(dets: Sequence[Detection], meta: SpatialMeta,
                           frame_index: int = 0) -> FrameScore:
    """(1 - IoU) of the best relation-satisfying pair, or 0 when no pair
    satisfies or either object went undetected."""
    if not meta.relation.is_2d:
        raise ValueError(f"{meta.relation.value!r} is not a 2D relation")
    pairs = candidate_pairs(dets, meta.object_1, meta.object_2)
    if not pairs:
        return FrameScore(frame_index, 0.0, note="object missing")
    satisfying = [
        p for p in pairs
        if eval_2d_relation(p[0].box.center, p[1].box.center, meta.relation)
    ]
    if not satisfying:
        return FrameScore(frame_index, 0.0, note="relation unsatisfied")
    chosen = min(satisfying, key=_pair_key)
    return FrameScore(frame_index, 1.0 - iou(chosen[0].box, chosen[1].box),
                      selected_pair=chosen)


def object_depth(mask: Mask, depth: DepthMap) -> float:
    """Mean depth over the mask's set pixels."""
    if mask.bitmap.shape != depth.values.shape:
        raise DimensionMismatchError(
            f"mask {mask.bitmap.shape} vs depth {depth.values.shape}"
        )
    selected = depth.values[mask.bitmap]
    if selected.size == 0:
        raise EmptyMaskError(f"mask for {mask.object_query!r} has no set pixels")
    return float(selected.mean())


def frame_spatial_score_3d(dets: Sequence[Detection], masks: Mapping[str, Mask],
                           depth: DepthMap, meta: SpatialMeta,
                           frame_index: int = 0) -> FrameScore:
    """Binary depth-ordering score for in-front-of / behind.

    The pair is chosen by confidence product (IoU only breaks ties); with
    smaller-is-nearer depth, in-front-of scores 1 iff mean depth of object_1
    is strictly below object_2's. Depth ties score 0.
    """
    if meta.relation.is_2d:
        raise ValueError(f"{meta.relation.value!r} is not a 3D relation")
    pair = best_pair(dets, meta.object_1, meta.object_2)
    if pair is None:
        return FrameScore(frame_index, 0.0, note="object missing")
    mask1 = masks.get(meta.object_1)
    mask2 = masks.get(meta.object_2)
    if mask1 is None or mask2 is None:
        return FrameScore(frame_index, 0.0, note="mask missing", selected_pair=pair)
    d1 = object_depth(mask1, depth)
    d2 = object_depth(mask2, depth)
    if abs(d1 - d2) <= _DEPTH_TIE_REL * max(abs(d1), abs(d2)):
        return FrameScore(frame_index, 0.0, note="depth tie", selected_pair=pair)
    if meta.relation is SpatialRelation.IN_FRONT_OF:
        ok = d1 < d2
    else:  # BEHIND
        ok = d1 > d2
    return FrameScore(frame_index, 1.0 if ok else 0.0, selected_pair=pair)


def frame_numeracy_score(dets: Sequence[Detection], meta: NumeracyMeta,
                         frame_index: int = 0) -> FrameScore:
    """Fraction of object classes whose detected count matches the prompt."""
    counts = {obj: 0 for obj in meta.objects}
    for det in dets:
        if det.query in counts:
            counts[det.query] += 1
    hits = sum(1 for obj, want in zip(meta.objects, meta.numbers) if counts[obj] == want)
    return FrameScore(frame_index, hits / len(meta.objects))


def video_score(frames: Sequence[FrameScore]) -> float:
    """Video-level score: arithmetic mean of per-frame scores."""
    if not frames:
        raise EmptyInputError("video_score needs at least one frame score")
    return float(np.mean([f.score for f in frames]))
