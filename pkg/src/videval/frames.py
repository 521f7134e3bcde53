"""Frame sampling plans and the 2x3 image-grid composition.

Three plans feed the three metric families: a 6-frame grid for the video
judge, 16 evenly spaced frames for detection, and an 8-FPS resampled
sequence for point tracking. The engine performs no codec work; videos
arrive as directories of numbered frame images plus a descriptor, or as
pre-decoded arrays.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image

from .errors import DimensionMismatchError, SchemaError

DESCRIPTOR_NAME = "video.json"


class PlanPurpose(Enum):
    MLLM_GRID = "mllm_grid"
    DETECTION = "detection"
    TRACKING = "tracking"


@dataclass(frozen=True)
class FramePlan:
    indices: tuple[int, ...]
    purpose: PlanPurpose
    fps: float | None = None  # sampled rate; set for tracking plans

    def __post_init__(self) -> None:
        if not self.indices:
            raise ValueError("FramePlan needs at least one index")
        if any(b < a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("FramePlan indices must be non-decreasing")
        if self.indices[0] < 0:
            raise ValueError("FramePlan indices must be non-negative")


@dataclass(frozen=True)
class FrameRef:
    """Reference to one frame. Pixel data is loaded lazily so that
    fixture-backed runs never need to decode images."""

    video_id: str
    frame_index: int
    width: int
    height: int
    source: object = None  # ndarray, path, or None

    def pixels(self) -> np.ndarray:
        if isinstance(self.source, np.ndarray):
            return self.source
        if isinstance(self.source, (str, Path)):
            return _load_image(Path(self.source), self.width, self.height)
        raise ValueError(f"frame {self.frame_index} of {self.video_id} has no pixel source")


def _load_image(path: Path, width: int, height: int) -> np.ndarray:
    with Image.open(path) as img:
        arr = np.asarray(img)
    if arr.shape[1] != width or arr.shape[0] != height:
        raise DimensionMismatchError(
            f"{path.name} is {arr.shape[1]}x{arr.shape[0]}, descriptor says {width}x{height}"
        )
    return arr


class VideoAsset:
    """An ordered stack of same-sized frames with identity and frame rate."""

    def __init__(self, video_id: str, src_fps: float, width: int, height: int,
                 frames: Sequence[object]):
        if not video_id:
            raise ValueError("video_id must be non-empty")
        if src_fps <= 0:
            raise ValueError("src_fps must be positive")
        if not frames:
            raise ValueError("a video needs at least one frame")
        if width <= 0 or height <= 0:
            raise ValueError("frame dimensions must be positive")
        self.video_id = video_id
        self.src_fps = float(src_fps)
        self.width = int(width)
        self.height = int(height)
        self._frames = list(frames)

    @property
    def frame_count(self) -> int:
        return len(self._frames)

    @property
    def frames(self) -> tuple:
        return tuple(self._frames)

    def frame_ref(self, index: int) -> FrameRef:
        if not 0 <= index < self.frame_count:
            raise IndexError(f"frame index {index} out of range 0..{self.frame_count - 1}")
        return FrameRef(self.video_id, index, self.width, self.height, self._frames[index])

    def frame(self, index: int) -> np.ndarray:
        return self.frame_ref(index).pixels()

    @classmethod
    def from_arrays(cls, video_id: str, src_fps: float, frames: Sequence[np.ndarray]) -> "VideoAsset":
        if not frames:
            raise ValueError("a video needs at least one frame")
        h, w = frames[0].shape[:2]
        for arr in frames:
            if arr.shape[:2] != (h, w):
                raise DimensionMismatchError("all frames must share one size")
        return cls(video_id, src_fps, w, h, list(frames))

    @classmethod
    def from_frame_dir(cls, path: str | Path) -> "VideoAsset":
        """Read ``video.json`` plus the numbered ``frame_*.png`` files."""
        path = Path(path)
        descriptor = path / DESCRIPTOR_NAME
        if not descriptor.exists():
            raise SchemaError(f"missing {DESCRIPTOR_NAME} in {path}")
        with open(descriptor, encoding="utf-8") as fh:
            obj = json.load(fh)
        try:
            video_id = str(obj["video_id"])
            fps = float(obj["fps"])
            width = int(obj["width"])
            height = int(obj["height"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad video descriptor {descriptor}: {exc}") from None
        frame_files = sorted(path.glob("frame_*.png"))
        if not frame_files:
            raise SchemaError(f"no frame_*.png files in {path}")
        return cls(video_id, fps, width, height, frame_files)


def uniform_indices(n_total: int, k: int) -> list[int]:
    """k indices evenly spread over [0, n_total), endpoints included.

    index_i = floor(i * (n_total - 1) / (k - 1)); duplicates appear when the
    video is shorter than k frames, which keeps every clip scoreable.
    """
    if n_total < 1 or k < 1:
        raise ValueError("n_total and k must be >= 1")
    if k == 1:
        return [0]
    return [i * (n_total - 1) // (k - 1) for i in range(k)]


def resample_to_fps(src_fps: float, n_total: int, target_fps: float) -> FramePlan:
    """Tracking plan at target_fps: index_j = round(j * src_fps / target_fps)
    with half-up rounding, stopping at n_total, consecutive duplicates collapsed."""
    if src_fps <= 0 or target_fps <= 0:
        raise ValueError("frame rates must be positive")
    if n_total < 1:
        raise ValueError("n_total must be >= 1")
    step = src_fps / target_fps
    indices: list[int] = []
    j = 0
    while True:
        idx = math.floor(j * step + 0.5)
        if idx >= n_total:
            break
        if not indices or indices[-1] != idx:
            indices.append(idx)
        j += 1
    if not indices:
        indices = [0]
    return FramePlan(tuple(indices), PlanPurpose.TRACKING, fps=float(target_fps))


def compose_grid(frames: Sequence[np.ndarray]) -> np.ndarray:
    """Mosaic exactly 6 frames into a 2-row x 3-column row-major grid.

    Six w x h frames become one 3w x 2h image; cell pixels are copied
    unmodified, so extracting a cell recovers the source frame bit-exactly.
    """
    if len(frames) != 6:
        raise ValueError(f"grid composition needs exactly 6 frames, got {len(frames)}")
    shape = frames[0].shape
    for arr in frames:
        if arr.shape != shape:
            raise DimensionMismatchError(
                f"grid frames must share dimensions, got {arr.shape} vs {shape}"
            )
    top = np.hstack(frames[:3])
    bottom = np.hstack(frames[3:])
    return np.vstack([top, bottom])
