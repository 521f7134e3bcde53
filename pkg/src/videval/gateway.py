"""Single boundary for perception and judge artifacts.

Two interchangeable adapters sit behind one call surface: FixtureStore
replays canned artifacts from a directory (fully deterministic, used by
the test suite), and HttpSidecar talks JSON-over-HTTP to an inference
service. Every consumer sees depth in the smaller-is-nearer convention;
the gateway normalizes declared inverse-depth at this boundary.

Fixture layout::

    fixtures/<video_id>/detect/<frame>/<query-slug>.json
    fixtures/<video_id>/segment/<frame>/<query-slug>.json
    fixtures/<video_id>/depth/<frame>/depth.json        (or depth.png, 16-bit)
    fixtures/<video_id>/track/all/tracks.json
    fixtures/<video_id>/mllm/<frame or 'all'>/<name>.json
"""
from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import requests
from PIL import Image

from . import wire
from .errors import (
    AdapterUnavailableError,
    EmptyMaskError,
    MissingFixtureError,
    ProtocolError,
)
from .frames import FramePlan, FrameRef, PlanPurpose, VideoAsset

_TASKS = ("detect", "segment", "depth", "track", "mllm")


@dataclass(frozen=True)
class BoundingBox:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self) -> None:
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError(f"degenerate box {self.as_tuple()}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x0, self.y0, self.x1, self.y1)

    def clamped(self, width: float, height: float) -> "BoundingBox":
        x0 = min(max(self.x0, 0.0), width)
        x1 = min(max(self.x1, 0.0), width)
        y0 = min(max(self.y0, 0.0), height)
        y1 = min(max(self.y1, 0.0), height)
        if x0 >= x1 or y0 >= y1:
            raise ValueError(f"box {self.as_tuple()} falls outside a {width}x{height} frame")
        return BoundingBox(x0, y0, x1, y1)


@dataclass(frozen=True)
class Detection:
    query: str
    box: BoundingBox
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True, eq=False)
class Mask:
    frame_index: int
    object_query: str
    bitmap: np.ndarray  # bool (h, w)

    def __post_init__(self) -> None:
        if self.bitmap.ndim != 2:
            raise ValueError("mask bitmap must be 2-D")

    @property
    def pixel_count(self) -> int:
        return int(self.bitmap.sum())


@dataclass(frozen=True, eq=False)
class DepthMap:
    """Per-pixel depth, already normalized so smaller values are nearer."""

    frame_index: int
    values: np.ndarray  # float (h, w)

    def __post_init__(self) -> None:
        if self.values.ndim != 2:
            raise ValueError("depth values must be 2-D")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("depth values must be finite and non-negative")


@dataclass(frozen=True, eq=False)
class TrackedPoint:
    point_id: int
    positions: np.ndarray  # (t, 2)
    visible: np.ndarray    # (t,) bool


@dataclass(frozen=True, eq=False)
class TrackSet:
    fps: float
    points: tuple[TrackedPoint, ...]

    def __post_init__(self) -> None:
        lengths = {p.positions.shape[0] for p in self.points}
        lengths |= {p.visible.shape[0] for p in self.points}
        if len(lengths) > 1:
            raise ValueError("all tracked points must cover the same sampled frames")


@dataclass(frozen=True)
class MllmRequest:
    """A judge call. ``video_id``/``frame_key``/``name`` address the fixture
    store; ``images`` carry pixels for the HTTP adapter (one image per call)."""

    video_id: str
    frame_key: str          # 'all' for grid calls, str(frame_index) otherwise
    name: str               # metric stage, e.g. 'consist-attr', 'endpoint'
    images: tuple
    turns: tuple[str, ...]

    @property
    def request_id(self) -> str:
        return f"{self.video_id}/{self.frame_key}/{self.name}"


@dataclass(frozen=True)
class MllmResponse:
    request_id: str
    text: str                      # final-turn output
    texts: tuple[str, ...] = ()    # every turn, for transcripts


def slug(text: str) -> str:
    """Filesystem-safe fixture key for a noun-phrase query."""
    out = re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_")
    return out or "_"


def _box_iou(a: BoundingBox, b: BoundingBox) -> float:
    iw = min(a.x1, b.x1) - max(a.x0, b.x0)
    ih = min(a.y1, b.y1) - max(a.y0, b.y0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def dedup_boxes(dets: Sequence[Detection], iou_thresh: float) -> list[Detection]:
    """Greedy same-query suppression by descending confidence.

    A detection is dropped iff it overlaps an already-kept detection of the
    same query with IoU >= iou_thresh. Output is sorted by descending
    confidence (ties broken by query then box coordinates, for determinism).
    """
    if not 0.0 < iou_thresh <= 1.0:
        raise ValueError(f"iou_thresh must lie in (0, 1], got {iou_thresh}")
    ordered = sorted(dets, key=lambda d: (-d.confidence, d.query, d.box.as_tuple()))
    kept: list[Detection] = []
    for det in ordered:
        duplicate = any(
            k.query == det.query and _box_iou(k.box, det.box) >= iou_thresh for k in kept
        )
        if not duplicate:
            kept.append(det)
    return kept


def _check_turns(turns: Sequence[str], max_turns: int) -> None:
    if not 1 <= len(turns) <= 2:
        raise ValueError(f"judge calls take 1 or 2 turns, got {len(turns)}")
    if len(turns) > max_turns:
        raise ProtocolError(f"adapter supports at most {max_turns} turns, got {len(turns)}")


def _normalize_depth(values: np.ndarray, convention: str) -> np.ndarray:
    # Inverse-depth models emit larger values for nearer pixels; flip so the
    # engine-wide smaller-is-nearer contract holds while preserving order.
    if convention == "inverse":
        return values.max() - values
    return values


def _detections_from_payload(payload: dict, queries: Sequence[str],
                             box_threshold: float) -> list[Detection]:
    allowed = set(queries)
    out = []
    for query, box, conf in wire.parse_detections(payload):
        if query not in allowed:
            raise ProtocolError(f"detection query {query!r} was never requested")
        if conf >= box_threshold:
            out.append(Detection(query, BoundingBox(*box), conf))
    return out


class FixtureStore:
    """Read-only directory of canned artifacts; safe for concurrent use."""

    def __init__(self, root: str | Path, max_turns: int = 2):
        self.root = Path(root)
        self.max_turns = max_turns
        if not self.root.is_dir():
            raise AdapterUnavailableError(f"fixture root {self.root} is not a directory")

    def _load(self, video_id: str, task: str, frame_key: str, name: str) -> dict:
        path = self.root / video_id / task / frame_key / f"{name}.json"
        if not path.exists():
            raise MissingFixtureError(f"no fixture at {path.relative_to(self.root)}")
        try:
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"fixture {path} is not valid JSON: {exc}") from None

    def detect(self, frame: FrameRef, queries: Sequence[str],
               box_threshold: float) -> list[Detection]:
        if not queries:
            raise ValueError("detect needs at least one query")
        dets: list[Detection] = []
        for query in queries:
            payload = self._load(frame.video_id, "detect", str(frame.frame_index), slug(query))
            dets.extend(_detections_from_payload(payload, [query], box_threshold))
        return dets

    def segment(self, frame: FrameRef, det: Detection) -> Mask:
        det.box.clamped(frame.width, frame.height)  # precondition: box inside frame
        payload = self._load(frame.video_id, "segment", str(frame.frame_index), slug(det.query))
        bitmap = wire.parse_mask(payload)
        if bitmap.shape != (frame.height, frame.width):
            raise ProtocolError(
                f"mask is {bitmap.shape[1]}x{bitmap.shape[0]}, frame is "
                f"{frame.width}x{frame.height}"
            )
        if not bitmap.any():
            raise EmptyMaskError(f"empty mask for {det.query!r} on frame {frame.frame_index}")
        return Mask(frame.frame_index, det.query, bitmap)

    def estimate_depth(self, frame: FrameRef) -> DepthMap:
        png = self.root / frame.video_id / "depth" / str(frame.frame_index) / "depth.png"
        if png.exists():
            with Image.open(png) as img:
                values = np.asarray(img, dtype=np.float64)
            convention = "smaller_nearer"
        else:
            payload = self._load(frame.video_id, "depth", str(frame.frame_index), "depth")
            values, convention = wire.parse_depth(payload)
        if values.shape != (frame.height, frame.width):
            raise ProtocolError(
                f"depth map is {values.shape[1]}x{values.shape[0]}, frame is "
                f"{frame.width}x{frame.height}"
            )
        return DepthMap(frame.frame_index, _normalize_depth(values, convention))

    def track(self, video: VideoAsset, plan: FramePlan) -> TrackSet:
        if plan.purpose is not PlanPurpose.TRACKING:
            raise ValueError("track needs a tracking plan")
        if plan.indices[-1] >= video.frame_count:
            raise ValueError("tracking plan indexes past the end of the video")
        payload = self._load(video.video_id, "track", "all", "tracks")
        points = wire.parse_tracks(payload, expected_len=len(plan.indices))
        return TrackSet(
            fps=plan.fps or video.src_fps,
            points=tuple(
                TrackedPoint(i, pos, vis) for i, (pos, vis) in enumerate(points)
            ),
        )

    def query_mllm(self, request: MllmRequest) -> MllmResponse:
        _check_turns(request.turns, self.max_turns)
        if len(request.images) != 1:
            raise ValueError("judge calls take exactly one image")
        payload = self._load(request.video_id, "mllm", request.frame_key, request.name)
        texts = wire.parse_mllm_texts(payload, len(request.turns))
        return MllmResponse(request.request_id, texts[-1], tuple(texts))


class HttpSidecar:
    """JSON-over-HTTP adapter for a perception/judge sidecar service.

    Requests within one task type are serialized so concurrent callers never
    interleave; different tasks may proceed in parallel.
    """

    def __init__(self, base_url: str, timeout: float = 120.0, grid_stride: int = 8,
                 max_turns: int = 2, session: requests.Session | None = None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.grid_stride = grid_stride
        self.max_turns = max_turns
        self._session = session or requests.Session()
        self._locks = {task: threading.Lock() for task in _TASKS}

    def _post(self, task: str, payload: dict) -> dict:
        url = f"{self.base_url}/{task}"
        try:
            with self._locks[task]:
                resp = self._session.post(url, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise AdapterUnavailableError(f"sidecar unreachable at {url}: {exc}") from None
        if resp.status_code >= 500:
            raise AdapterUnavailableError(f"sidecar error {resp.status_code} from {url}")
        if resp.status_code >= 400:
            raise ProtocolError(f"sidecar rejected request to {url}: {resp.text[:200]}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ProtocolError(f"non-JSON response from {url}: {exc}") from None

    def health(self) -> dict:
        url = f"{self.base_url}/health"
        try:
            resp = self._session.get(url, timeout=self.timeout)
        except requests.RequestException as exc:
            raise AdapterUnavailableError(f"sidecar unreachable at {url}: {exc}") from None
        if resp.status_code != 200:
            raise AdapterUnavailableError(f"sidecar health check failed: {resp.status_code}")
        return resp.json()

    @staticmethod
    def _image_b64(image) -> str:
        pixels = image.pixels() if isinstance(image, FrameRef) else np.asarray(image)
        return wire.encode_image_b64(pixels)

    def detect(self, frame: FrameRef, queries: Sequence[str],
               box_threshold: float) -> list[Detection]:
        if not queries:
            raise ValueError("detect needs at least one query")
        payload = self._post("detect", {
            "image_b64": self._image_b64(frame),
            "queries": list(queries),
            "box_threshold": box_threshold,
        })
        return _detections_from_payload(payload, queries, box_threshold)

    def segment(self, frame: FrameRef, det: Detection) -> Mask:
        box = det.box.clamped(frame.width, frame.height)
        payload = self._post("segment", {
            "image_b64": self._image_b64(frame),
            "box": list(box.as_tuple()),
        })
        bitmap = wire.parse_mask(payload)
        if bitmap.shape != (frame.height, frame.width):
            raise ProtocolError("segment mask does not match the frame size")
        if not bitmap.any():
            raise EmptyMaskError(f"empty mask for {det.query!r} on frame {frame.frame_index}")
        return Mask(frame.frame_index, det.query, bitmap)

    def estimate_depth(self, frame: FrameRef) -> DepthMap:
        payload = self._post("depth", {"image_b64": self._image_b64(frame)})
        values, convention = wire.parse_depth(payload)
        if values.shape != (frame.height, frame.width):
            raise ProtocolError("depth map does not match the frame size")
        return DepthMap(frame.frame_index, _normalize_depth(values, convention))

    def track(self, video: VideoAsset, plan: FramePlan) -> TrackSet:
        if plan.purpose is not PlanPurpose.TRACKING:
            raise ValueError("track needs a tracking plan")
        frames = [wire.encode_image_b64(video.frame(i)) for i in plan.indices]
        payload = self._post("track", {
            "frames_b64": frames,
            "fps": plan.fps,
            "grid_stride": self.grid_stride,
        })
        points = wire.parse_tracks(payload, expected_len=len(plan.indices))
        return TrackSet(
            fps=plan.fps or video.src_fps,
            points=tuple(
                TrackedPoint(i, pos, vis) for i, (pos, vis) in enumerate(points)
            ),
        )

    def query_mllm(self, request: MllmRequest) -> MllmResponse:
        _check_turns(request.turns, self.max_turns)
        if len(request.images) != 1:
            raise ValueError("judge calls take exactly one image")
        payload = self._post("mllm", {
            "images_b64": [self._image_b64(img) for img in request.images],
            "turns": list(request.turns),
        })
        texts = wire.parse_mllm_texts(payload, len(request.turns))
        return MllmResponse(request.request_id, texts[-1], tuple(texts))
