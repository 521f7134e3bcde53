"""Deterministic stub responses for every task.

Each response is a pure function of the request: jitters and velocities
come from a stable hash of the canonical request JSON, so identical
requests always serialize to identical bytes. Rubric answers are chosen
from the request's own turn text so they stay inside the rubric's range.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .codecs import decode_image_b64, encode_f32_b64, rle_encode

STUB_CONFIDENCE = 0.9


def request_hash(payload: dict) -> int:
    canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return int.from_bytes(hashlib.sha256(canonical.encode("utf-8")).digest()[:8], "big")


def _span(seed: int, lo: int, hi: int) -> int:
    return lo + seed % (hi - lo + 1)


def stub_detect(payload: dict) -> dict:
    image = decode_image_b64(payload["image_b64"])
    height, width = image.shape[:2]
    threshold = float(payload.get("box_threshold", 0.0))
    base = request_hash(payload)
    detections = []
    if STUB_CONFIDENCE >= threshold:
        for query in payload["queries"]:
            seed = base ^ request_hash({"query": query})
            jx = _span(seed, -5, 5)
            jy = _span(seed >> 8, -5, 5)
            half_w = max(2, width // 4)
            half_h = max(2, height // 4)
            cx = width / 2 + jx
            cy = height / 2 + jy
            x0 = max(0.0, cx - half_w)
            y0 = max(0.0, cy - half_h)
            x1 = min(float(width), cx + half_w)
            y1 = min(float(height), cy + half_h)
            detections.append({
                "query": query,
                "box": [x0, y0, x1, y1],
                "confidence": STUB_CONFIDENCE,
            })
    return {"detections": detections}


def stub_segment(payload: dict) -> dict:
    image = decode_image_b64(payload["image_b64"])
    height, width = image.shape[:2]
    x0, y0, x1, y1 = payload["box"]
    xi0 = max(0, min(width - 1, int(round(x0))))
    yi0 = max(0, min(height - 1, int(round(y0))))
    xi1 = max(xi0 + 1, min(width, int(round(x1))))
    yi1 = max(yi0 + 1, min(height, int(round(y1))))
    bitmap = np.zeros((height, width), dtype=bool)
    bitmap[yi0:yi1, xi0:xi1] = True  # mask is the request box interior
    return {"rle": rle_encode(bitmap), "width": width, "height": height}


def stub_depth(payload: dict) -> dict:
    image = decode_image_b64(payload["image_b64"])
    height, width = image.shape[:2]
    seed = request_hash(payload)
    scale = 1.0 + (seed % 7) / 10.0
    rows = np.linspace(0.0, 1.0, height, dtype=np.float32)
    values = np.tile(rows[:, None] * scale, (1, width))
    # declared inverse so the consumer normalizes at its boundary
    return {
        "values_b64": encode_f32_b64(values),
        "width": width,
        "height": height,
        "convention": "inverse",
    }


def stub_track(payload: dict) -> dict:
    frames = payload["frames_b64"]
    first = decode_image_b64(frames[0])
    height, width = first.shape[:2]
    stride = int(payload.get("grid_stride", 8))
    n_frames = len(frames)
    seed = request_hash(payload)
    vx = ((seed % 9) - 4) / 2.0
    vy = (((seed >> 4) % 9) - 4) / 2.0
    points = []
    for y in range(stride // 2, height, stride):
        for x in range(stride // 2, width, stride):
            wobble = ((x * 31 + y * 17 + seed) % 5 - 2) / 10.0
            positions = [[float(x + (vx + wobble) * j), float(y + vy * j)]
                         for j in range(n_frames)]
            points.append({"positions": positions, "visible": [True] * n_frames})
    return {"points": points}


_OPTION_ANSWER = '{"option": "A1, A2", "explanation": "stub"}'


def _answer_for_turn(turn: str) -> str:
    if "option" in turn and "A1" in turn:
        return _OPTION_ANSWER
    if "score from 0 to 2" in turn:
        return '{"score": 1, "explanation": "stub"}'
    return '{"score": 3, "explanation": "stub"}'


def stub_mllm(payload: dict) -> dict:
    turns = payload["turns"]
    texts = ["stub description of the provided image."] * (len(turns) - 1)
    texts.append(_answer_for_turn(turns[-1]))
    return {"texts": texts}


STUB_HANDLERS = {
    "detect": stub_detect,
    "segment": stub_segment,
    "depth": stub_depth,
    "track": stub_track,
    "mllm": stub_mllm,
}


def stub_response(task: str, payload: dict) -> dict:
    return STUB_HANDLERS[task](payload)
