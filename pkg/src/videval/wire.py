"""Wire-format codecs and payload validation shared by both gateway adapters.

The same checks guard fixture files and HTTP sidecar responses, so a
schema violation surfaces as ProtocolError no matter where the bytes
came from. Masks travel as row-major run-length counts alternating
zero-run first; depth values travel as row-major float32 (raw list or
base64) with a declared convention.
"""
from __future__ import annotations

import base64
import io
import math

import numpy as np
from PIL import Image

from .errors import ProtocolError

DEPTH_CONVENTIONS = ("smaller_nearer", "inverse")


# ---------------------------------------------------------------------------
# codecs

def rle_encode(bitmap: np.ndarray) -> list[int]:
    """Row-major RLE of a binary mask; runs alternate starting with zeros."""
    flat = np.asarray(bitmap, dtype=bool).ravel()
    if flat.size == 0:
        return []
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    boundaries = np.concatenate(([0], changes, [flat.size]))
    counts = np.diff(boundaries).tolist()
    if flat[0]:
        counts.insert(0, 0)  # counts always start with a zero-run
    return [int(c) for c in counts]


def rle_decode(counts: list[int], width: int, height: int) -> np.ndarray:
    if width <= 0 or height <= 0:
        raise ProtocolError(f"mask dimensions must be positive, got {width}x{height}")
    if any((not isinstance(c, int)) or c < 0 for c in counts):
        raise ProtocolError("RLE counts must be non-negative integers")
    total = sum(counts)
    if total != width * height:
        raise ProtocolError(f"RLE counts sum to {total}, expected {width * height}")
    flat = np.zeros(total, dtype=bool)
    pos = 0
    value = False
    for count in counts:
        if value:
            flat[pos:pos + count] = True
        pos += count
        value = not value
    return flat.reshape(height, width)


def encode_image_b64(pixels: np.ndarray) -> str:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(pixels)).save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def decode_image_b64(data: str) -> np.ndarray:
    try:
        raw = base64.b64decode(data, validate=True)
        with Image.open(io.BytesIO(raw)) as img:
            return np.asarray(img)
    except Exception as exc:
        raise ProtocolError(f"undecodable image payload: {exc}") from None


def encode_f32_b64(values: np.ndarray) -> str:
    return base64.b64encode(np.asarray(values, dtype="<f4").tobytes()).decode("ascii")


def decode_f32_b64(data: str, width: int, height: int) -> np.ndarray:
    try:
        raw = base64.b64decode(data, validate=True)
    except Exception as exc:
        raise ProtocolError(f"bad base64 in depth payload: {exc}") from None
    values = np.frombuffer(raw, dtype="<f4")
    if values.size != width * height:
        raise ProtocolError(f"depth payload has {values.size} values, expected {width * height}")
    return values.reshape(height, width).astype(np.float64)


# ---------------------------------------------------------------------------
# payload validation

def parse_detections(payload: dict) -> list[tuple[str, tuple[float, float, float, float], float]]:
    """Validate a /detect-shaped payload; return (query, box, confidence) triples."""
    if not isinstance(payload, dict) or not isinstance(payload.get("detections"), list):
        raise ProtocolError("detection payload must contain a detections list")
    out = []
    for i, det in enumerate(payload["detections"]):
        if not isinstance(det, dict):
            raise ProtocolError(f"detection {i} is not an object")
        query = det.get("query")
        box = det.get("box")
        conf = det.get("confidence")
        if not isinstance(query, str) or not query:
            raise ProtocolError(f"detection {i} has no query string")
        if (not isinstance(box, (list, tuple))) or len(box) != 4:
            raise ProtocolError(f"detection {i} box must be [x0, y0, x1, y1]")
        try:
            x0, y0, x1, y1 = (float(v) for v in box)
        except (TypeError, ValueError):
            raise ProtocolError(f"detection {i} box has non-numeric entries") from None
        if not all(math.isfinite(v) for v in (x0, y0, x1, y1)):
            raise ProtocolError(f"detection {i} box has non-finite entries")
        if x0 >= x1 or y0 >= y1:
            raise ProtocolError(f"detection {i} box is degenerate: {box}")
        if not isinstance(conf, (int, float)) or not 0.0 <= float(conf) <= 1.0:
            raise ProtocolError(f"detection {i} confidence must lie in [0, 1]")
        out.append((query, (x0, y0, x1, y1), float(conf)))
    return out


def parse_mask(payload: dict) -> np.ndarray:
    if not isinstance(payload, dict):
        raise ProtocolError("segment payload must be an object")
    for key in ("rle", "width", "height"):
        if key not in payload:
            raise ProtocolError(f"segment payload is missing {key!r}")
    if not isinstance(payload["rle"], list):
        raise ProtocolError("segment rle must be a list of counts")
    return rle_decode(payload["rle"], int(payload["width"]), int(payload["height"]))


def parse_depth(payload: dict) -> tuple[np.ndarray, str]:
    """Return (values, convention); values row-major floats, not yet normalized."""
    if not isinstance(payload, dict):
        raise ProtocolError("depth payload must be an object")
    try:
        width = int(payload["width"])
        height = int(payload["height"])
    except (KeyError, TypeError, ValueError):
        raise ProtocolError("depth payload needs integer width and height") from None
    convention = payload.get("convention", "smaller_nearer")
    if convention not in DEPTH_CONVENTIONS:
        raise ProtocolError(f"unknown depth convention {convention!r}")
    if "values_b64" in payload:
        values = decode_f32_b64(payload["values_b64"], width, height)
    elif "values" in payload:
        values = np.asarray(payload["values"], dtype=np.float64)
        if values.size != width * height:
            raise ProtocolError(f"depth values have size {values.size}, expected {width * height}")
        values = values.reshape(height, width)
    else:
        raise ProtocolError("depth payload needs values or values_b64")
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ProtocolError("depth values must be finite and non-negative")
    return values, convention


def parse_tracks(payload: dict, expected_len: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Return per-point (positions (t, 2), visible (t,)) arrays."""
    if not isinstance(payload, dict) or not isinstance(payload.get("points"), list):
        raise ProtocolError("track payload must contain a points list")
    out = []
    for i, point in enumerate(payload["points"]):
        if not isinstance(point, dict):
            raise ProtocolError(f"track point {i} is not an object")
        positions = point.get("positions")
        visible = point.get("visible")
        if positions is None:
            raise ProtocolError(f"track point {i} is missing positions")
        if visible is None:
            raise ProtocolError(f"track point {i} is missing visibility flags")
        pos = np.asarray(positions, dtype=np.float64)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] != expected_len:
            raise ProtocolError(
                f"track point {i} positions must be {expected_len}x2, got shape {pos.shape}"
            )
        if not np.all(np.isfinite(pos)):
            raise ProtocolError(f"track point {i} has non-finite positions")
        vis = np.asarray(visible, dtype=bool)
        if vis.shape != (expected_len,):
            raise ProtocolError(f"track point {i} visibility must have length {expected_len}")
        out.append((pos, vis))
    return out


def parse_mllm_texts(payload: dict, n_turns: int) -> list[str]:
    if not isinstance(payload, dict) or not isinstance(payload.get("texts"), list):
        raise ProtocolError("mllm payload must contain a texts list")
    texts = payload["texts"]
    if len(texts) != n_turns:
        raise ProtocolError(f"mllm payload has {len(texts)} texts for {n_turns} turns")
    if any(not isinstance(t, str) for t in texts):
        raise ProtocolError("mllm texts must be strings")
    if not texts[-1].strip():
        raise ProtocolError("mllm final-turn text is empty")
    return list(texts)
