"""Wire codecs used by the sidecar responses."""
from __future__ import annotations

import base64
import io

import numpy as np
from PIL import Image


def decode_image_b64(data: str) -> np.ndarray:
    raw = base64.b64decode(data, validate=True)
    with Image.open(io.BytesIO(raw)) as img:
        return np.asarray(img)


def encode_f32_b64(values: np.ndarray) -> str:
    return base64.b64encode(np.asarray(values, dtype="<f4").tobytes()).decode("ascii")


def rle_encode(bitmap: np.ndarray) -> list[int]:
    """Row-major run lengths, alternating runs starting with zeros."""
    flat = np.asarray(bitmap, dtype=bool).ravel()
    if flat.size == 0:
        return []
    changes = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    boundaries = np.concatenate(([0], changes, [flat.size]))
    counts = np.diff(boundaries).tolist()
    if flat[0]:
        counts.insert(0, 0)
    return [int(c) for c in counts]
