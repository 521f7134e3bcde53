"""Deterministic synthetic assets: a 14-prompt miniature suite with videos,
a complete fixture store, and matching human ratings.

Everything here is pure arithmetic over fixed constants, so repeated calls
produce byte-identical files. The mini suite exercises every category and
every gateway task without any model or network.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from . import wire
from .gateway import slug

WIDTH = 256
HEIGHT = 256
FRAME_COUNT = 16
FPS = 8.0
MODEL_ID = "demo-model"

#: (prompt_id, human rating) per prompt; ratings track the fixture scores.
HUMAN_RATINGS = {
    "consist-attr-0000": 5,
    "consist-attr-0001": 3,
    "dynamic-attr-0000": 5,
    "dynamic-attr-0001": 1,
    "spatial-0000": 5,
    "spatial-0001": 4,
    "motion-0000": 5,
    "motion-0001": 3,
    "action-0000": 4,
    "action-0001": 2,
    "interaction-0000": 5,
    "interaction-0001": 3,
    "numeracy-0000": 5,
    "numeracy-0001": 3,
}

_SUITE_LINES = {
    "consist-attr": [
        {"prompt": "A blue car drives past a white picket fence on a sunny day",
         "phrases": "a blue car; a white picket fence"},
        {"prompt": "Yellow rubber duck floating next to a blue bath towel",
         "phrases": "yellow rubber duck; a blue bath towel"},
    ],
    "dynamic-attr": [
        {"prompt": "A timelapse of a leaf transitioning from green to bright red as autumn progresses",
         "state 0": "A green leaf", "state 1": "A bright red leaf"},
        {"prompt": "A silver coin tarnishing from shiny to dull",
         "state 0": "A shiny silver coin", "state 1": "A dull silver coin"},
    ],
    "spatial": [
        {"prompt": "A toddler walking on the left of a dog in a park",
         "spatial": "left", "object_1": "toddler", "object_2": "dog"},
        {"prompt": "A cat sitting in front of a sofa in a living room",
         "spatial": "in front of", "object_1": "cat", "object_2": "sofa"},
    ],
    "motion": [
        {"prompt": "A paper airplane gliding to the left across a classroom",
         "object_1": "paper airplane", "d_1": "left", "object_2": "", "d_2": ""},
        {"prompt": "A ball rolls left while a puppy dashes right",
         "object_1": "ball", "d_1": "left", "object_2": "puppy", "d_2": "right"},
    ],
    "action": [
        {"prompt": "A dog runs through a field while a cat climbs a tree",
         "phrase_0": ["a dog?", "a dog runs through a field?"],
         "phrase_1": ["a cat?", "a cat climbs a tree?"]},
        {"prompt": "A panda eats bamboo while a monkey swings from branch to branch",
         "phrase_0": ["a panda?", "a panda eats bamboo?"],
         "phrase_1": ["a monkey?", "a monkey swings from branch to branch?"]},
    ],
    "interaction": [
        {"prompt": "Two cars collide at an intersection"},
        {"prompt": "Girl reads bedtime story to her stuffed bear"},
    ],
    "numeracy": [
        {"prompt": "three bees and five butterflies fly around a blooming garden",
         "objects": "bee,butterfly", "numbers": "3,5"},
        {"prompt": "two cats and three dogs playing in a yard",
         "objects": "cat,dog", "numbers": "2,3"},
    ],
}


@dataclass(frozen=True)
class MiniAssets:
    root: Path
    suite_dir: Path
    videos_dir: Path
    fixtures_dir: Path
    human_csv: Path
    model_id: str


def _write_json(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False)
        fh.write("\n")


def _write_video(video_dir: Path, video_id: str, seed: int) -> None:
    video_dir.mkdir(parents=True, exist_ok=True)
    _write_json(video_dir / "video.json", {
        "video_id": video_id, "fps": FPS, "width": WIDTH, "height": HEIGHT,
    })
    for i in range(FRAME_COUNT):
        frame = np.zeros((HEIGHT, WIDTH, 3), dtype=np.uint8)
        frame[:, :, 0] = (37 * seed + 5 * i) % 256
        frame[:, :, 1] = (91 + 11 * i) % 256
        frame[:, :, 2] = (17 * seed) % 256
        Image.fromarray(frame).save(video_dir / f"frame_{i:05d}.png")


def _rect_mask(x0: int, y0: int, x1: int, y1: int) -> np.ndarray:
    bitmap = np.zeros((HEIGHT, WIDTH), dtype=bool)
    bitmap[y0:y1, x0:x1] = True
    return bitmap


def _detect_fixture(fixtures: Path, video_id: str, frame: int, query: str,
                    boxes: list[tuple[tuple[float, float, float, float], float]]) -> None:
    payload = {"detections": [
        {"query": query, "box": list(box), "confidence": conf} for box, conf in boxes
    ]}
    _write_json(fixtures / video_id / "detect" / str(frame) / f"{slug(query)}.json", payload)


def _segment_fixture(fixtures: Path, video_id: str, frame: int, query: str,
                     bitmap: np.ndarray) -> None:
    payload = {"rle": wire.rle_encode(bitmap), "width": WIDTH, "height": HEIGHT}
    _write_json(fixtures / video_id / "segment" / str(frame) / f"{slug(query)}.json", payload)


def _depth_fixture(fixtures: Path, video_id: str, frame: int, values: np.ndarray) -> None:
    payload = {
        "values_b64": wire.encode_f32_b64(values),
        "width": WIDTH, "height": HEIGHT,
        "convention": "smaller_nearer",
    }
    _write_json(fixtures / video_id / "depth" / str(frame) / "depth.json", payload)


def _mllm_fixture(fixtures: Path, video_id: str, frame_key: str, name: str,
                  texts: list[str]) -> None:
    _write_json(fixtures / video_id / "mllm" / frame_key / f"{name}.json", {"texts": texts})


def _track_fixture(fixtures: Path, video_id: str,
                   points: list[list[tuple[float, float]]]) -> None:
    payload = {"fps": FPS, "points": [
        {"positions": [[float(x), float(y)] for x, y in positions],
         "visible": [True] * FRAME_COUNT}
        for positions in points
    ]}
    _write_json(fixtures / video_id / "track" / "all" / "tracks.json", payload)


def _drift(seed: tuple[float, float], step: tuple[float, float]
           ) -> list[tuple[float, float]]:
    x0, y0 = seed
    sx, sy = step
    return [(x0 + sx * j, y0 + sy * j) for j in range(FRAME_COUNT)]


_DESCRIBE_TEXT = "The frames show the described scene developing over time."


def _build_fixtures(fixtures: Path) -> None:
    # consist-attr: option pairs (A, A) -> 1.0 and (A, D) -> 0.5
    _mllm_fixture(fixtures, "consist-attr-0000", "all", "consist-attr",
                  [_DESCRIBE_TEXT, '{"option": "A1, A2", "explanation": "both phrases shown"}'])
    _mllm_fixture(fixtures, "consist-attr-0001", "all", "consist-attr",
                  [_DESCRIBE_TEXT, '{"option": "A1, D2", "explanation": "towel absent"}'])

    # dynamic-attr: endpoints (5,5) with a clean 2->1 step -> 1.0;
    # endpoints (1,1) with the step reversed -> 1/6
    for vid, endpoint_score, head, tail in (
        ("dynamic-attr-0000", 5, 2, 1),
        ("dynamic-attr-0001", 1, 1, 2),
    ):
        for frame in (0, FRAME_COUNT - 1):
            _mllm_fixture(fixtures, vid, str(frame), "endpoint", [
                _DESCRIBE_TEXT,
                json.dumps({"score": endpoint_score, "explanation": "endpoint"}),
            ])
        for frame in range(1, FRAME_COUNT - 1):
            label = head if frame <= 7 else tail
            _mllm_fixture(fixtures, vid, str(frame), "intermediate", [
                json.dumps({"score": label, "explanation": "intermediate"}),
            ])

    # action / interaction rubric scores
    _mllm_fixture(fixtures, "action-0000", "all", "action",
                  [_DESCRIBE_TEXT, '{"score": 4, "explanation": "one action off"}'])
    _mllm_fixture(fixtures, "action-0001", "all", "action",
                  [_DESCRIBE_TEXT, '{"score": 2, "explanation": "monkey missing"}'])
    _mllm_fixture(fixtures, "interaction-0000", "all", "interaction",
                  [_DESCRIBE_TEXT, '{"score": 5, "explanation": "collision depicted"}'])
    _mllm_fixture(fixtures, "interaction-0001", "all", "interaction",
                  [_DESCRIBE_TEXT, '{"score": 3, "explanation": "no reading shown"}'])

    # spatial 2D: toddler left of dog in every frame, disjoint boxes -> 1.0
    for frame in range(FRAME_COUNT):
        _detect_fixture(fixtures, "spatial-0000", frame, "toddler",
                        [((16.0, 96.0, 80.0, 160.0), 0.9)])
        _detect_fixture(fixtures, "spatial-0000", frame, "dog",
                        [((160.0, 112.0, 224.0, 176.0), 0.8)])

    # spatial 3D: cat nearer than sofa in 12 of 16 frames -> 0.75
    cat_mask = _rect_mask(100, 132, 156, 188)
    sofa_mask = _rect_mask(64, 96, 224, 120)
    for frame in range(FRAME_COUNT):
        _detect_fixture(fixtures, "spatial-0001", frame, "cat",
                        [((96.0, 128.0, 160.0, 192.0), 0.85)])
        _detect_fixture(fixtures, "spatial-0001", frame, "sofa",
                        [((64.0, 96.0, 224.0, 224.0), 0.8)])
        _segment_fixture(fixtures, "spatial-0001", frame, "cat", cat_mask)
        _segment_fixture(fixtures, "spatial-0001", frame, "sofa", sofa_mask)
        cat_depth, sofa_depth = (2.0, 5.0) if frame < 12 else (5.0, 2.0)
        values = np.full((HEIGHT, WIDTH), 10.0, dtype=np.float32)
        values[cat_mask] = cat_depth
        values[sofa_mask] = sofa_depth
        _depth_fixture(fixtures, "spatial-0001", frame, values)

    # motion: single object drifting left (-12, +1) against a static
    # background -> 1.0
    plane_step = (-12.0 / (FRAME_COUNT - 1), 1.0 / (FRAME_COUNT - 1))
    _track_fixture(fixtures, "motion-0000", [
        _drift((48.0, 48.0), plane_step),
        _drift((64.0, 64.0), plane_step),
        _drift((80.0, 80.0), plane_step),
        _drift((96.0, 96.0), plane_step),
        _drift((160.0, 48.0), (0.0, 0.0)),
        _drift((200.0, 100.0), (0.0, 0.0)),
        _drift((160.0, 200.0), (0.0, 0.0)),
        _drift((48.0, 200.0), (0.0, 0.0)),
    ])
    _detect_fixture(fixtures, "motion-0000", 0, "paper airplane",
                    [((40.0, 40.0, 104.0, 104.0), 0.9)])
    _segment_fixture(fixtures, "motion-0000", 0, "paper airplane",
                     _rect_mask(40, 40, 104, 104))

    # motion: ball correct (left), puppy wrong (drifts left, prompt says
    # right) -> 0.5
    ball_step = (-10.0 / (FRAME_COUNT - 1), 0.0)
    puppy_step = (-8.0 / (FRAME_COUNT - 1), 0.0)
    _track_fixture(fixtures, "motion-0001", [
        _drift((40.0, 100.0), ball_step),
        _drift((56.0, 116.0), ball_step),
        _drift((72.0, 132.0), ball_step),
        _drift((88.0, 148.0), ball_step),
        _drift((168.0, 100.0), puppy_step),
        _drift((184.0, 116.0), puppy_step),
        _drift((200.0, 132.0), puppy_step),
        _drift((216.0, 148.0), puppy_step),
        _drift((8.0, 8.0), (0.0, 0.0)),
        _drift((248.0, 8.0), (0.0, 0.0)),
        _drift((8.0, 248.0), (0.0, 0.0)),
        _drift((248.0, 248.0), (0.0, 0.0)),
    ])
    _detect_fixture(fixtures, "motion-0001", 0, "ball",
                    [((32.0, 96.0, 96.0, 160.0), 0.9)])
    _detect_fixture(fixtures, "motion-0001", 0, "puppy",
                    [((160.0, 96.0, 224.0, 160.0), 0.9)])
    _segment_fixture(fixtures, "motion-0001", 0, "ball", _rect_mask(32, 96, 96, 160))
    _segment_fixture(fixtures, "motion-0001", 0, "puppy", _rect_mask(160, 96, 224, 160))

    # numeracy: exact counts (3 bees, 5 butterflies) -> 1.0; cats right but
    # dogs short (1 of 3) -> 0.5
    bee_boxes = [((16.0 + 56 * k, 16.0, 48.0 + 56 * k, 48.0), 0.9) for k in range(3)]
    butterfly_boxes = [((12.0 + 48 * k, 80.0, 42.0 + 48 * k, 110.0), 0.85) for k in range(5)]
    cat_boxes = [((16.0, 16.0, 64.0, 64.0), 0.9), ((96.0, 16.0, 144.0, 64.0), 0.88)]
    dog_boxes = [((16.0, 96.0, 64.0, 144.0), 0.85)]
    for frame in range(FRAME_COUNT):
        _detect_fixture(fixtures, "numeracy-0000", frame, "bee", bee_boxes)
        _detect_fixture(fixtures, "numeracy-0000", frame, "butterfly", butterfly_boxes)
        _detect_fixture(fixtures, "numeracy-0001", frame, "cat", cat_boxes)
        _detect_fixture(fixtures, "numeracy-0001", frame, "dog", dog_boxes)


def make_mini_suite(root: str | Path) -> MiniAssets:
    """Build the miniature benchmark under ``root`` and return its paths."""
    root = Path(root)
    suite_dir = root / "suite"
    videos_dir = root / "videos"
    fixtures_dir = root / "fixtures"
    suite_dir.mkdir(parents=True, exist_ok=True)
    fixtures_dir.mkdir(parents=True, exist_ok=True)

    prompt_ids = []
    for token, lines in _SUITE_LINES.items():
        with open(suite_dir / f"{token}.jsonl", "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(json.dumps(line, ensure_ascii=False) + "\n")
        prompt_ids.extend(f"{token}-{i:04d}" for i in range(len(lines)))

    for seed, prompt_id in enumerate(prompt_ids):
        _write_video(videos_dir / prompt_id, prompt_id, seed)

    _build_fixtures(fixtures_dir)

    human_csv = root / "human_ratings.csv"
    with open(human_csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model_id", "prompt_id", "annotator_id", "rating"])
        for prompt_id, rating in HUMAN_RATINGS.items():
            for annotator in ("a1", "a2", "a3"):
                writer.writerow([MODEL_ID, prompt_id, annotator, rating])

    return MiniAssets(root, suite_dir, videos_dir, fixtures_dir, human_csv, MODEL_ID)
