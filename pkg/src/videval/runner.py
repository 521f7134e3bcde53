"""Per-video evaluation dispatch, suite orchestration, correlations, reports.

Each category is scored by its designated metric family: the 6-frame grid
judge for consistent attributes, actions, and interactions; the per-frame
image judge for dynamic attributes; detection rules for spatial and
numeracy; and point tracking for motion. A failure in any stage degrades
that video to score 0 with a diagnostic note instead of aborting the run.
"""
from __future__ import annotations

import concurrent.futures
import csv
import json
import logging
import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.stats

from . import geometry, judge, motion
from .core import (
    ActionMeta,
    CATEGORY_ORDER,
    Category,
    ConsistAttrMeta,
    DynamicAttrMeta,
    EngineConfig,
    InteractionMeta,
    MotionMeta,
    NumeracyMeta,
    PromptRecord,
    SpatialMeta,
)
from .errors import (
    DegenerateInputError,
    EmptyCategoryError,
    EmptyMaskError,
    EngineError,
    InsufficientOverlapError,
    OutOfRangeError,
    SchemaError,
    UnparseableResponseError,
)
from .frames import (
    DESCRIPTOR_NAME,
    FramePlan,
    PlanPurpose,
    VideoAsset,
    compose_grid,
    resample_to_fps,
    uniform_indices,
)
from .gateway import Detection, MllmRequest, dedup_boxes
from .judge import Stage

log = logging.getLogger(__name__)

#: Designated metric per category (leaderboard metric row).
METRIC_BY_CATEGORY: dict[Category, str] = {
    Category.CONSIST_ATTR: "grid-llava",
    Category.DYNAMIC_ATTR: "d-llava",
    Category.SPATIAL: "g-dino",
    Category.MOTION: "dot",
    Category.ACTION: "grid-llava",
    Category.INTERACTION: "grid-llava",
    Category.NUMERACY: "g-dino",
}


@dataclass(frozen=True)
class ScoreRecord:
    model_id: str
    prompt_id: str
    category: Category
    score: float
    metric_name: str
    frame_scores: tuple[float, ...] | None = None
    transcript_ref: str | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")
        if self.metric_name != METRIC_BY_CATEGORY[self.category]:
            raise ValueError(
                f"{self.category.token} must carry metric "
                f"{METRIC_BY_CATEGORY[self.category]!r}, got {self.metric_name!r}"
            )

    def to_obj(self) -> dict:
        return {
            "model_id": self.model_id,
            "prompt_id": self.prompt_id,
            "category": self.category.token,
            "metric_name": self.metric_name,
            "score": self.score,
            "frame_scores": list(self.frame_scores) if self.frame_scores is not None else None,
            "transcript_ref": self.transcript_ref,
            "note": self.note,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "ScoreRecord":
        try:
            frame_scores = obj.get("frame_scores")
            return cls(
                model_id=str(obj["model_id"]),
                prompt_id=str(obj["prompt_id"]),
                category=Category.from_token(str(obj["category"])),
                score=float(obj["score"]),
                metric_name=str(obj["metric_name"]),
                frame_scores=tuple(float(v) for v in frame_scores)
                if frame_scores is not None else None,
                transcript_ref=obj.get("transcript_ref"),
                note=str(obj.get("note", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad score record {obj!r}: {exc}") from None


@dataclass(frozen=True)
class HumanRating:
    model_id: str
    prompt_id: str
    annotator_id: str
    rating: int

    def __post_init__(self) -> None:
        if not 1 <= self.rating <= 5:
            raise ValueError(f"rating {self.rating} outside 1..5")


@dataclass(frozen=True)
class CorrelationResult:
    category: Category
    tau: float
    rho: float
    n: int

    def __post_init__(self) -> None:
        if abs(self.tau) > 1 + 1e-9 or abs(self.rho) > 1 + 1e-9:
            raise ValueError("correlation outside [-1, 1]")
        if self.n < 2:
            raise ValueError("correlation needs n >= 2")


# ---------------------------------------------------------------------------
# per-video evaluation

def _record(prompt: PromptRecord, model_id: str, score: float,
            frame_scores: Sequence[float] | None = None,
            transcript_ref: str | None = None, note: str = "") -> ScoreRecord:
    return ScoreRecord(
        model_id=model_id,
        prompt_id=prompt.prompt_id,
        category=prompt.category,
        score=score,
        metric_name=METRIC_BY_CATEGORY[prompt.category],
        frame_scores=tuple(frame_scores) if frame_scores is not None else None,
        transcript_ref=transcript_ref,
        note=note,
    )


class _Transcript:
    """Collects judge turns for one video and persists them for audit."""

    def __init__(self) -> None:
        self.calls: list[dict] = []

    def add(self, request: MllmRequest, texts: Sequence[str]) -> None:
        self.calls.append({
            "request_id": request.request_id,
            "turns": list(request.turns),
            "texts": list(texts),
        })

    def write(self, directory: Path, prompt_id: str) -> str:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{prompt_id}.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"calls": self.calls}, fh, ensure_ascii=False, indent=1)
            fh.write("\n")
        return f"{directory.name}/{prompt_id}.json"  # relative to the out dir


def _eval_grid_judge(prompt: PromptRecord, video: VideoAsset, gateway, cfg: EngineConfig,
                     transcript: _Transcript) -> tuple[float, str]:
    indices = uniform_indices(video.frame_count, cfg.mllm_frames)
    grid = compose_grid([video.frame(i) for i in indices])
    describe = judge.render_prompt(prompt.category, Stage.DESCRIBE, prompt.meta, prompt.text)
    predict = judge.render_prompt(prompt.category, Stage.PREDICT, prompt.meta, prompt.text)
    request = MllmRequest(video.video_id, "all", prompt.category.token,
                          (grid,), (describe, predict))
    response = gateway.query_mllm(request)
    transcript.add(request, response.texts)
    try:
        if prompt.category is Category.CONSIST_ATTR:
            o1, o2 = judge.parse_option_pair(response.text)
            return judge.consist_attr_score(o1, o2), ""
        if prompt.category is Category.ACTION:
            return judge.action_score(judge.parse_score_json(response.text, 0, 5)), ""
        return judge.interaction_score(judge.parse_score_json(response.text, 1, 5)), ""
    except (UnparseableResponseError, OutOfRangeError) as exc:
        log.warning("%s: judge response unusable: %s", prompt.prompt_id, exc)
        return 0.0, f"judge response unusable: {exc}"


def _eval_dynamic_attr(prompt: PromptRecord, video: VideoAsset, gateway, cfg: EngineConfig,
                       transcript: _Transcript) -> tuple[float, str]:
    meta = prompt.meta
    assert isinstance(meta, DynamicAttrMeta)
    indices = uniform_indices(video.frame_count, cfg.det_frames)
    describe = judge.render_prompt(Category.DYNAMIC_ATTR, Stage.DESCRIBE, meta)
    endpoint = judge.render_prompt(Category.DYNAMIC_ATTR, Stage.ENDPOINT, meta)
    intermediate = judge.render_prompt(Category.DYNAMIC_ATTR, Stage.INTERMEDIATE, meta)
    notes: list[str] = []

    def endpoint_component(frame_index: int) -> float:
        request = MllmRequest(video.video_id, str(frame_index), "endpoint",
                              (video.frame_ref(frame_index),), (describe, endpoint))
        response = gateway.query_mllm(request)
        transcript.add(request, response.texts)
        try:
            return (judge.parse_score_json(response.text, 1, 5) - 1) / 4.0
        except (UnparseableResponseError, OutOfRangeError) as exc:
            notes.append(f"frame {frame_index}: {exc}")
            return 0.0

    e0 = endpoint_component(indices[0])
    e1 = endpoint_component(indices[-1])

    labels: list[int] = []
    for frame_index in indices[1:-1]:
        request = MllmRequest(video.video_id, str(frame_index), "intermediate",
                              (video.frame_ref(frame_index),), (intermediate,))
        response = gateway.query_mllm(request)
        transcript.add(request, response.texts)
        try:
            labels.append(judge.parse_score_json(response.text, 0, 2))
        except (UnparseableResponseError, OutOfRangeError) as exc:
            notes.append(f"frame {frame_index}: {exc}")
            labels.append(0)
    credit = judge.transition_credit(labels) if labels else 0.0
    return judge.combine_dynamic_components(e0, e1, credit), "; ".join(notes)


def _eval_spatial(prompt: PromptRecord, video: VideoAsset, gateway,
                  cfg: EngineConfig) -> tuple[float, list[float]]:
    meta = prompt.meta
    assert isinstance(meta, SpatialMeta)
    queries = list(dict.fromkeys([meta.object_1, meta.object_2]))
    frame_scores: list[geometry.FrameScore] = []
    for frame_index in uniform_indices(video.frame_count, cfg.det_frames):
        frame = video.frame_ref(frame_index)
        dets = dedup_boxes(gateway.detect(frame, queries, cfg.det_box_threshold),
                           cfg.dedup_iou)
        if meta.relation.is_2d:
            frame_scores.append(geometry.frame_spatial_score_2d(dets, meta, frame_index))
            continue
        pair = geometry.best_pair(dets, meta.object_1, meta.object_2)
        if pair is None:
            frame_scores.append(
                geometry.FrameScore(frame_index, 0.0, note="object missing"))
            continue
        masks = {}
        for det in {d.query: d for d in pair}.values():
            try:
                masks[det.query] = gateway.segment(frame, det)
            except EmptyMaskError:
                pass
        depth = gateway.estimate_depth(frame)
        frame_scores.append(
            geometry.frame_spatial_score_3d(dets, masks, depth, meta, frame_index))
    return geometry.video_score(frame_scores), [f.score for f in frame_scores]


def _eval_numeracy(prompt: PromptRecord, video: VideoAsset, gateway,
                   cfg: EngineConfig) -> tuple[float, list[float]]:
    meta = prompt.meta
    assert isinstance(meta, NumeracyMeta)
    queries = list(dict.fromkeys(meta.objects))
    frame_scores = []
    for frame_index in uniform_indices(video.frame_count, cfg.det_frames):
        dets = dedup_boxes(
            gateway.detect(video.frame_ref(frame_index), queries, cfg.det_box_threshold),
            cfg.dedup_iou,
        )
        frame_scores.append(geometry.frame_numeracy_score(dets, meta, frame_index))
    return geometry.video_score(frame_scores), [f.score for f in frame_scores]


def _eval_motion(prompt: PromptRecord, video: VideoAsset, gateway,
                 cfg: EngineConfig) -> tuple[float, list[float], str]:
    meta = prompt.meta
    assert isinstance(meta, MotionMeta)
    plan = resample_to_fps(video.src_fps, video.frame_count, cfg.track_fps)
    tracks = gateway.track(video, plan)
    first = video.frame_ref(plan.indices[0])
    objects = [meta.object_1] + ([meta.object_2] if meta.object_2 else [])
    masks = {}
    notes = []
    for obj in objects:
        dets = dedup_boxes(gateway.detect(first, [obj], cfg.det_box_threshold), cfg.dedup_iou)
        if not dets:
            masks[obj] = None
            notes.append(f"{obj}: not detected on first frame")
            continue
        try:
            masks[obj] = gateway.segment(first, dets[0])
        except EmptyMaskError as exc:
            masks[obj] = None
            notes.append(f"{obj}: {exc}")
    result = motion.motion_binding(video, tracks, masks, meta, cfg)
    for verdict in result.verdicts:
        if verdict.note:
            notes.append(f"{verdict.object_query}: {verdict.note}")
    if result.note:
        notes.append(result.note)
    return result.score, [v.score for v in result.verdicts], "; ".join(notes)


def evaluate_video(prompt: PromptRecord, video: VideoAsset, gateway, cfg: EngineConfig,
                   model_id: str = "model",
                   transcript_dir: str | Path | None = None) -> ScoreRecord:
    """Score one video against its prompt with the category's metric.

    Gateway failures never raise; they produce a score-0 record whose note
    names the failure, so one bad video cannot kill a whole run.
    """
    transcript = _Transcript()
    try:
        category = prompt.category
        if category in (Category.CONSIST_ATTR, Category.ACTION, Category.INTERACTION):
            score, note = _eval_grid_judge(prompt, video, gateway, cfg, transcript)
            frame_scores = None
        elif category is Category.DYNAMIC_ATTR:
            score, note = _eval_dynamic_attr(prompt, video, gateway, cfg, transcript)
            frame_scores = None
        elif category in (Category.SPATIAL, Category.NUMERACY):
            evaluator = _eval_spatial if category is Category.SPATIAL else _eval_numeracy
            score, frame_scores = evaluator(prompt, video, gateway, cfg)
            note = ""
        else:
            score, frame_scores, note = _eval_motion(prompt, video, gateway, cfg)
    except EngineError as exc:
        log.warning("%s: evaluation failed: %s", prompt.prompt_id, exc)
        return _record(prompt, model_id, 0.0,
                       note=f"{type(exc).__name__}: {exc}")
    transcript_ref = None
    if transcript_dir is not None and transcript.calls:
        transcript_ref = transcript.write(Path(transcript_dir), prompt.prompt_id)
    return _record(prompt, model_id, score, frame_scores, transcript_ref, note)


# ---------------------------------------------------------------------------
# suite orchestration

@dataclass(frozen=True)
class SuiteResult:
    records: tuple[ScoreRecord, ...]
    means: dict[Category, float]
    coverage: dict


def category_means(records: Iterable[ScoreRecord],
                   expected: Iterable[Category] | None = None) -> dict[Category, float]:
    """Arithmetic mean per category; raises EmptyCategoryError when an
    expected category has no records."""
    buckets: dict[Category, list[float]] = {}
    for record in records:
        buckets.setdefault(record.category, []).append(record.score)
    for category in expected or ():
        if category not in buckets:
            raise EmptyCategoryError(f"no evaluable videos for {category.token}")
    return {cat: float(np.mean(scores)) for cat, scores in buckets.items()}


def evaluate_suite(model_id: str, suite: Sequence[PromptRecord], video_root: str | Path,
                   gateway, cfg: EngineConfig, workers: int | None = None,
                   out_dir: str | Path | None = None) -> SuiteResult:
    """Evaluate one video per prompt (at ``video_root/<prompt_id>``).

    Videos are scored by a bounded worker pool; records are streamed to
    ``records.partial.jsonl`` in completion order (so interrupted runs keep
    their progress) and finally re-sorted by prompt_id, which makes the
    result independent of pool size. Missing videos are skipped and counted
    in the coverage report.
    """
    video_root = Path(video_root)
    out_dir = Path(out_dir) if out_dir is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    transcript_dir = out_dir / "transcripts" if out_dir is not None else None

    available: list[PromptRecord] = []
    missing: list[str] = []
    for prompt in suite:
        if (video_root / prompt.prompt_id / DESCRIPTOR_NAME).exists():
            available.append(prompt)
        else:
            missing.append(prompt.prompt_id)

    progress_path = out_dir / "records.partial.jsonl" if out_dir is not None else None
    progress_lock = threading.Lock()
    progress_fh = open(progress_path, "w", encoding="utf-8") if progress_path else None

    def run_one(prompt: PromptRecord) -> ScoreRecord:
        video_dir = video_root / prompt.prompt_id
        try:
            video = VideoAsset.from_frame_dir(video_dir)
            record = evaluate_video(prompt, video, gateway, cfg, model_id, transcript_dir)
        except (EngineError, OSError, ValueError) as exc:
            log.warning("%s: video unreadable: %s", prompt.prompt_id, exc)
            record = _record(prompt, model_id, 0.0, note=f"video unreadable: {exc}")
        if progress_fh is not None:
            line = json.dumps(record.to_obj(), ensure_ascii=False)
            with progress_lock:
                progress_fh.write(line + "\n")
                progress_fh.flush()
        return record

    try:
        max_workers = workers or os.cpu_count() or 1
        if max_workers == 1:
            records = [run_one(p) for p in available]
        else:
            with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
                records = list(pool.map(run_one, available))
    finally:
        if progress_fh is not None:
            progress_fh.close()

    records.sort(key=lambda r: r.prompt_id)
    suite_categories = list(dict.fromkeys(p.category for p in suite))
    means = category_means(records, expected=suite_categories)
    per_category = {
        cat.token: sum(1 for r in records if r.category is cat) for cat in suite_categories
    }
    coverage = {
        "prompts": len(suite),
        "evaluated": len(records),
        "missing": sorted(missing),
        "per_category": per_category,
    }
    if progress_path is not None:
        progress_path.unlink(missing_ok=True)  # superseded by the sorted records file
    return SuiteResult(tuple(records), means, coverage)


# ---------------------------------------------------------------------------
# rank correlation

def _check_pair_lists(xs: Sequence[float], ys: Sequence[float]) -> None:
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("need at least two pairs")
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        raise DegenerateInputError("an all-tied list has no defined rank correlation")


def kendall_tau_b(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Tie-corrected Kendall rank correlation (the tau-b variant).

    tau_b = (C - D) / sqrt((C + D + Tx) (C + D + Ty)) over all pairs, where
    Tx / Ty count pairs tied only in x / only in y and pairs tied in both
    drop out of every count. Counts are exact integers, so monotone data
    yields exactly +-1.
    """
    _check_pair_lists(xs, ys)
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    n = len(x)
    concordant = discordant = tied_x_only = tied_y_only = 0
    cols = np.arange(n)
    for start in range(0, n, 512):  # row blocks bound the O(n^2) memory
        rows = np.arange(start, min(start + 512, n))
        upper = cols[None, :] > rows[:, None]
        sx = np.sign(x[rows][:, None] - x[None, :])
        sy = np.sign(y[rows][:, None] - y[None, :])
        product = sx * sy
        concordant += int(np.count_nonzero((product > 0) & upper))
        discordant += int(np.count_nonzero((product < 0) & upper))
        tied_x_only += int(np.count_nonzero((sx == 0) & (sy != 0) & upper))
        tied_y_only += int(np.count_nonzero((sy == 0) & (sx != 0) & upper))
    denom = math.sqrt((concordant + discordant + tied_x_only)
                      * (concordant + discordant + tied_y_only))
    if denom == 0:
        raise DegenerateInputError("no untied pairs in either list")
    return (concordant - discordant) / denom


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation of mean-ranked values (ties share their rank)."""
    _check_pair_lists(xs, ys)
    rho = scipy.stats.spearmanr(xs, ys).statistic
    return float(rho)


def aggregate_human(ratings: Iterable[HumanRating]
                    ) -> tuple[dict[tuple[str, str], float], list[tuple[str, str]]]:
    """Mean rating per (model_id, prompt_id); keys without exactly three
    annotators are returned in the warning list."""
    buckets: dict[tuple[str, str], list[int]] = {}
    for rating in ratings:
        buckets.setdefault((rating.model_id, rating.prompt_id), []).append(rating.rating)
    means = {key: float(np.mean(values)) for key, values in buckets.items()}
    flagged = sorted(key for key, values in buckets.items() if len(values) != 3)
    for key in flagged:
        log.warning("(%s, %s) has %d annotator ratings, expected 3",
                    key[0], key[1], len(buckets[key]))
    return means, flagged


def load_human_ratings(path: str | Path) -> list[HumanRating]:
    """CSV with header model_id,prompt_id,annotator_id,rating."""
    ratings = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"model_id", "prompt_id", "annotator_id", "rating"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise SchemaError(f"human ratings file needs columns {sorted(required)}")
        for row in reader:
            try:
                ratings.append(HumanRating(row["model_id"], row["prompt_id"],
                                           row["annotator_id"], int(row["rating"])))
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"bad human rating row {row!r}: {exc}") from None
    return ratings


def correlate(scores: Iterable[ScoreRecord], human: Mapping[tuple[str, str], float],
              category: Category) -> CorrelationResult:
    """Kendall tau-b and Spearman rho of metric scores vs human means over
    the matched (model, prompt) keys of one category."""
    matched = sorted(
        (record.model_id, record.prompt_id, record.score)
        for record in scores
        if record.category is category and (record.model_id, record.prompt_id) in human
    )
    if len(matched) < 2:
        raise InsufficientOverlapError(
            f"{category.token}: only {len(matched)} matched keys, need at least 2"
        )
    xs = [score for _, _, score in matched]
    ys = [human[(model, prompt)] for model, prompt, _ in matched]
    return CorrelationResult(category, kendall_tau_b(xs, ys), spearman_rho(xs, ys),
                             len(matched))


# ---------------------------------------------------------------------------
# reports

LEADERBOARD_COLUMNS = ("model_id",) + tuple(cat.token for cat in CATEGORY_ORDER)


def load_score_records(path: str | Path) -> list[ScoreRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(ScoreRecord.from_obj(json.loads(line)))
    return records


def leaderboard_means(records: Iterable[ScoreRecord]) -> dict[str, dict[Category, float]]:
    by_model: dict[str, list[ScoreRecord]] = {}
    for record in records:
        by_model.setdefault(record.model_id, []).append(record)
    return {model: category_means(recs) for model, recs in sorted(by_model.items())}


def write_report(records: Sequence[ScoreRecord],
                 means: Mapping[str, Mapping[Category, float]] | None,
                 correlations: Sequence[CorrelationResult] | None,
                 out_dir: str | Path,
                 formats: Sequence[str] = ("csv",)) -> list[Path]:
    """Write the records stream, the per-model leaderboard, and the
    correlation table. Identical inputs produce byte-identical files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    unknown = set(formats) - {"csv", "json"}
    if unknown:
        raise ValueError(f"unknown report formats: {sorted(unknown)}")
    written: list[Path] = []

    records = sorted(records, key=lambda r: (r.model_id, r.prompt_id))
    records_path = out_dir / "records.jsonl"
    with open(records_path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_obj(), ensure_ascii=False) + "\n")
    written.append(records_path)

    if means is None:
        means = leaderboard_means(records)

    if "csv" in formats:
        path = out_dir / "leaderboard.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(LEADERBOARD_COLUMNS)
            for model in sorted(means):
                row = [model] + [
                    f"{means[model][cat]:.4f}" if cat in means[model] else ""
                    for cat in CATEGORY_ORDER
                ]
                writer.writerow(row)
        written.append(path)
    if "json" in formats:
        path = out_dir / "leaderboard.json"
        payload = {
            model: {cat.token: means[model][cat] for cat in CATEGORY_ORDER
                    if cat in means[model]}
            for model in sorted(means)
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False, indent=1)
            fh.write("\n")
        written.append(path)

    if correlations:
        ordered = sorted(correlations, key=lambda c: CATEGORY_ORDER.index(c.category))
        if "csv" in formats:
            path = out_dir / "correlations.csv"
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["metric", "category", "tau", "rho", "n"])
                for result in ordered:
                    writer.writerow([
                        METRIC_BY_CATEGORY[result.category],
                        result.category.token,
                        f"{result.tau:.4f}",
                        f"{result.rho:.4f}",
                        result.n,
                    ])
            written.append(path)
        if "json" in formats:
            path = out_dir / "correlations.json"
            payload = [
                {
                    "metric": METRIC_BY_CATEGORY[result.category],
                    "category": result.category.token,
                    "tau": result.tau,
                    "rho": result.rho,
                    "n": result.n,
                }
                for result in ordered
            ]
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, ensure_ascii=False, indent=1)
                fh.write("\n")
            written.append(path)
    return written
