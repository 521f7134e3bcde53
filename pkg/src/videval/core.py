"""Domain types, the seven category metadata schemas, and suite ingestion.

Prompt suites live on disk as line-delimited JSON, one file per category
(the file stem is the category token, e.g. ``spatial.jsonl``), or a single
combined file where every record carries a ``category`` key.
"""
from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Union

from .errors import DuplicateIdError, SchemaError, UnknownDirectionError

log = logging.getLogger(__name__)

SMALLER_NEARER = "smaller_nearer"


class Category(enum.Enum):
    """The seven compositionality categories, in leaderboard column order."""

    CONSIST_ATTR = "consist-attr"
    DYNAMIC_ATTR = "dynamic-attr"
    SPATIAL = "spatial"
    MOTION = "motion"
    ACTION = "action"
    INTERACTION = "interaction"
    NUMERACY = "numeracy"

    @property
    def token(self) -> str:
        return self.value

    @classmethod
    def from_token(cls, token: str) -> "Category":
        for cat in cls:
            if cat.value == token:
                return cat
        raise SchemaError(f"unknown category token {token!r}")


#: Fixed column order for leaderboard tables.
CATEGORY_ORDER = tuple(Category)


class SpatialRelation(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    ABOVE = "above"
    BELOW = "below"
    IN_FRONT_OF = "in front of"
    BEHIND = "behind"

    @property
    def is_2d(self) -> bool:
        return self in _2D_RELATIONS


_2D_RELATIONS = frozenset(
    {SpatialRelation.LEFT, SpatialRelation.RIGHT, SpatialRelation.ABOVE, SpatialRelation.BELOW}
)


class Direction(enum.Enum):
    """Screen-space motion directions. x grows rightwards, y grows downwards,
    so Left means dx < 0 and Up means dy < 0."""

    LEFT = "left"
    RIGHT = "right"
    UP = "up"
    DOWN = "down"


def parse_direction(token: str) -> Direction:
    """Map a canonical direction token (case-insensitive) to a Direction."""
    normalized = token.strip().lower()
    for d in Direction:
        if d.value == normalized:
            return d
    raise UnknownDirectionError(f"unknown direction token {token!r}")


def parse_spatial_relation(token: str) -> SpatialRelation:
    normalized = " ".join(token.strip().lower().replace("_", " ").split())
    for rel in SpatialRelation:
        if rel.value == normalized:
            return rel
    raise SchemaError(f"unknown spatial relation token {token!r}")


@dataclass(frozen=True)
class ConsistAttrMeta:
    """Two attribute-bound phrases, e.g. 'a blue car' and 'a white picket fence'."""

    phrases: tuple[str, str]


@dataclass(frozen=True)
class DynamicAttrMeta:
    """Initial and final object states for a time-varying attribute."""

    state0: str
    state1: str


@dataclass(frozen=True)
class SpatialMeta:
    relation: SpatialRelation
    object_1: str
    object_2: str


@dataclass(frozen=True)
class ActionMeta:
    """Per object: (noun phrase, noun phrase with its action)."""

    phrase_0: tuple[str, str]
    phrase_1: tuple[str, str]


@dataclass(frozen=True)
class MotionMeta:
    object_1: str
    d_1: Direction
    object_2: str | None = None
    d_2: Direction | None = None


@dataclass(frozen=True)
class InteractionMeta:
    """No extra fields; the full prompt text is the judged unit."""


@dataclass(frozen=True)
class NumeracyMeta:
    objects: tuple[str, ...]
    numbers: tuple[int, ...]


CategoryMeta = Union[
    ConsistAttrMeta,
    DynamicAttrMeta,
    SpatialMeta,
    ActionMeta,
    MotionMeta,
    InteractionMeta,
    NumeracyMeta,
]

META_TYPES: dict[Category, type] = {
    Category.CONSIST_ATTR: ConsistAttrMeta,
    Category.DYNAMIC_ATTR: DynamicAttrMeta,
    Category.SPATIAL: SpatialMeta,
    Category.MOTION: MotionMeta,
    Category.ACTION: ActionMeta,
    Category.INTERACTION: InteractionMeta,
    Category.NUMERACY: NumeracyMeta,
}


@dataclass(frozen=True)
class PromptRecord:
    prompt_id: str
    category: Category
    text: str
    meta: CategoryMeta


@dataclass(frozen=True)
class EngineConfig:
    """Evaluation knobs. The three sampling numbers (6 MLLM frames, 16
    detection frames, 8 FPS tracking) reproduce the reference protocol."""

    mllm_frames: int = 6
    det_frames: int = 16
    track_fps: float = 8.0
    dedup_iou: float = 0.9
    det_box_threshold: float = 0.35
    motion_eps_frac: float = 0.01
    dominance_ratio: float = 1.0
    depth_convention: str = SMALLER_NEARER

    def __post_init__(self) -> None:
        for name in ("mllm_frames", "det_frames", "track_fps", "dedup_iou",
                     "det_box_threshold", "motion_eps_frac"):
            if getattr(self, name) <= 0:
                raise ValueError(f"EngineConfig.{name} must be positive")
        if self.dominance_ratio < 1.0:
            raise ValueError("EngineConfig.dominance_ratio must be >= 1")
        if self.depth_convention != SMALLER_NEARER:
            raise ValueError("engine depth convention is fixed to smaller_nearer")

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise SchemaError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)


# ---------------------------------------------------------------------------
# record parsing

_KNOWN_KEYS: dict[Category, frozenset[str]] = {
    Category.CONSIST_ATTR: frozenset({"phrases"}),
    Category.DYNAMIC_ATTR: frozenset({"state 0", "state 1", "state0", "state1"}),
    Category.SPATIAL: frozenset({"spatial", "object_1", "object_2"}),
    Category.MOTION: frozenset({"object_1", "d_1", "object_2", "d_2"}),
    Category.ACTION: frozenset({"phrase_0", "phrase_1"}),
    Category.INTERACTION: frozenset(),
    Category.NUMERACY: frozenset({"objects", "numbers"}),
}
_COMMON_KEYS = frozenset({"prompt", "prompt_id", "category"})


def _require(obj: dict, key: str, category: Category, alt: str | None = None):
    if key in obj:
        return obj[key]
    if alt is not None and alt in obj:
        return obj[alt]
    raise SchemaError(f"{category.token} record is missing key {key!r}")


def _split_listish(value, what: str) -> list[str]:
    """Accept 'a,b' or ['a', 'b']; return stripped non-empty items."""
    if isinstance(value, str):
        items = [part.strip() for part in value.split(",")]
    elif isinstance(value, (list, tuple)):
        items = [str(part).strip() for part in value]
    else:
        raise SchemaError(f"{what} must be a comma string or a list")
    items = [item for item in items if item]
    if not items:
        raise SchemaError(f"{what} is empty")
    return items


def _strip_probe(phrase: str) -> str:
    # Generated action metadata phrases end with a '?' probe suffix.
    return phrase.strip().rstrip("?").strip()


def _parse_meta(obj: dict, category: Category) -> CategoryMeta:
    if category is Category.CONSIST_ATTR:
        raw = _require(obj, "phrases", category)
        if isinstance(raw, str):
            parts = [p.strip() for p in raw.split(";")]
        elif isinstance(raw, (list, tuple)):
            parts = [str(p).strip() for p in raw]
        else:
            raise SchemaError("phrases must be a semicolon string or a list")
        parts = [p for p in parts if p]
        if len(parts) != 2:
            raise SchemaError(f"consist-attr needs exactly 2 phrases, got {len(parts)}")
        return ConsistAttrMeta(phrases=(parts[0], parts[1]))

    if category is Category.DYNAMIC_ATTR:
        state0 = str(_require(obj, "state 0", category, alt="state0")).strip()
        state1 = str(_require(obj, "state 1", category, alt="state1")).strip()
        if not state0 or not state1:
            raise SchemaError("dynamic-attr states must be non-empty")
        return DynamicAttrMeta(state0=state0, state1=state1)

    if category is Category.SPATIAL:
        relation = parse_spatial_relation(str(_require(obj, "spatial", category)))
        object_1 = str(_require(obj, "object_1", category)).strip()
        object_2 = str(_require(obj, "object_2", category)).strip()
        if not object_1 or not object_2:
            raise SchemaError("spatial objects must be non-empty")
        return SpatialMeta(relation=relation, object_1=object_1, object_2=object_2)

    if category is Category.MOTION:
        object_1 = str(_require(obj, "object_1", category)).strip()
        if not object_1:
            raise SchemaError("motion object_1 must be non-empty")
        d_1 = parse_direction(str(_require(obj, "d_1", category)))
        object_2 = str(obj.get("object_2", "") or "").strip() or None
        d_2_raw = str(obj.get("d_2", "") or "").strip()
        d_2 = parse_direction(d_2_raw) if d_2_raw else None
        if (object_2 is None) != (d_2 is None):
            raise SchemaError("motion object_2 and d_2 must be given together")
        return MotionMeta(object_1=object_1, d_1=d_1, object_2=object_2, d_2=d_2)

    if category is Category.ACTION:
        def pair(key: str) -> tuple[str, str]:
            raw = _require(obj, key, category)
            if not isinstance(raw, (list, tuple)) or len(raw) != 2:
                raise SchemaError(f"action {key} must be a [noun, noun+action] pair")
            noun, noun_action = (_strip_probe(str(raw[0])), _strip_probe(str(raw[1])))
            if not noun or not noun_action:
                raise SchemaError(f"action {key} entries must be non-empty")
            return noun, noun_action

        return ActionMeta(phrase_0=pair("phrase_0"), phrase_1=pair("phrase_1"))

    if category is Category.INTERACTION:
        return InteractionMeta()

    if category is Category.NUMERACY:
        objects = _split_listish(_require(obj, "objects", category), "numeracy objects")
        raw_numbers = _require(obj, "numbers", category)
        try:
            numbers = [int(n) for n in _split_listish(raw_numbers, "numeracy numbers")]
        except ValueError as exc:
            raise SchemaError(f"numeracy numbers must be integers: {exc}") from None
        if len(objects) != len(numbers):
            raise SchemaError(
                f"numeracy objects ({len(objects)}) and numbers ({len(numbers)}) differ in length"
            )
        if any(not 1 <= n <= 8 for n in numbers):
            raise SchemaError(f"numeracy quantities must lie in 1..8, got {numbers}")
        return NumeracyMeta(objects=tuple(objects), numbers=tuple(numbers))

    raise SchemaError(f"unhandled category {category}")


def parse_record(obj: dict, category: Category, default_id: str) -> PromptRecord:
    """Build one validated PromptRecord from a raw JSON object."""
    if not isinstance(obj, dict):
        raise SchemaError("record must be a JSON object")
    text = str(obj.get("prompt", "")).strip()
    if not text:
        raise SchemaError("record has an empty prompt")
    unknown = set(obj) - _COMMON_KEYS - _KNOWN_KEYS[category]
    for key in sorted(unknown):
        log.warning("ignoring unknown key %r in %s record", key, category.token)
    prompt_id = str(obj.get("prompt_id", default_id))
    meta = _parse_meta(obj, category)
    record = PromptRecord(prompt_id=prompt_id, category=category, text=text, meta=meta)
    validate_meta(record)
    return record


def validate_meta(record: PromptRecord) -> None:
    """Re-check every CategoryMeta invariant; raise SchemaError naming the first violation."""
    meta = record.meta
    expected = META_TYPES[record.category]
    if type(meta) is not expected:
        raise SchemaError(
            f"{record.prompt_id}: meta variant {type(meta).__name__} does not match "
            f"category {record.category.token}"
        )
    if not record.text.strip():
        raise SchemaError(f"{record.prompt_id}: prompt text is empty")
    if isinstance(meta, ConsistAttrMeta) and len(meta.phrases) != 2:
        raise SchemaError(f"{record.prompt_id}: consist-attr needs exactly 2 phrases")
    if isinstance(meta, NumeracyMeta):
        if len(meta.objects) != len(meta.numbers):
            raise SchemaError(f"{record.prompt_id}: objects/numbers length mismatch")
        if any(not 1 <= n <= 8 for n in meta.numbers):
            raise SchemaError(f"{record.prompt_id}: quantities must lie in 1..8")
    if isinstance(meta, MotionMeta) and (meta.object_2 is None) != (meta.d_2 is None):
        raise SchemaError(f"{record.prompt_id}: object_2 and d_2 must be given together")


# ---------------------------------------------------------------------------
# suite I/O

_SUITE_SUFFIXES = (".jsonl", ".ndjson", ".json")


def _iter_lines(path: Path) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path.name}:{lineno}: invalid JSON ({exc})") from None


def load_prompt_suite(path: str | Path) -> list[PromptRecord]:
    """Load and validate a prompt suite from a directory or a combined file.

    Directory layout: one ``<category-token>.jsonl`` per category. A single
    file is also accepted when each record carries a ``category`` key.
    Records are returned in file order (categories in canonical order).
    """
    path = Path(path)
    records: list[PromptRecord] = []
    seen: set[str] = set()

    def add(obj: dict, category: Category, index: int, source: str) -> None:
        record = parse_record(obj, category, default_id=f"{category.token}-{index:04d}")
        if record.prompt_id in seen:
            raise DuplicateIdError(f"{source}: duplicate prompt_id {record.prompt_id!r}")
        seen.add(record.prompt_id)
        records.append(record)

    if path.is_dir():
        for category in CATEGORY_ORDER:
            for suffix in _SUITE_SUFFIXES:
                file = path / f"{category.token}{suffix}"
                if file.exists():
                    break
            else:
                continue
            for index, (lineno, obj) in enumerate(_iter_lines(file)):
                add(obj, category, index, f"{file.name}:{lineno}")
        if not records:
            raise SchemaError(f"no category metadata files found under {path}")
    else:
        counters = {cat: 0 for cat in Category}
        for lineno, obj in _iter_lines(path):
            token = obj.get("category")
            if token is None:
                raise SchemaError(f"{path.name}:{lineno}: combined file records need a category key")
            category = Category.from_token(str(token))
            add(obj, category, counters[category], f"{path.name}:{lineno}")
            counters[category] += 1
    return records


def record_to_obj(record: PromptRecord, include_category: bool = False) -> dict:
    """Canonical JSON-ready form of a record (key order is fixed)."""
    obj: dict = {"prompt_id": record.prompt_id}
    if include_category:
        obj["category"] = record.category.token
    obj["prompt"] = record.text
    meta = record.meta
    if isinstance(meta, ConsistAttrMeta):
        obj["phrases"] = "; ".join(meta.phrases)
    elif isinstance(meta, DynamicAttrMeta):
        obj["state 0"] = meta.state0
        obj["state 1"] = meta.state1
    elif isinstance(meta, SpatialMeta):
        obj["spatial"] = meta.relation.value
        obj["object_1"] = meta.object_1
        obj["object_2"] = meta.object_2
    elif isinstance(meta, MotionMeta):
        obj["object_1"] = meta.object_1
        obj["d_1"] = meta.d_1.value
        obj["object_2"] = meta.object_2 or ""
        obj["d_2"] = meta.d_2.value if meta.d_2 else ""
    elif isinstance(meta, ActionMeta):
        obj["phrase_0"] = list(meta.phrase_0)
        obj["phrase_1"] = list(meta.phrase_1)
    elif isinstance(meta, NumeracyMeta):
        obj["objects"] = ",".join(meta.objects)
        obj["numbers"] = ",".join(str(n) for n in meta.numbers)
    return obj


def dumps_record(record: PromptRecord, include_category: bool = False) -> str:
    return json.dumps(record_to_obj(record, include_category), ensure_ascii=False)


def dump_prompt_suite(records: Iterable[PromptRecord], out_dir: str | Path) -> list[Path]:
    """Write records back to per-category .jsonl files in canonical form."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_category: dict[Category, list[PromptRecord]] = {}
    for record in records:
        by_category.setdefault(record.category, []).append(record)
    written = []
    for category in CATEGORY_ORDER:
        if category not in by_category:
            continue
        file = out_dir / f"{category.token}.jsonl"
        with open(file, "w", encoding="utf-8") as fh:
            for record in by_category[category]:
                fh.write(dumps_record(record) + "\n")
        written.append(file)
    return written
