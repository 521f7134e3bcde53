"""Judge prompt rendering, response parsing, and rubric score maps.

Templates are shipped as canonical text resources, one per category and
stage, and instantiated by literal placeholder substitution so rendered
prompts byte-match the golden copies. Response parsing is lenient about
surrounding prose (real judge output wraps JSON in chatter) but strict
about score ranges.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Sequence

from .core import (
    ActionMeta,
    Category,
    CategoryMeta,
    ConsistAttrMeta,
    DynamicAttrMeta,
)
from .errors import (
    EmptyInputError,
    MissingPlaceholderError,
    OutOfRangeError,
    UnparseableResponseError,
)


class Stage(Enum):
    DESCRIBE = "describe"
    PREDICT = "predict"
    ENDPOINT = "endpoint"
    INTERMEDIATE = "intermediate"


_TEMPLATE_FILES: dict[tuple[Category, Stage], str] = {
    (Category.CONSIST_ATTR, Stage.DESCRIBE): "consist_attr_describe.txt",
    (Category.CONSIST_ATTR, Stage.PREDICT): "consist_attr_predict.txt",
    (Category.DYNAMIC_ATTR, Stage.DESCRIBE): "dynamic_attr_describe.txt",
    (Category.DYNAMIC_ATTR, Stage.ENDPOINT): "dynamic_attr_endpoint.txt",
    (Category.DYNAMIC_ATTR, Stage.INTERMEDIATE): "dynamic_attr_intermediate.txt",
    (Category.ACTION, Stage.DESCRIBE): "action_describe.txt",
    (Category.ACTION, Stage.PREDICT): "action_predict.txt",
    (Category.INTERACTION, Stage.DESCRIBE): "interaction_describe.txt",
    (Category.INTERACTION, Stage.PREDICT): "interaction_predict.txt",
}

_PLACEHOLDERS = (
    "phrase_1",
    "phrase_2",
    "prompt",
    "obj1",
    "obj2",
    "obj1's action",
    "obj2's action",
    "initial state",
    "final state",
)


@dataclass(frozen=True)
class RubricTemplate:
    category: Category
    stage: Stage
    text: str

    def render(self, mapping: dict[str, str]) -> str:
        out = self.text
        for key, value in mapping.items():
            out = out.replace("{" + key + "}", value)
        leftover = [p for p in _PLACEHOLDERS if "{" + p + "}" in out]
        if leftover:
            raise MissingPlaceholderError(
                f"{self.category.token}/{self.stage.value} template left "
                f"placeholders unresolved: {leftover}"
            )
        return out


def load_template(category: Category, stage: Stage) -> RubricTemplate:
    try:
        filename = _TEMPLATE_FILES[(category, stage)]
    except KeyError:
        raise ValueError(f"no template for {category.token}/{stage.value}") from None
    text = resources.files("videval.templates").joinpath(filename).read_text(encoding="utf-8")
    return RubricTemplate(category, stage, text)


def render_prompt(category: Category, stage: Stage, meta: CategoryMeta | None,
                  prompt_text: str = "") -> str:
    """Instantiate the (category, stage) template from metadata fields."""
    template = load_template(category, stage)
    mapping: dict[str, str] = {}
    if stage is Stage.PREDICT and category is Category.CONSIST_ATTR:
        if not isinstance(meta, ConsistAttrMeta):
            raise ValueError("consist-attr predict needs ConsistAttrMeta")
        mapping = {"phrase_1": meta.phrases[0], "phrase_2": meta.phrases[1]}
    elif stage in (Stage.ENDPOINT, Stage.INTERMEDIATE):
        if not isinstance(meta, DynamicAttrMeta):
            raise ValueError("dynamic-attr rubric needs DynamicAttrMeta")
        mapping = {"initial state": meta.state0, "final state": meta.state1}
    elif stage is Stage.PREDICT and category is Category.ACTION:
        if not isinstance(meta, ActionMeta):
            raise ValueError("action predict needs ActionMeta")
        mapping = {
            "prompt": prompt_text,
            "obj1": meta.phrase_0[0],
            "obj1's action": meta.phrase_0[1],
            "obj2": meta.phrase_1[0],
            "obj2's action": meta.phrase_1[1],
        }
    elif stage is Stage.PREDICT and category is Category.INTERACTION:
        mapping = {"prompt": prompt_text}
    return template.render(mapping)


# ---------------------------------------------------------------------------
# response parsing

def _first_json_object(text: str) -> dict | None:
    decoder = json.JSONDecoder()
    start = text.find("{")
    while start != -1:
        try:
            obj, _ = decoder.raw_decode(text, start)
        except json.JSONDecodeError:
            start = text.find("{", start + 1)
            continue
        if isinstance(obj, dict):
            return obj
        start = text.find("{", start + 1)
    return None


_OPTION_RE = re.compile(r"([A-D])\s*([12])")


def parse_option_pair(text: str) -> tuple[str, str]:
    """Extract the two option letters from a judge answer.

    Accepts the JSON form ({"option": "A1, D2", ...}) or a bare "A1, D2"
    string, tolerating surrounding prose. The digit suffixes must match the
    question order, so "A2, B1" is rejected.
    """
    obj = _first_json_object(text)
    if obj is not None and "option" in obj:
        haystack = str(obj["option"])
    else:
        haystack = text
    matches = _OPTION_RE.findall(haystack)
    if len(matches) < 2:
        raise UnparseableResponseError(f"could not find two options in {text!r}")
    (letter1, suffix1), (letter2, suffix2) = matches[0], matches[1]
    if (suffix1, suffix2) != ("1", "2"):
        raise UnparseableResponseError(
            f"option suffixes must be 1 then 2, got {letter1}{suffix1}, {letter2}{suffix2}"
        )
    return letter1, letter2


#: Equal-spaced map over the four ordinal options.
OPTION_VALUES = {"A": 1.0, "B": 2.0 / 3.0, "C": 1.0 / 3.0, "D": 0.0}


def consist_attr_score(option_1: str, option_2: str) -> float:
    """Mean of the two per-phrase option values."""
    for opt in (option_1, option_2):
        if opt not in OPTION_VALUES:
            raise OutOfRangeError(f"option {opt!r} is not one of A/B/C/D")
    return (OPTION_VALUES[option_1] + OPTION_VALUES[option_2]) / 2.0


def parse_score_json(text: str, lo: int, hi: int) -> int:
    """Integer "score" field of the first JSON object in a judge answer."""
    if lo >= hi:
        raise ValueError("lo must be below hi")
    obj = _first_json_object(text)
    if obj is None:
        raise UnparseableResponseError(f"no JSON object in {text!r}")
    if "score" not in obj:
        raise UnparseableResponseError(f"no score field in {obj!r}")
    raw = obj["score"]
    if isinstance(raw, bool):
        raise UnparseableResponseError(f"score {raw!r} is not an integer")
    if isinstance(raw, int):
        value = raw
    elif isinstance(raw, float) and raw.is_integer():
        value = int(raw)
    elif isinstance(raw, str) and raw.strip().lstrip("-").isdigit():
        value = int(raw.strip())
    else:
        raise UnparseableResponseError(f"score {raw!r} is not an integer")
    if not lo <= value <= hi:
        raise OutOfRangeError(f"score {value} outside [{lo}, {hi}]")
    return value


def action_score(n: int) -> float:
    """Map the 0..5 action rubric onto [0, 1]."""
    if not 0 <= n <= 5:
        raise OutOfRangeError(f"action rubric score {n} outside 0..5")
    return n / 5.0


def interaction_score(n: int) -> float:
    """Map the 1..5 interaction rubric onto [0, 1]."""
    if not 1 <= n <= 5:
        raise OutOfRangeError(f"interaction rubric score {n} outside 1..5")
    return (n - 1) / 4.0


# ---------------------------------------------------------------------------
# dynamic-attribute scoring

@dataclass(frozen=True)
class EndpointScores:
    """Rubric scores of the first frame vs the initial state and the last
    frame vs the final state, each 1..5."""

    s_first_vs_state0: int
    s_last_vs_state1: int

    def __post_init__(self) -> None:
        for value in (self.s_first_vs_state0, self.s_last_vs_state1):
            if not 1 <= value <= 5:
                raise OutOfRangeError(f"endpoint score {value} outside 1..5")


def transition_credit(labels: Sequence[int]) -> float:
    """Best fit of the intermediate-frame labels to a monotone 2->1 step.

    For every split m, count labels equal to 2 before the split plus labels
    equal to 1 after it; the credit is the best count over all splits,
    divided by the number of labels.
    """
    if len(labels) == 0:
        raise EmptyInputError("transition_credit needs at least one label")
    if any(label not in (0, 1, 2) for label in labels):
        raise ValueError(f"labels must be 0, 1, or 2, got {list(labels)}")
    n = len(labels)
    prefix_twos = [0]
    for label in labels:
        prefix_twos.append(prefix_twos[-1] + (label == 2))
    total_ones = sum(1 for label in labels if label == 1)
    prefix_ones = [0]
    for label in labels:
        prefix_ones.append(prefix_ones[-1] + (label == 1))
    best = max(prefix_twos[m] + (total_ones - prefix_ones[m]) for m in range(n + 1))
    return best / n


def combine_dynamic_components(e0: float, e1: float, credit: float) -> float:
    """Blend already-normalized endpoint components with the transition
    credit; the evaluator uses this directly when a judge turn failed and a
    component degraded to 0."""
    return (e0 + e1 + credit) / 3.0


def dynamic_attr_score(endpoints: EndpointScores, labels: Sequence[int]) -> float:
    """Equal-weight blend of the two normalized endpoint scores and the
    transition credit of the intermediate frames."""
    e0 = (endpoints.s_first_vs_state0 - 1) / 4.0
    e1 = (endpoints.s_last_vs_state1 - 1) / 4.0
    return combine_dynamic_components(e0, e1, transition_credit(labels))
