import pytest

from videval.core import (
    ActionMeta,
    Category,
    ConsistAttrMeta,
    DynamicAttrMeta,
)
from videval.errors import (
    EmptyInputError,
    MissingPlaceholderError,
    OutOfRangeError,
    UnparseableResponseError,
)
from videval.judge import (
    EndpointScores,
    Stage,
    action_score,
    consist_attr_score,
    dynamic_attr_score,
    interaction_score,
    load_template,
    parse_option_pair,
    parse_score_json,
    render_prompt,
    transition_credit,
)

CONSIST_META = ConsistAttrMeta(("a blue car", "a white picket fence"))
DYNAMIC_META = DynamicAttrMeta("A green leaf", "A bright red leaf")
ACTION_META = ActionMeta(("a dog", "a dog runs through a field"),
                         ("a cat", "a cat climbs a tree"))


# ---------------------------------------------------------------------------
# rendering

def test_consist_describe_mentions_grid():
    text = render_prompt(Category.CONSIST_ATTR, Stage.DESCRIBE, CONSIST_META)
    assert "arranges key frames from a video in a grid view" in text


def test_consist_predict_substitutes_both_phrases():
    text = render_prompt(Category.CONSIST_ATTR, Stage.PREDICT, CONSIST_META)
    assert "A1: 'a blue car' is clearly portrayed throughout the frames." in text
    assert "D2: 'a white picket fence' is not present." in text
    assert "{phrase_1}" not in text


def test_action_predict_substitutes_objects_and_actions():
    text = render_prompt(Category.ACTION, Stage.PREDICT, ACTION_META,
                         "A dog runs through a field while a cat climbs a tree")
    assert "Both a dog and a cat are present" in text
    assert "a dog runs through a field, a cat climbs a tree." in text


def test_dynamic_endpoint_contains_both_states():
    text = render_prompt(Category.DYNAMIC_ATTR, Stage.ENDPOINT, DYNAMIC_META)
    assert "A green leaf" in text and "A bright red leaf" in text
    assert "Give a score from 1 to 5" in text


def test_dynamic_intermediate_labels_states():
    text = render_prompt(Category.DYNAMIC_ATTR, Stage.INTERMEDIATE, DYNAMIC_META)
    assert "2: the image matches with the text A green leaf." in text
    assert "Give a score from 0 to 2" in text


def test_interaction_predict_substitutes_prompt():
    text = render_prompt(Category.INTERACTION, Stage.PREDICT, None,
                         "Two cars collide at an intersection")
    assert "evaluate if the text Two cars collide at an intersection is" in text


def test_render_unresolved_placeholder_raises():
    template = load_template(Category.CONSIST_ATTR, Stage.PREDICT)
    with pytest.raises(MissingPlaceholderError):
        template.render({"phrase_1": "a blue car"})  # phrase_2 missing


def test_render_unknown_combination_raises():
    with pytest.raises(ValueError):
        load_template(Category.SPATIAL, Stage.PREDICT)
    with pytest.raises(ValueError):
        render_prompt(Category.ACTION, Stage.PREDICT, CONSIST_META, "text")


# ---------------------------------------------------------------------------
# option parsing

def test_parse_option_pair_json_form():
    assert parse_option_pair('{"option": "A1, D2", "explanation": "..."}') == ("A", "D")


def test_parse_option_pair_bare():
    assert parse_option_pair("B1,B2") == ("B", "B")


def test_parse_option_pair_swapped_suffixes_rejected():
    with pytest.raises(UnparseableResponseError):
        parse_option_pair("A2, B1")


def test_parse_option_pair_tolerates_prose():
    text = 'Sure! Here is my answer: {"option": "C1, A2", "explanation": "ok"}'
    assert parse_option_pair(text) == ("C", "A")


def test_parse_option_pair_garbage():
    with pytest.raises(UnparseableResponseError):
        parse_option_pair("no options here")


def test_consist_attr_score_map():
    assert consist_attr_score("A", "A") == 1.0
    assert consist_attr_score("A", "D") == 0.5
    assert consist_attr_score("C", "C") == pytest.approx(1 / 3)
    assert consist_attr_score("B", "B") == pytest.approx(2 / 3)
    with pytest.raises(OutOfRangeError):
        consist_attr_score("E", "A")


# ---------------------------------------------------------------------------
# score parsing

def test_parse_score_json_plain():
    assert parse_score_json('{"score": 5, "explanation": "ok"}', 0, 5) == 5


def test_parse_score_json_with_prose():
    text = 'The video shows a dog. {"score": 3, "explanation": "partial"} Thanks!'
    assert parse_score_json(text, 0, 5) == 3


def test_parse_score_json_out_of_range():
    with pytest.raises(OutOfRangeError):
        parse_score_json('{"score": 7}', 0, 5)


def test_parse_score_json_no_json():
    with pytest.raises(UnparseableResponseError):
        parse_score_json("score is five", 0, 5)


def test_parse_score_json_non_integer():
    with pytest.raises(UnparseableResponseError):
        parse_score_json('{"score": "high"}', 0, 5)
    with pytest.raises(UnparseableResponseError):
        parse_score_json('{"score": true}', 0, 5)
    assert parse_score_json('{"score": 4.0}', 0, 5) == 4
    assert parse_score_json('{"score": "2"}', 0, 5) == 2


def test_rubric_maps():
    assert action_score(5) == 1.0
    assert action_score(0) == 0.0
    assert action_score(3) == 0.6
    assert interaction_score(1) == 0.0
    assert interaction_score(5) == 1.0
    assert interaction_score(3) == 0.5
    with pytest.raises(OutOfRangeError):
        action_score(6)
    with pytest.raises(OutOfRangeError):
        interaction_score(0)


def test_rubric_maps_monotone():
    action = [action_score(n) for n in range(6)]
    assert action == sorted(action)
    inter = [interaction_score(n) for n in range(1, 6)]
    assert inter == sorted(inter)


# ---------------------------------------------------------------------------
# transition credit and dynamic score

def oracle_transition(labels):
    # literal best fit against every 2->1 step template
    n = len(labels)
    best = 0
    for m in range(n + 1):
        template = [2] * m + [1] * (n - m)
        best = max(best, sum(1 for got, want in zip(labels, template) if got == want))
    return best / n


def test_transition_credit_examples():
    assert transition_credit([2] * 7 + [1] * 7) == 1.0
    assert transition_credit([1] * 7 + [2] * 7) == 0.5
    assert transition_credit([0] * 14) == 0.0


def test_transition_credit_perfect_steps():
    for a in range(15):
        labels = [2] * a + [1] * (14 - a)
        assert transition_credit(labels) == 1.0


def test_transition_credit_matches_oracle_spot():
    import itertools
    for labels in itertools.product((0, 1, 2), repeat=6):
        assert transition_credit(list(labels)) == oracle_transition(list(labels))


def test_transition_credit_reversal_never_beats_perfect_step():
    for a in range(11):
        labels = [2] * a + [1] * (10 - a)
        assert transition_credit(labels) == 1.0
        assert transition_credit(labels[::-1]) <= 1.0


def test_transition_credit_validation():
    with pytest.raises(EmptyInputError):
        transition_credit([])
    with pytest.raises(ValueError):
        transition_credit([3])


def test_dynamic_attr_score_worked_examples():
    assert dynamic_attr_score(EndpointScores(5, 5), [2] * 7 + [1] * 7) == 1.0
    assert dynamic_attr_score(EndpointScores(1, 1), [1] * 7 + [2] * 7) == pytest.approx(1 / 6)
    assert dynamic_attr_score(EndpointScores(5, 1), [2] * 14) == pytest.approx(2 / 3)


def test_dynamic_attr_score_monotone_in_endpoints():
    labels = [2, 0, 1, 1, 2, 1]
    for s_last in range(1, 6):
        values = [dynamic_attr_score(EndpointScores(s, s_last), labels) for s in range(1, 6)]
        assert values == sorted(values)
    for s_first in range(1, 6):
        values = [dynamic_attr_score(EndpointScores(s_first, s), labels) for s in range(1, 6)]
        assert values == sorted(values)


def test_endpoint_scores_range():
    with pytest.raises(OutOfRangeError):
        EndpointScores(0, 3)
    with pytest.raises(OutOfRangeError):
        EndpointScores(3, 6)
