import numpy as np
import pytest

from videval.core import NumeracyMeta, SpatialMeta, SpatialRelation
from videval.errors import DimensionMismatchError, EmptyInputError, EmptyMaskError
from videval.gateway import BoundingBox, Detection, DepthMap, Mask
from videval.geometry import (
    FrameScore,
    best_pair,
    eval_2d_relation,
    frame_numeracy_score,
    frame_spatial_score_2d,
    frame_spatial_score_3d,
    iou,
    object_depth,
    video_score,
)


def det(query, box, conf):
    return Detection(query, BoundingBox(*box), conf)


def oracle_iou(a, b):
    # direct area arithmetic on raw tuples, independent of BoundingBox
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    return inter / union


# ---------------------------------------------------------------------------
# IoU

def test_iou_identical():
    box = BoundingBox(1, 2, 5, 9)
    assert iou(box, box) == 1.0


def test_iou_disjoint():
    assert iou(BoundingBox(0, 0, 1, 1), BoundingBox(5, 5, 6, 6)) == 0.0


def test_iou_hand_computed():
    value = iou(BoundingBox(0, 0, 10, 10), BoundingBox(5, 0, 15, 10))
    assert value == 50 / 150
    assert value == oracle_iou((0, 0, 10, 10), (5, 0, 15, 10))


def test_iou_symmetry_and_range():
    rng = np.random.default_rng(2)
    for _ in range(500):
        x0, y0 = rng.uniform(0, 50, 2)
        a = BoundingBox(x0, y0, x0 + rng.uniform(1, 20), y0 + rng.uniform(1, 20))
        x0, y0 = rng.uniform(0, 50, 2)
        b = BoundingBox(x0, y0, x0 + rng.uniform(1, 20), y0 + rng.uniform(1, 20))
        v = iou(a, b)
        assert v == iou(b, a)
        assert 0.0 <= v <= 1.0
        assert v == oracle_iou(a.as_tuple(), b.as_tuple())


# ---------------------------------------------------------------------------
# 2D relation rule

def test_2d_rule_examples():
    assert eval_2d_relation((100, 100), (200, 120), SpatialRelation.LEFT) is True
    assert eval_2d_relation((100, 100), (200, 120), SpatialRelation.ABOVE) is False
    for rel in (SpatialRelation.LEFT, SpatialRelation.RIGHT,
                SpatialRelation.ABOVE, SpatialRelation.BELOW):
        assert eval_2d_relation((50, 50), (50, 50), rel) is False


def test_2d_rule_rejects_3d_relations():
    with pytest.raises(ValueError):
        eval_2d_relation((0, 0), (1, 1), SpatialRelation.BEHIND)


def test_2d_rule_antisymmetry_and_exclusivity():
    rng = np.random.default_rng(4)
    rels = (SpatialRelation.LEFT, SpatialRelation.RIGHT,
            SpatialRelation.ABOVE, SpatialRelation.BELOW)
    for _ in range(2000):
        c1 = tuple(rng.uniform(0, 100, 2))
        c2 = tuple(rng.uniform(0, 100, 2))
        assert eval_2d_relation(c1, c2, SpatialRelation.LEFT) == \
            eval_2d_relation(c2, c1, SpatialRelation.RIGHT)
        assert eval_2d_relation(c1, c2, SpatialRelation.ABOVE) == \
            eval_2d_relation(c2, c1, SpatialRelation.BELOW)
        assert sum(eval_2d_relation(c1, c2, rel) for rel in rels) <= 1


# ---------------------------------------------------------------------------
# 2D frame score

LEFT_META = SpatialMeta(SpatialRelation.LEFT, "cat", "dog")


def test_2d_frame_score_single_pair():
    # pair IoU is 1/3 by construction
    dets = [det("cat", (0, 0, 10, 10), 0.9), det("dog", (5, 0, 15, 10), 0.8)]
    assert oracle_iou((0, 0, 10, 10), (5, 0, 15, 10)) == pytest.approx(1 / 3)
    score = frame_spatial_score_2d(dets, LEFT_META)
    assert score.score == 1.0 - 50 / 150
    assert score.selected_pair == (dets[0], dets[1])


def test_2d_frame_score_relation_violated():
    dets = [det("cat", (20, 0, 30, 10), 0.9), det("dog", (0, 0, 10, 10), 0.8)]
    assert frame_spatial_score_2d(dets, LEFT_META).score == 0.0


def test_2d_frame_score_missing_object():
    dets = [det("cat", (0, 0, 10, 10), 0.9)]
    assert frame_spatial_score_2d(dets, LEFT_META).score == 0.0


def test_2d_frame_score_picks_max_confidence_product():
    good = det("cat", (0, 0, 10, 10), 0.9)
    weak = det("cat", (0, 20, 10, 30), 0.2)
    dog = det("dog", (40, 0, 50, 10), 0.8)
    score = frame_spatial_score_2d([weak, good, dog], LEFT_META)
    assert score.selected_pair == (good, dog)


def test_2d_frame_score_same_query_excludes_identical_boxes():
    meta = SpatialMeta(SpatialRelation.LEFT, "cat", "cat")
    one = det("cat", (0, 0, 10, 10), 0.9)
    two = det("cat", (40, 0, 50, 10), 0.8)
    score = frame_spatial_score_2d([one, two], meta)
    assert score.selected_pair == (one, two)
    assert frame_spatial_score_2d([one], meta).score == 0.0


def test_2d_frame_score_nonzero_is_one_minus_pair_iou():
    rng = np.random.default_rng(9)
    for _ in range(200):
        dets = []
        for query in ("cat", "dog"):
            for _ in range(rng.integers(0, 3)):
                x0, y0 = rng.uniform(0, 80, 2)
                dets.append(det(query, (x0, y0, x0 + rng.uniform(1, 30), y0 + rng.uniform(1, 30)),
                                float(rng.uniform(0.01, 1))))
        result = frame_spatial_score_2d(dets, LEFT_META)
        if result.score > 0:
            a, b = result.selected_pair
            assert result.score == 1.0 - iou(a.box, b.box)


# ---------------------------------------------------------------------------
# depth

def make_mask(h, w, pixels):
    bitmap = np.zeros((h, w), dtype=bool)
    for y, x in pixels:
        bitmap[y, x] = True
    return Mask(0, "obj", bitmap)


def test_object_depth_three_pixel_mean():
    depth = DepthMap(0, np.array([[1.0, 2.0], [3.0, 9.0]]))
    mask = make_mask(2, 2, [(0, 0), (0, 1), (1, 0)])
    assert object_depth(mask, depth) == 2.0


def test_object_depth_full_frame_constant():
    depth = DepthMap(0, np.full((3, 3), 5.0))
    mask = Mask(0, "obj", np.ones((3, 3), dtype=bool))
    assert object_depth(mask, depth) == 5.0


def test_object_depth_size_mismatch():
    depth = DepthMap(0, np.full((3, 3), 5.0))
    mask = Mask(0, "obj", np.ones((2, 3), dtype=bool))
    with pytest.raises(DimensionMismatchError):
        object_depth(mask, depth)


def test_object_depth_empty_mask():
    depth = DepthMap(0, np.full((2, 2), 5.0))
    with pytest.raises(EmptyMaskError):
        object_depth(Mask(0, "obj", np.zeros((2, 2), dtype=bool)), depth)


# ---------------------------------------------------------------------------
# 3D frame score

def front_setup(d_cat, d_sofa):
    dets = [det("cat", (0, 0, 2, 2), 0.9), det("sofa", (2, 0, 4, 2), 0.8)]
    bitmap_cat = np.zeros((2, 4), dtype=bool)
    bitmap_cat[:, :2] = True
    bitmap_sofa = np.zeros((2, 4), dtype=bool)
    bitmap_sofa[:, 2:] = True
    masks = {"cat": Mask(0, "cat", bitmap_cat), "sofa": Mask(0, "sofa", bitmap_sofa)}
    values = np.zeros((2, 4))
    values[:, :2] = d_cat
    values[:, 2:] = d_sofa
    return dets, masks, DepthMap(0, values)


def test_3d_in_front_of_scores_one_when_nearer():
    dets, masks, depth = front_setup(2.0, 5.0)
    meta = SpatialMeta(SpatialRelation.IN_FRONT_OF, "cat", "sofa")
    assert frame_spatial_score_3d(dets, masks, depth, meta).score == 1.0


def test_3d_behind_scores_zero_when_nearer():
    dets, masks, depth = front_setup(2.0, 5.0)
    meta = SpatialMeta(SpatialRelation.BEHIND, "cat", "sofa")
    assert frame_spatial_score_3d(dets, masks, depth, meta).score == 0.0


def test_3d_depth_tie_scores_zero():
    dets, masks, depth = front_setup(3.0, 3.0)
    for rel in (SpatialRelation.IN_FRONT_OF, SpatialRelation.BEHIND):
        meta = SpatialMeta(rel, "cat", "sofa")
        assert frame_spatial_score_3d(dets, masks, depth, meta).score == 0.0


def test_3d_relation_inversion_flips_score():
    rng = np.random.default_rng(13)
    for _ in range(100):
        d1, d2 = rng.uniform(0.1, 9.0, 2)
        dets, masks, depth = front_setup(d1, d2)
        front = frame_spatial_score_3d(
            dets, masks, depth, SpatialMeta(SpatialRelation.IN_FRONT_OF, "cat", "sofa")).score
        behind = frame_spatial_score_3d(
            dets, masks, depth, SpatialMeta(SpatialRelation.BEHIND, "cat", "sofa")).score
        assert front + behind <= 1.0
        if abs(d1 - d2) > 1e-9 * max(abs(d1), abs(d2)):
            assert front + behind == 1.0


def test_3d_missing_mask_scores_zero():
    dets, masks, depth = front_setup(2.0, 5.0)
    meta = SpatialMeta(SpatialRelation.IN_FRONT_OF, "cat", "sofa")
    del masks["sofa"]
    assert frame_spatial_score_3d(dets, masks, depth, meta).score == 0.0


def test_3d_missing_object_scores_zero():
    meta = SpatialMeta(SpatialRelation.IN_FRONT_OF, "cat", "sofa")
    _, masks, depth = front_setup(2.0, 5.0)
    assert frame_spatial_score_3d([], masks, depth, meta).score == 0.0


def test_best_pair_uses_iou_tiebreak():
    a = det("cat", (0, 0, 10, 10), 0.5)
    b = det("cat", (100, 0, 110, 10), 0.5)
    target = det("dog", (0, 0, 10, 10), 0.8)  # overlaps a fully, b not at all
    assert best_pair([a, b, target], "cat", "dog") == (b, target)


# ---------------------------------------------------------------------------
# numeracy

def spread_boxes(n, row):
    return [((i * 20.0, row, i * 20.0 + 10.0, row + 10.0)) for i in range(n)]


def count_dets(spec):
    dets = []
    for row, (query, n) in enumerate(spec.items()):
        for box in spread_boxes(n, row * 20.0):
            dets.append(det(query, box, 0.9))
    return dets


def test_numeracy_exact_match():
    meta = NumeracyMeta(("bee", "butterfly"), (3, 5))
    score = frame_numeracy_score(count_dets({"bee": 3, "butterfly": 5}), meta)
    assert score.score == 1.0


def test_numeracy_half_match():
    meta = NumeracyMeta(("cat", "dog"), (2, 3))
    score = frame_numeracy_score(count_dets({"cat": 2, "dog": 1}), meta)
    assert score.score == 0.5


def test_numeracy_nothing_detected():
    meta = NumeracyMeta(("cat", "dog"), (2, 3))
    assert frame_numeracy_score([], meta).score == 0.0


# ---------------------------------------------------------------------------
# video score

def test_video_score_examples():
    def fs(value):
        return FrameScore(0, value)

    assert video_score([fs(1.0)] * 4) == 1.0
    assert video_score([fs(1.0), fs(0.0)]) == 0.5
    assert video_score([fs(2 / 3)] * 16) == pytest.approx(2 / 3)
    with pytest.raises(EmptyInputError):
        video_score([])


def test_frame_score_range_enforced():
    with pytest.raises(ValueError):
        FrameScore(0, 1.5)
