# Detection-based metrics: IoU, duplicate suppression, the 2D / 3D spatial
# rules, and generative numeracy.

import numpy as np

from videval import (
    BoundingBox,
    DepthMap,
    Detection,
    Mask,
    dedup_boxes,
    frame_numeracy_score,
    frame_spatial_score_2d,
    frame_spatial_score_3d,
    iou,
    video_score,
)
from videval.core import NumeracyMeta, SpatialMeta, SpatialRelation


def det(query, box, conf):
    return Detection(query, BoundingBox(*box), conf)


# In[1]: IoU basics
a = BoundingBox(0, 0, 10, 10)
b = BoundingBox(5, 0, 15, 10)
print("overlap IoU:", iou(a, b))        # 50 / 150
print("self IoU:", iou(a, a))

# In[2]: near-duplicate boxes of the same query are suppressed greedily
dets = [
    det("cat", (0, 0, 10, 10), 0.8),
    det("cat", (0, 0, 10, 10.4), 0.6),   # high IoU with the first
    det("dog", (0, 0, 10, 10), 0.7),     # different query, kept
]
print("after dedup:", [(d.query, d.confidence) for d in dedup_boxes(dets, 0.9)])

# In[3]: the 2D rule scores (1 - IoU) of the best satisfying pair
meta = SpatialMeta(SpatialRelation.LEFT, "toddler", "dog")
frame = [det("toddler", (16, 96, 80, 160), 0.9), det("dog", (160, 112, 224, 176), 0.8)]
score = frame_spatial_score_2d(frame, meta)
print("2D left-of score:", score.score)

# a violated relation scores zero
flipped = SpatialMeta(SpatialRelation.RIGHT, "toddler", "dog")
print("violated relation:", frame_spatial_score_2d(frame, flipped).score)

# In[4]: the 3D rule compares mean depths inside the two object masks
cat_mask = np.zeros((48, 64), dtype=bool)
cat_mask[10:30, 5:25] = True
sofa_mask = np.zeros((48, 64), dtype=bool)
sofa_mask[10:30, 35:60] = True
depth = np.full((48, 64), 10.0)
depth[cat_mask] = 2.0    # nearer
depth[sofa_mask] = 5.0
dets3 = [det("cat", (5, 10, 25, 30), 0.9), det("sofa", (35, 10, 60, 30), 0.8)]
masks = {"cat": Mask(0, "cat", cat_mask), "sofa": Mask(0, "sofa", sofa_mask)}
meta3 = SpatialMeta(SpatialRelation.IN_FRONT_OF, "cat", "sofa")
print("3D in-front-of score:",
      frame_spatial_score_3d(dets3, masks, DepthMap(0, depth), meta3).score)

# In[5]: numeracy is the fraction of classes with an exact count match
meta_n = NumeracyMeta(("bee", "butterfly"), (3, 5))
bees = [det("bee", (20 * i, 0, 20 * i + 10, 10), 0.9) for i in range(3)]
flies = [det("butterfly", (20 * i, 20, 20 * i + 10, 30), 0.9) for i in range(5)]
print("exact counts:", frame_numeracy_score(bees + flies, meta_n).score)
print("one class off:", frame_numeracy_score(bees + flies[:4], meta_n).score)

# In[6]: the video score is the mean over per-frame scores
frames = [frame_spatial_score_2d(frame, meta) for _ in range(12)]
frames += [frame_spatial_score_2d(frame, flipped) for _ in range(4)]
print("video score over 16 frames:", video_score(frames))
