"""Compositional text-to-video evaluation engine.

Scores generated videos against structured prompt metadata across seven
compositionality categories using detection-based, tracking-based, and
MLLM-judge metrics, and correlates metric scores with human ratings.
"""

from .core import (
    CATEGORY_ORDER,
    ActionMeta,
    Category,
    ConsistAttrMeta,
    Direction,
    DynamicAttrMeta,
    EngineConfig,
    InteractionMeta,
    MotionMeta,
    NumeracyMeta,
    PromptRecord,
    SpatialMeta,
    SpatialRelation,
    dump_prompt_suite,
    load_prompt_suite,
    parse_direction,
    validate_meta,
)
from .frames import FramePlan, FrameRef, PlanPurpose, VideoAsset, compose_grid, \
    resample_to_fps, uniform_indices
from .gateway import (
    BoundingBox,
    DepthMap,
    Detection,
    FixtureStore,
    HttpSidecar,
    Mask,
    MllmRequest,
    MllmResponse,
    TrackSet,
    TrackedPoint,
    dedup_boxes,
)
from .geometry import (
    FrameScore,
    eval_2d_relation,
    frame_numeracy_score,
    frame_spatial_score_2d,
    frame_spatial_score_3d,
    iou,
    object_depth,
    video_score,
)
from .judge import (
    EndpointScores,
    Stage,
    action_score,
    consist_attr_score,
    dynamic_attr_score,
    interaction_score,
    parse_option_pair,
    parse_score_json,
    render_prompt,
    transition_credit,
)
from .motion import (
    MotionVector,
    MotionVerdict,
    classify_direction,
    mean_displacement,
    motion_binding,
    motion_binding_score,
    relative_motion,
    split_tracks,
)
from .runner import (
    CorrelationResult,
    HumanRating,
    ScoreRecord,
    aggregate_human,
    correlate,
    evaluate_suite,
    evaluate_video,
    kendall_tau_b,
    spearman_rho,
    write_report,
)

__version__ = "0.1.0"
