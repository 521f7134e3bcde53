import json
import math

import numpy as np
import pytest

from videval.errors import DimensionMismatchError
from videval.frames import (
    PlanPurpose,
    VideoAsset,
    compose_grid,
    resample_to_fps,
    uniform_indices,
)


def floor_interp(n_total, k):
    # independent statement of the sampling rule
    return [math.floor(i * (n_total - 1) / (k - 1)) for i in range(k)]


def test_uniform_identity():
    assert uniform_indices(16, 16) == list(range(16))


def test_uniform_10_of_6():
    assert floor_interp(10, 6) == [0, 1, 3, 5, 7, 9]
    assert uniform_indices(10, 6) == [0, 1, 3, 5, 7, 9]


def test_uniform_shorter_than_k():
    assert floor_interp(3, 6) == [0, 0, 0, 1, 1, 2]
    assert uniform_indices(3, 6) == [0, 0, 0, 1, 1, 2]


def test_uniform_single():
    assert uniform_indices(100, 1) == [0]
    assert uniform_indices(1, 6) == [0, 0, 0, 0, 0, 0]


def test_uniform_properties_brute_force():
    for n_total in range(1, 60):
        for k in range(2, 20):
            got = uniform_indices(n_total, k)
            assert got == floor_interp(n_total, k)
            assert got[0] == 0 and got[-1] == n_total - 1
            assert all(b >= a for a, b in zip(got, got[1:]))
            if n_total >= k:
                gaps = [b - a for a, b in zip(got, got[1:])]
                assert max(gaps) - min(gaps) <= 1


def test_resample_24fps_to_8():
    plan = resample_to_fps(24.0, 48, 8.0)
    assert list(plan.indices) == [3 * j for j in range(16)]
    assert plan.purpose is PlanPurpose.TRACKING
    assert plan.fps == 8.0


def test_resample_identity_at_same_rate():
    plan = resample_to_fps(8.0, 16, 8.0)
    assert list(plan.indices) == list(range(16))


def test_resample_half_up_rounding_with_dedup():
    # oracle: floor(1.25 j + 0.5), consecutive duplicates collapsed
    expected = []
    j = 0
    while True:
        idx = math.floor(1.25 * j + 0.5)
        if idx >= 36:
            break
        if not expected or expected[-1] != idx:
            expected.append(idx)
        j += 1
    assert expected[:12] == [0, 1, 3, 4, 5, 6, 8, 9, 10, 11, 13, 14]
    assert list(resample_to_fps(10.0, 36, 8.0).indices) == expected


def test_resample_upsampling_collapses_duplicates():
    plan = resample_to_fps(4.0, 8, 8.0)  # every source frame hit twice
    assert list(plan.indices) == list(range(8))


def test_compose_grid_dimensions():
    frames = [np.full((320, 512, 3), i, dtype=np.uint8) for i in range(6)]
    grid = compose_grid(frames)
    assert grid.shape == (640, 1536, 3)
    assert (grid[:320, :512] == 0).all()          # frame 0 top-left
    assert (grid[320:, 1024:] == 5).all()         # frame 5 bottom-right


def test_compose_grid_solid_color():
    red = np.zeros((32, 48, 3), dtype=np.uint8)
    red[:, :, 0] = 255
    grid = compose_grid([red] * 6)
    assert grid.shape == (64, 144, 3)
    assert (grid == red[0, 0]).all()


def test_compose_grid_cell_extraction_roundtrip():
    rng = np.random.default_rng(7)
    frames = [rng.integers(0, 256, size=(20, 30, 3), dtype=np.uint8) for _ in range(6)]
    grid = compose_grid(frames)
    for idx, frame in enumerate(frames):
        row, col = divmod(idx, 3)
        cell = grid[row * 20:(row + 1) * 20, col * 30:(col + 1) * 30]
        assert (cell == frame).all()


def test_compose_grid_rejects_mixed_sizes():
    frames = [np.zeros((8, 8, 3), dtype=np.uint8)] * 5 + [np.zeros((8, 9, 3), dtype=np.uint8)]
    with pytest.raises(DimensionMismatchError):
        compose_grid(frames)
    with pytest.raises(ValueError):
        compose_grid(frames[:5])


def test_video_asset_from_frame_dir(tmp_path, mini_assets):
    video = VideoAsset.from_frame_dir(mini_assets.videos_dir / "spatial-0000")
    assert video.video_id == "spatial-0000"
    assert video.frame_count == 16
    assert video.frame(0).shape == (256, 256, 3)
    ref = video.frame_ref(3)
    assert (ref.video_id, ref.frame_index) == ("spatial-0000", 3)

    bad = tmp_path / "bad"
    bad.mkdir()
    (bad / "video.json").write_text(json.dumps(
        {"video_id": "bad", "fps": 8, "width": 10, "height": 10}))
    with pytest.raises(Exception):
        VideoAsset.from_frame_dir(bad)  # no frames


def test_video_asset_from_arrays():
    frames = [np.zeros((4, 6, 3), dtype=np.uint8)] * 3
    video = VideoAsset.from_arrays("clip", 8.0, frames)
    assert (video.width, video.height, video.frame_count) == (6, 4, 3)
    with pytest.raises(DimensionMismatchError):
        VideoAsset.from_arrays("clip", 8.0, frames + [np.zeros((4, 7, 3), np.uint8)])
