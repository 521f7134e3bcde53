"""Stub-mode conformance: deterministic bytes and wire-schema validity.

Schema validity is checked with the evaluation engine's own payload
validators, i.e. exactly the checks that would raise ProtocolError on the
consuming side.
"""
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from inference_sidecar.app import ModelLoadError, create_app
from inference_sidecar.codecs import decode_image_b64, encode_f32_b64
from inference_sidecar.config import SidecarConfig

from videval import wire


@pytest.fixture(scope="module")
def client():
    app = create_app(SidecarConfig(stub_mode=True))
    return TestClient(app)


def png_b64(width=64, height=48, fill=7):
    import base64
    import io

    from PIL import Image

    arr = np.full((height, width, 3), fill, dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


REQUESTS = {
    "detect": {"image_b64": png_b64(), "queries": ["cat", "hot air balloon"],
               "box_threshold": 0.35},
    "segment": {"image_b64": png_b64(), "box": [10.0, 10.0, 40.0, 30.0]},
    "depth": {"image_b64": png_b64()},
    "track": {"frames_b64": [png_b64(fill=i) for i in range(4)], "fps": 8.0,
              "grid_stride": 16},
    "mllm": {"images_b64": [png_b64()],
             "turns": ["Describe the provided image.",
                       "Assign a score from 1 to 5 according to the criteria:"]},
}


def test_health_reports_tasks_and_stub_flag(client):
    started = time.monotonic()
    response = client.get("/health")
    elapsed = time.monotonic() - started
    assert response.status_code == 200
    body = response.json()
    assert body["stub"] is True
    assert body["tasks"] == ["detect", "segment", "depth", "track", "mllm"]
    assert elapsed < 0.1


@pytest.mark.parametrize("task", list(REQUESTS))
def test_identical_requests_identical_bytes(client, task):
    first = client.post(f"/{task}", json=REQUESTS[task])
    second = client.post(f"/{task}", json=REQUESTS[task])
    assert first.status_code == 200
    assert first.content == second.content


def test_detect_stub_schema_and_shape(client):
    body = client.post("/detect", json=REQUESTS["detect"]).json()
    parsed = wire.parse_detections(body)
    assert len(parsed) == 2
    for query, (x0, y0, x1, y1), confidence in parsed:
        assert query in REQUESTS["detect"]["queries"]
        assert confidence == 0.9
        # roughly centered in the 64x48 request image
        assert 0 <= x0 < 32 < x1 <= 64
        assert 0 <= y0 < 24 < y1 <= 48


def test_segment_stub_is_box_interior(client):
    body = client.post("/segment", json=REQUESTS["segment"]).json()
    bitmap = wire.parse_mask(body)
    assert bitmap.shape == (48, 64)
    assert bitmap[10:30, 10:40].all()
    assert bitmap.sum() == 20 * 30


def test_depth_stub_declares_convention(client):
    body = client.post("/depth", json=REQUESTS["depth"]).json()
    values, convention = wire.parse_depth(body)
    assert values.shape == (48, 64)
    assert convention == "inverse"


def test_track_stub_covers_every_frame(client):
    body = client.post("/track", json=REQUESTS["track"]).json()
    points = wire.parse_tracks(body, expected_len=4)
    assert len(points) == (48 // 16) * (64 // 16)
    for positions, visible in points:
        assert visible.all()


def test_mllm_stub_wraps_per_turn_count(client):
    body = client.post("/mllm", json=REQUESTS["mllm"]).json()
    texts = wire.parse_mllm_texts(body, n_turns=2)
    assert len(texts) == 2
    assert texts[-1] == '{"score": 3, "explanation": "stub"}'

    single = client.post("/mllm", json={
        "images_b64": REQUESTS["mllm"]["images_b64"],
        "turns": ["Give a score from 0 to 2, according to the criteria:"],
    }).json()
    assert wire.parse_mllm_texts(single, 1) == ['{"score": 1, "explanation": "stub"}']

    option = client.post("/mllm", json={
        "images_b64": REQUESTS["mllm"]["images_b64"],
        "turns": ["Describe.", "select one answer from options A1 to D1 ... "
                              "keys: option (e.g., A1, B2), explanation"],
    }).json()
    assert option["texts"][-1] == '{"option": "A1, A2", "explanation": "stub"}'


def test_malformed_body_is_400_with_error_json(client):
    response = client.post("/detect", json={"queries": []})
    assert response.status_code == 400
    assert "error" in response.json()

    response = client.post("/segment", json={"image_b64": png_b64(), "box": [1, 2]})
    assert response.status_code == 400


def test_undecodable_image_is_400(client):
    response = client.post("/depth", json={"image_b64": "not base64!!"})
    assert response.status_code == 400

    import base64
    garbage = base64.b64encode(b"definitely not a PNG").decode("ascii")
    response = client.post("/depth", json={"image_b64": garbage})
    assert response.status_code == 400


def test_non_stub_mode_fails_without_weights():
    with pytest.raises(ModelLoadError):
        create_app(SidecarConfig(stub_mode=False, models={"detect": "some-detector"}))
    with pytest.raises(ModelLoadError):
        create_app(SidecarConfig(stub_mode=False))


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        SidecarConfig(port=0)
    with pytest.raises(ValueError):
        SidecarConfig(stub_mode=True, models={"detect": "x"})
    with pytest.raises(ValueError):
        SidecarConfig(models={"translate": "x"})
    path = tmp_path / "config.json"
    path.write_text('{"port": 9200, "stub_mode": true}')
    config = SidecarConfig.from_file(path)
    assert config.port == 9200 and config.stub_mode


def test_depth_values_roundtrip():
    values = np.linspace(0, 1, 12, dtype=np.float32).reshape(3, 4)
    encoded = encode_f32_b64(values)
    assert wire.decode_f32_b64(encoded, 4, 3).astype(np.float32).tolist() == \
        values.tolist()


def test_codecs_image_roundtrip():
    arr = np.arange(27, dtype=np.uint8).reshape(3, 3, 3)
    assert (decode_image_b64(png_b64()) is not None)
    import base64
    import io

    from PIL import Image
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="PNG")
    encoded = base64.b64encode(buf.getvalue()).decode("ascii")
    assert (decode_image_b64(encoded) == arr).all()
