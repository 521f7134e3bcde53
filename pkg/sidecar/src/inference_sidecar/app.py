"""FastAPI application exposing the perception wire protocol.

One process serves all five tasks. In stub mode no weights are loaded and
requests are answered by deterministic stand-ins; otherwise each task's
model must be loadable at startup, and requests within a task are
serialized while different tasks may interleave.
"""
from __future__ import annotations

import binascii
import threading
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from PIL import UnidentifiedImageError
from pydantic import BaseModel, Field

from .config import TASKS, SidecarConfig
from .stubs import stub_response

#: Deployment hook: register real model runners per task. Each loader takes
#: (model identifier, device) and returns a callable payload -> payload.
MODEL_LOADERS: dict[str, Callable[[str, str], Callable[[dict], dict]]] = {}


class ModelLoadError(RuntimeError):
    pass


class DetectRequest(BaseModel):
    image_b64: str
    queries: list[str] = Field(min_length=1)
    box_threshold: float = 0.0


class SegmentRequest(BaseModel):
    image_b64: str
    box: list[float] = Field(min_length=4, max_length=4)


class DepthRequest(BaseModel):
    image_b64: str


class TrackRequest(BaseModel):
    frames_b64: list[str] = Field(min_length=1)
    fps: float = Field(gt=0)
    grid_stride: int = Field(default=8, gt=0)


class MllmRequest(BaseModel):
    images_b64: list[str] = Field(min_length=1)
    turns: list[str] = Field(min_length=1, max_length=2)


def _load_models(config: SidecarConfig) -> dict[str, Callable[[dict], dict]]:
    runners: dict[str, Callable[[dict], dict]] = {}
    for task in TASKS:
        identifier = config.models.get(task)
        if identifier is None:
            raise ModelLoadError(f"no model configured for task {task!r}")
        loader = MODEL_LOADERS.get(task)
        if loader is None:
            raise ModelLoadError(
                f"no loader registered for task {task!r} (model {identifier!r}); "
                "install a model backend or run with stub mode"
            )
        runners[task] = loader(identifier, config.device)
    return runners


def create_app(config: SidecarConfig) -> FastAPI:
    app = FastAPI(title="inference-sidecar")

    if config.stub_mode:
        runners = {task: (lambda payload, _task=task: stub_response(_task, payload))
                   for task in TASKS}
        locks: dict[str, threading.Lock] | None = None  # stub is fully concurrent
    else:
        runners = _load_models(config)
        locks = {task: threading.Lock() for task in TASKS}

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    def run(task: str, payload: dict) -> JSONResponse:
        try:
            if locks is None:
                result = runners[task](payload)
            else:
                with locks[task]:
                    result = runners[task](payload)
        except (ValueError, KeyError, binascii.Error, UnidentifiedImageError) as exc:
            return JSONResponse(status_code=400, content={"error": f"bad request: {exc}"})
        except Exception as exc:  # model failure
            return JSONResponse(status_code=500, content={"error": f"model error: {exc}"})
        return JSONResponse(result)

    @app.get("/health")
    def health():
        return {
            "tasks": list(TASKS),
            "stub": config.stub_mode,
            "models": dict(config.models),
            "device": config.device,
        }

    @app.post("/detect")
    def detect(request: DetectRequest):
        return run("detect", request.model_dump())

    @app.post("/segment")
    def segment(request: SegmentRequest):
        return run("segment", request.model_dump())

    @app.post("/depth")
    def depth(request: DepthRequest):
        return run("depth", request.model_dump())

    @app.post("/track")
    def track(request: TrackRequest):
        return run("track", request.model_dump())

    @app.post("/mllm")
    def mllm(request: MllmRequest):
        return run("mllm", request.model_dump())

    return app


def serve(config: SidecarConfig) -> None:
    """Run the service until interrupted. Fails at startup when model
    weights are missing and stub mode is off."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=config.port, log_level="warning")
