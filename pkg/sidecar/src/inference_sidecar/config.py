"""Sidecar configuration: one file or flags, device via environment."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

TASKS = ("detect", "segment", "depth", "track", "mllm")

DEVICE_ENV_VAR = "INFERENCE_SIDECAR_DEVICE"


@dataclass(frozen=True)
class SidecarConfig:
    port: int = 9151
    device: str = "cpu"
    models: dict = field(default_factory=dict)  # task -> model identifier
    stub_mode: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.port < 65536:
            raise ValueError(f"port {self.port} out of range")
        unknown = set(self.models) - set(TASKS)
        if unknown:
            raise ValueError(f"unknown model tasks: {sorted(unknown)}")
        if self.stub_mode and self.models:
            raise ValueError("stub mode loads no model weights; drop the models map")

    @classmethod
    def from_file(cls, path: str | Path) -> "SidecarConfig":
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        obj.setdefault("device", os.environ.get(DEVICE_ENV_VAR, "cpu"))
        return cls(**obj)
