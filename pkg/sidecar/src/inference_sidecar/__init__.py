"""Inference sidecar: serves perception and judge models over HTTP behind
the evaluation engine's wire protocol, with a deterministic stub mode for
protocol testing."""

from .app import create_app, serve
from .config import SidecarConfig

__version__ = "0.1.0"
