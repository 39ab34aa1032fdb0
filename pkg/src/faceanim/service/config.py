"""Service deployment configuration."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

DEFAULT_WIDTH = 512
DEFAULT_HEIGHT = 512
DEFAULT_FPS = 24.0


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str = "faceanim-data"
    weights_path: Optional[str] = None
    library_dir: Optional[str] = None
    upload_limit_bytes: int = 100 * 1024 * 1024
    worker_count: int = 1
    lease_seconds: float = 120.0
    max_frames: int = 2400
    encode_backend: str = "auto"

    @property
    def artifact_dir(self) -> str:
        return str(Path(self.data_dir) / "artifacts")

    @property
    def job_dir(self) -> str:
        return str(Path(self.data_dir) / "jobs")

    @property
    def pose_library_dir(self) -> str:
        return self.library_dir or str(Path(self.data_dir) / "pose_library")

    @staticmethod
    def from_file(path) -> "ServiceConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return ServiceConfig(**doc)
