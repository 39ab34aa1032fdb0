"""Versioned single-file weight checkpoints."""

from __future__ import annotations

from dataclasses import asdict

import torch

from ..errors import BadConfig, ParseError
from .config import EngineConfig
from .models import FaceAnimationModel

CHECKPOINT_VERSION = 1


def save_checkpoint(model: FaceAnimationModel, path) -> None:
    torch.save({
        "version": CHECKPOINT_VERSION,
        "config": asdict(model.config),
        "state_dict": model.state_dict(),
    }, path)


def load_checkpoint(path) -> FaceAnimationModel:
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as e:
        raise ParseError(f"unreadable checkpoint {path}: {e}") from e
    if not isinstance(payload, dict) or payload.get("version") != CHECKPOINT_VERSION:
        raise ParseError(
            f"unsupported checkpoint version "
            f"{payload.get('version') if isinstance(payload, dict) else '?'}")
    try:
        config = EngineConfig(**payload["config"])
    except (TypeError, KeyError) as e:
        raise BadConfig(f"bad checkpoint config: {e}") from e
    model = FaceAnimationModel(config)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model
