"""Deterministic rasterization of pose frames for the Pose Guider."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..errors import BadCanvas
from .types import FACE68_GROUPS, PoseFrame

DEFAULT_GROUP_COLORS: Dict[str, Tuple[float, float, float]] = {
    "jaw": (0.0, 1.0, 0.0),
    "brows": (1.0, 0.5, 0.0),
    "nose": (0.0, 0.5, 1.0),
    "eyes": (1.0, 0.0, 0.0),
    "mouth": (1.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class RenderStyle:
    radius: int = 2
    confidence_threshold: float = 0.05
    group_colors: Dict[str, Tuple[float, float, float]] = field(
        default_factory=lambda: dict(DEFAULT_GROUP_COLORS)
    )
    default_color: Tuple[float, float, float] = (1.0, 1.0, 1.0)


@dataclass(frozen=True)
class PoseMap:
    """Rendered keypoints on a black background, values in [0, 1]."""

    pixels: np.ndarray  # H x W x 3, float32


def _color_for(index: int, style: RenderStyle, n_points: int):
    if n_points == 68:
        for group, rng in FACE68_GROUPS.items():
            if index in rng:
                return style.group_colors.get(group, style.default_color)
    return style.default_color


def render_pose_map(frame: PoseFrame, width: int, height: int,
                    style: RenderStyle = RenderStyle()) -> PoseMap:
    if width < 8 or height < 8:
        raise BadCanvas(f"canvas {width}x{height} below 8x8 minimum")
    img = np.zeros((height, width, 3), dtype=np.float32)
    r = style.radius
    n = len(frame)
    for idx, (x, y, c) in enumerate(frame.keypoints):
        if c < style.confidence_threshold:
            continue
        cx = int(round(x * (width - 1)))
        cy = int(round(y * (height - 1)))
        color = _color_for(idx, style, n)
        y0, y1 = max(0, cy - r), min(height - 1, cy + r)
        x0, x1 = max(0, cx - r), min(width - 1, cx + r)
        ys = np.arange(y0, y1 + 1)
        xs = np.arange(x0, x1 + 1)
        dist2 = (ys[:, None] - cy) ** 2 + (xs[None, :] - cx) ** 2
        disk = dist2 <= r * r
        patch = img[y0:y1 + 1, x0:x1 + 1]
        patch[disk] = np.asarray(color, dtype=np.float32)
    return PoseMap(pixels=img)
