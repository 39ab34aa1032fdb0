"""Pose data model: keypoint frames and timed sequences."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

SCHEMAS = {
    "face68": 68,
    "body133": 133,
}

DEFAULT_SCHEMA = "face68"

# iBUG 68-landmark groups, used for rendering colors and the audio stub.
FACE68_GROUPS = {
    "jaw": range(0, 17),
    "brows": range(17, 27),
    "nose": range(27, 36),
    "eyes": range(36, 48),
    "mouth": range(48, 68),
}

# Lower-lip landmarks displaced downward by the energy-to-mouth audio stub.
FACE68_LOWER_LIP = (55, 56, 57, 58, 59, 65, 66, 67)


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


@dataclass(frozen=True)
class PoseFrame:
    """One frame of normalized facial keypoints.

    Each keypoint is (x, y, confidence), all in [0, 1].
    """

    keypoints: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self):
        for x, y, c in self.keypoints:
            if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0 and 0.0 <= c <= 1.0):
                raise ValueError(f"keypoint out of range: ({x}, {y}, {c})")

    @staticmethod
    def from_points(points) -> "PoseFrame":
        """Build a frame from any iterable of (x, y, c), clamping to [0, 1]."""
        return PoseFrame(tuple(
            (_clamp01(float(x)), _clamp01(float(y)), _clamp01(float(c)))
            for x, y, c in points
        ))

    @staticmethod
    def zeros(count: int) -> "PoseFrame":
        return PoseFrame(((0.0, 0.0, 0.0),) * count)

    def __len__(self) -> int:
        return len(self.keypoints)


@dataclass
class PoseSequence:
    """Ordered keypoint frames with timing and source-canvas metadata."""

    fps: float
    width: int
    height: int
    frames: List[PoseFrame]
    schema_id: str = DEFAULT_SCHEMA

    def __post_init__(self):
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        if not self.frames:
            raise ValueError("frames must be non-empty")
        expected = SCHEMAS.get(self.schema_id)
        if expected is not None:
            for i, f in enumerate(self.frames):
                if len(f) != expected:
                    raise ValueError(
                        f"frame {i} has {len(f)} keypoints, schema "
                        f"{self.schema_id!r} requires {expected}"
                    )

    @property
    def duration_s(self) -> float:
        return len(self.frames) / self.fps

    def __len__(self) -> int:
        return len(self.frames)
