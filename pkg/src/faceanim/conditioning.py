"""Face localization and motion-frame conditioning.

Two mechanisms feed the generator: a face region derived from landmarks
(used to mask the reference image so generation stays localized and the
background stays stable), and a window of consecutive prior frames that is
channel-concatenated with the reference for temporal continuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import NoFace, OutOfRange, ShapeMismatch
from .pose.types import PoseFrame

DEFAULT_MARGIN_RATIO = 0.10
DEFAULT_N_MOTION = 2
MOTION_COUNTS = (0, 1, 2, 4)


@dataclass(frozen=True)
class FaceRegion:
    """Axis-aligned face bounding box plus its rasterized binary mask."""

    bbox: Tuple[float, float, float, float]  # (x0, y0, x1, y1), normalized
    mask: np.ndarray  # H x W float32, 1 inside the pixel-rounded bbox

    def __post_init__(self):
        x0, y0, x1, y1 = self.bbox
        if not (0.0 <= x0 < x1 <= 1.0 and 0.0 <= y0 < y1 <= 1.0):
            raise ValueError(f"degenerate bbox {self.bbox}")


@dataclass(frozen=True)
class MaskedReference:
    pixels: np.ndarray  # H x W x 3


@dataclass(frozen=True)
class MotionWindow:
    """n consecutive frames plus provenance of where they were cut from."""

    frames: Tuple[np.ndarray, ...]
    source_id: str
    start: int

    def __len__(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class ReferenceStack:
    """Reference image channel-concatenated with motion frames.

    Channels [0,3) are the reference; [3(k+1), 3(k+2)) is motion frame k,
    oldest first.
    """

    pixels: np.ndarray  # H x W x 3(n+1)

    @property
    def n_motion(self) -> int:
        return self.pixels.shape[-1] // 3 - 1

    def reference(self) -> np.ndarray:
        return self.pixels[..., 0:3]

    def motion_frame(self, k: int) -> np.ndarray:
        return self.pixels[..., 3 * (k + 1): 3 * (k + 2)]


def rasterize_bbox(bbox, height: int, width: int) -> np.ndarray:
    """Binary mask, 1 exactly inside the pixel-rounded bbox."""
    x0, y0, x1, y1 = bbox
    ix0 = int(round(x0 * width))
    ix1 = int(round(x1 * width))
    iy0 = int(round(y0 * height))
    iy1 = int(round(y1 * height))
    ix1 = max(ix1, ix0 + 1)
    iy1 = max(iy1, iy0 + 1)
    mask = np.zeros((height, width), dtype=np.float32)
    mask[iy0:iy1, ix0:ix1] = 1.0
    return mask


def locate_face(landmarks: PoseFrame, margin_ratio: float = DEFAULT_MARGIN_RATIO,
                height: int = 512, width: int = 512) -> FaceRegion:
    """Hull of confident landmarks, dilated by margin_ratio x hull diagonal.

    Landmarks with confidence 0 never affect the hull. Fewer than 3
    confident landmarks means the image is unusable as a reference.
    """
    if margin_ratio < 0:
        raise ValueError("margin_ratio must be >= 0")
    pts = [(x, y) for x, y, c in landmarks.keypoints if c > 0]
    if len(pts) < 3:
        raise NoFace(f"only {len(pts)} confident landmarks, need >= 3")

    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    diag = math.sqrt((x1 - x0) ** 2 + (y1 - y0) ** 2)
    pad = margin_ratio * diag
    bbox = (
        max(0.0, x0 - pad), max(0.0, y0 - pad),
        min(1.0, x1 + pad), min(1.0, y1 + pad),
    )
    if bbox[0] >= bbox[2] or bbox[1] >= bbox[3]:
        raise NoFace("confident landmarks span a degenerate region")
    return FaceRegion(bbox=bbox, mask=rasterize_bbox(bbox, height, width))


def mask_reference(reference: np.ndarray, region: FaceRegion) -> MaskedReference:
    """Elementwise product of the reference with the region mask."""
    reference = np.asarray(reference)
    if reference.shape[:2] != region.mask.shape:
        raise ShapeMismatch(
            f"image {reference.shape[:2]} vs mask {region.mask.shape}")
    # where() keeps inside pixels bit-exact instead of multiplying by 1.0
    out = np.where(region.mask[..., None] > 0, reference, 0).astype(reference.dtype)
    return MaskedReference(pixels=out)


def sample_motion_window(clip: List[np.ndarray], start: int, n: int,
                         source_id: str = "") -> MotionWindow:
    if start < 0 or n < 0 or start + n > len(clip):
        raise OutOfRange(
            f"window [{start}, {start + n}) out of clip of {len(clip)} frames")
    return MotionWindow(frames=tuple(np.asarray(f) for f in clip[start:start + n]),
                        source_id=source_id, start=start)


def stack_reference(reference: np.ndarray, window: MotionWindow) -> ReferenceStack:
    reference = np.asarray(reference)
    for f in window.frames:
        if f.shape != reference.shape:
            raise ShapeMismatch(
                f"motion frame {f.shape} vs reference {reference.shape}")
    pixels = np.concatenate([reference, *window.frames], axis=-1) \
        if window.frames else reference.copy()
    return ReferenceStack(pixels=pixels)
