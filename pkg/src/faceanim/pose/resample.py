"""Temporal resampling of pose sequences."""

from __future__ import annotations

import math

from ..errors import BadFps
from .types import PoseFrame, PoseSequence


def resample_pose(seq: PoseSequence, target_fps: float) -> PoseSequence:
    """Resample to target_fps by linear interpolation on the source timeline.

    Output frame k sits at time k/target_fps; the frame count preserves the
    first-to-last span, so total duration matches the input within one output
    frame period. Interpolated confidence is the min of the bracketing frames.
    """
    if target_fps <= 0:
        raise BadFps(f"target fps must be positive, got {target_fps}")

    n_src = len(seq.frames)
    ratio = seq.fps / target_fps
    n_out = max(1, int(round((n_src - 1) * target_fps / seq.fps)) + 1)

    frames = []
    for k in range(n_out):
        p = min(max(k * ratio, 0.0), n_src - 1)
        i0 = int(math.floor(p))
        i1 = min(i0 + 1, n_src - 1)
        w = p - i0
        if w == 0.0 or i0 == i1:
            frames.append(seq.frames[i0])
            continue
        a, b = seq.frames[i0].keypoints, seq.frames[i1].keypoints
        pts = [
            ((1.0 - w) * ax + w * bx, (1.0 - w) * ay + w * by, min(ac, bc))
            for (ax, ay, ac), (bx, by, bc) in zip(a, b)
        ]
        frames.append(PoseFrame.from_points(pts))

    return PoseSequence(
        fps=float(target_fps), width=seq.width, height=seq.height,
        frames=frames, schema_id=seq.schema_id,
    )
