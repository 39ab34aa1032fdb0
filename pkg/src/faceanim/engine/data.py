"""Frame-directory training datasets.

Layout: `<data_dir>/<clip>/frame_%05d.png` plus `<data_dir>/<clip>.pose.json`.
Each clip must hold at least n_motion + clip_len frames: the first n_motion
frames become the motion window, the next clip_len frames are the target.
"""

from __future__ import annotations

from pathlib import Path
from typing import List

import numpy as np

from ..conditioning import locate_face, mask_reference
from ..errors import IoError
from ..pose.io import load_pose
from ..pose.render import RenderStyle, render_pose_map
from .config import EngineConfig
from .training import TrainBatch, frames_to_tensor, image_to_tensor


def _load_frame(path: Path, size: int) -> np.ndarray:
    from PIL import Image
    img = Image.open(path).convert("RGB")
    if img.size != (size, size):
        img = img.resize((size, size), Image.BILINEAR)
    return np.asarray(img, dtype=np.float32) / 255.0


def load_clip_batch(clip_dir: Path, pose_path: Path,
                    config: EngineConfig,
                    style: RenderStyle = RenderStyle()) -> TrainBatch:
    size = config.image_size
    n, f = config.n_motion, config.clip_len
    frame_paths = sorted(clip_dir.glob("frame_*.png"))
    if len(frame_paths) < n + f:
        raise IoError(
            f"clip {clip_dir} has {len(frame_paths)} frames, needs "
            f">= {n + f}")
    frames = [_load_frame(p, size) for p in frame_paths[: n + f]]
    pose = load_pose(pose_path)
    if len(pose) < n + f:
        raise IoError(f"pose file {pose_path} shorter than the clip")

    window, target = frames[:n], frames[n: n + f]
    reference = target[0]
    pose_frames = pose.frames[n: n + f]
    region = locate_face(pose_frames[0], height=size, width=size)
    masked = mask_reference(reference, region)
    pose_maps = [render_pose_map(pf, size, size, style).pixels
                 for pf in pose_frames]

    return TrainBatch(
        clip=frames_to_tensor(target),
        reference=image_to_tensor(reference),
        pose_maps=frames_to_tensor(pose_maps),
        masked_ref=image_to_tensor(masked.pixels),
        motion_window=frames_to_tensor(window),
    )


def load_dataset(data_dir, config: EngineConfig) -> List[TrainBatch]:
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise IoError(f"no such data directory: {data_dir}")
    batches = []
    for clip_dir in sorted(p for p in data_dir.iterdir() if p.is_dir()):
        pose_path = data_dir / f"{clip_dir.name}.pose.json"
        if not pose_path.exists():
            raise IoError(f"missing pose file {pose_path}")
        batches.append(load_clip_batch(clip_dir, pose_path, config))
    if not batches:
        raise IoError(f"no clips found under {data_dir}")
    return batches
