"""Autoregressive clip-by-clip video generation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import torch

from ..conditioning import locate_face, mask_reference, stack_reference, MotionWindow
from ..errors import BadConfig
from ..pose.render import RenderStyle, render_pose_map
from ..pose.types import PoseFrame, PoseSequence
from .models import ConditioningBundle, FaceAnimationModel
from .schedule import ddim_step, ddim_timesteps, make_schedule
from .training import frames_to_tensor, image_to_tensor, tensor_to_image


@dataclass
class GenerationTrace:
    """Optional record of per-clip internals for testing and debugging."""

    clip_ranges: List[tuple] = field(default_factory=list)
    motion_windows: List[np.ndarray] = field(default_factory=list)
    final_latents: List[torch.Tensor] = field(default_factory=list)


def generate_video(reference: np.ndarray, seq: PoseSequence,
                   model: FaceAnimationModel,
                   seed: Optional[int] = None,
                   reference_landmarks: Optional[PoseFrame] = None,
                   style: RenderStyle = RenderStyle(),
                   cold_start: str = "reference",
                   trace: Optional[GenerationTrace] = None) -> List[np.ndarray]:
    """Animate one reference image along a pose sequence.

    Generation runs in clips of config.clip_len frames. The first clip's
    motion window is n_motion copies of the reference (or zeros when
    cold_start="zeros"); each later clip conditions on the last n_motion
    frames generated so far. Deterministic for a fixed seed.
    """
    cfg = model.config
    size = cfg.image_size
    reference = np.asarray(reference, dtype=np.float32)
    if reference.shape != (size, size, 3):
        raise BadConfig(
            f"reference must be {size}x{size}x3, got {reference.shape}")
    if cold_start not in ("reference", "zeros"):
        raise BadConfig(f"unknown cold_start {cold_start!r}")

    # Face Locator runs once on the reference; raises NoFace if unusable.
    landmarks = reference_landmarks if reference_landmarks is not None \
        else seq.frames[0]
    region = locate_face(landmarks, height=size, width=size)
    masked = mask_reference(reference, region)

    ref_t = image_to_tensor(reference)
    masked_t = image_to_tensor(masked.pixels)
    facemask_latents = model.facemask_guide(masked_t)
    image_emb = model.embed_image(ref_t)

    pose_maps = frames_to_tensor(
        [render_pose_map(f, size, size, style).pixels for f in seq.frames])

    schedule = make_schedule(cfg.T, cfg.beta_start, cfg.beta_end)
    steps = ddim_timesteps(cfg.T, cfg.sample_steps)
    gen = torch.Generator().manual_seed(cfg.seed if seed is None else seed)

    n = cfg.n_motion
    h = w = cfg.latent_size
    total = len(seq.frames)
    frames_out: List[np.ndarray] = []

    with torch.no_grad():
        for start in range(0, total, cfg.clip_len):
            stop = min(start + cfg.clip_len, total)
            f = stop - start

            if start == 0:
                if cold_start == "reference":
                    window_frames = [reference.copy() for _ in range(n)]
                else:
                    window_frames = [np.zeros_like(reference)
                                     for _ in range(n)]
                window = MotionWindow(frames=tuple(window_frames),
                                      source_id="cold-start", start=0)
            else:
                window = MotionWindow(
                    frames=tuple(frames_out[-n:]) if n else (),
                    source_id="generated", start=len(frames_out) - n)
            stack = stack_reference(reference, window)
            bundle = ConditioningBundle(
                reference_features=model.reference_features(
                    image_to_tensor(stack.pixels)),
                image_embedding=image_emb,
                pose_latents=model.pose_guide(pose_maps[start:stop]),
                facemask_latents=facemask_latents,
            )

            x = torch.randn((f, cfg.latent_channels, h, w), generator=gen)
            for t, t_prev in steps:
                eps_pred = model.denoise(x, t, bundle)
                x = ddim_step(x, eps_pred, t, t_prev, schedule)

            decoded = model.codec.decode(x)
            clip_frames = [tensor_to_image(decoded[i]) for i in range(f)]
            frames_out.extend(clip_frames)

            if trace is not None:
                trace.clip_ranges.append((start, stop))
                trace.motion_windows.append(
                    np.stack(window.frames) if len(window) else
                    np.zeros((0, size, size, 3), dtype=np.float32))
                trace.final_latents.append(x.clone())

    return frames_out
