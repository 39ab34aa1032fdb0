"""Epsilon-prediction training step and small overfit loops."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import torch

from ..errors import NonFiniteLoss, ShapeMismatch
from .models import ConditioningBundle, FaceAnimationModel
from .schedule import NoiseSchedule, add_noise, make_schedule


def image_to_tensor(image) -> torch.Tensor:
    """H x W x 3 float array in [0,1] -> (3, H, W) float32 tensor."""
    t = torch.as_tensor(image, dtype=torch.float32)
    return t.permute(2, 0, 1).contiguous()


def tensor_to_image(t: torch.Tensor):
    """(3, H, W) tensor -> H x W x 3 float32 array clipped to [0,1]."""
    return t.clamp(0.0, 1.0).permute(1, 2, 0).contiguous().cpu().numpy()


def frames_to_tensor(frames) -> torch.Tensor:
    return torch.stack([image_to_tensor(f) for f in frames])


@dataclass
class TrainBatch:
    """One training sample in engine tensor layout.

    The motion window must be the frames immediately preceding the target
    clip in the same source video.
    """

    clip: torch.Tensor          # (f, 3, S, S) ground-truth frames
    reference: torch.Tensor     # (3, S, S)
    pose_maps: torch.Tensor     # (f, 3, S, S)
    masked_ref: torch.Tensor    # (3, S, S)
    motion_window: torch.Tensor  # (n, 3, S, S)


def make_bundle(model: FaceAnimationModel, reference: torch.Tensor,
                motion_window: torch.Tensor, pose_maps: torch.Tensor,
                masked_ref: torch.Tensor) -> ConditioningBundle:
    if motion_window.shape[0] != model.config.n_motion:
        raise ShapeMismatch(
            f"expected {model.config.n_motion} motion frames, got "
            f"{motion_window.shape[0]}")
    stack = torch.cat([reference, *motion_window], dim=0)
    return ConditioningBundle(
        reference_features=model.reference_features(stack),
        image_embedding=model.embed_image(reference),
        pose_latents=model.pose_guide(pose_maps),
        facemask_latents=model.facemask_guide(masked_ref),
    )


def train_step(model: FaceAnimationModel, optimizer: torch.optim.Optimizer,
               batch: TrainBatch, schedule: NoiseSchedule,
               rng: torch.Generator) -> float:
    """One eps-prediction MSE step at a uniformly sampled diffusion step."""
    x0 = model.codec.encode(batch.clip)
    t = int(torch.randint(0, schedule.T, (1,), generator=rng).item())
    eps = torch.randn(x0.shape, generator=rng, dtype=x0.dtype)
    x_t = add_noise(x0, eps, t, schedule)

    bundle = make_bundle(model, batch.reference, batch.motion_window,
                         batch.pose_maps, batch.masked_ref)
    eps_pred = model.denoise(x_t, t, bundle)
    loss = torch.mean((eps_pred - eps) ** 2)
    if not torch.isfinite(loss):
        raise NonFiniteLoss(f"loss became non-finite at t={t}")

    optimizer.zero_grad()
    loss.backward()
    optimizer.step()
    return float(loss.detach())


def overfit(model: FaceAnimationModel, batch: TrainBatch, steps: int,
            lr: float = 2e-3, seed: int = 0,
            log: Optional[callable] = None) -> List[float]:
    """Train repeatedly on one sample; returns the per-step loss trace."""
    schedule = make_schedule(model.config.T, model.config.beta_start,
                             model.config.beta_end)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    rng = torch.Generator().manual_seed(seed)
    losses = []
    for step in range(1, steps + 1):
        loss = train_step(model, optimizer, batch, schedule, rng)
        losses.append(loss)
        if log is not None:
            log(step, loss)
    return losses
