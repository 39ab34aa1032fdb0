"""Linear-beta diffusion schedule, forward noising and DDIM updates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import BadSchedule, BadStep, BadStepOrder, ShapeMismatch


@dataclass(frozen=True)
class NoiseSchedule:
    betas: np.ndarray
    alphas: np.ndarray
    alpha_bar: np.ndarray

    @property
    def T(self) -> int:
        return len(self.betas)


def make_schedule(T: int, beta_start: float, beta_end: float) -> NoiseSchedule:
    if T < 1:
        raise BadSchedule(f"T must be >= 1, got {T}")
    if not (0.0 < beta_start <= beta_end < 1.0):
        raise BadSchedule(
            f"need 0 < beta_start <= beta_end < 1, got {beta_start}, {beta_end}")
    if T == 1:
        betas = np.array([beta_start], dtype=np.float64)
    else:
        betas = np.linspace(beta_start, beta_end, T, dtype=np.float64)
    alphas = 1.0 - betas
    alpha_bar = np.cumprod(alphas)
    return NoiseSchedule(betas=betas, alphas=alphas, alpha_bar=alpha_bar)


def add_noise(x0, eps, t: int, schedule: NoiseSchedule):
    """x_t = sqrt(ab_t) x0 + sqrt(1 - ab_t) eps."""
    if x0.shape != eps.shape:
        raise ShapeMismatch(f"x0 {tuple(x0.shape)} vs eps {tuple(eps.shape)}")
    if not (0 <= t < schedule.T):
        raise BadStep(f"t={t} outside [0, {schedule.T})")
    ab = float(schedule.alpha_bar[t])
    return math.sqrt(ab) * x0 + math.sqrt(1.0 - ab) * eps


def ddim_step(x_t, eps_pred, t: int, t_prev: int, schedule: NoiseSchedule):
    """Deterministic DDIM update from step t to t_prev (t_prev = -1 is final)."""
    if x_t.shape != eps_pred.shape:
        raise ShapeMismatch(
            f"x_t {tuple(x_t.shape)} vs eps_pred {tuple(eps_pred.shape)}")
    if not (schedule.T > t > t_prev >= -1):
        raise BadStepOrder(f"need T > t > t_prev >= -1, got t={t}, t_prev={t_prev}")
    ab_t = float(schedule.alpha_bar[t])
    x0_hat = (x_t - math.sqrt(1.0 - ab_t) * eps_pred) / math.sqrt(ab_t)
    if t_prev == -1:
        return x0_hat
    ab_p = float(schedule.alpha_bar[t_prev])
    return math.sqrt(ab_p) * x0_hat + math.sqrt(1.0 - ab_p) * eps_pred


def ddim_timesteps(T: int, sample_steps: int) -> List[Tuple[int, int]]:
    """Descending (t, t_prev) pairs covering [0, T); the last pair ends at -1."""
    if not (T >= sample_steps >= 1):
        raise BadSchedule(f"need T >= sample_steps >= 1, got {T}, {sample_steps}")
    ts = np.unique(np.linspace(0, T - 1, sample_steps).round().astype(int))[::-1]
    pairs = []
    for i, t in enumerate(ts):
        t_prev = int(ts[i + 1]) if i + 1 < len(ts) else -1
        pairs.append((int(t), t_prev))
    return pairs
