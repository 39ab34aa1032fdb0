"""Latent codecs: lossless rearrangement (test) and conv autoencoder (learned)."""

from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import ShapeMismatch
from .config import EngineConfig


class RearrangeCodec:
    """Orthogonal space-to-channel rearrangement; decode(encode(x)) is x
    bit-exactly. Latent has 3*d^2 channels at 1/d spatial resolution."""

    def __init__(self, down: int):
        self.down = down

    @property
    def latent_channels(self) -> int:
        return 3 * self.down ** 2

    def encode(self, frames: torch.Tensor) -> torch.Tensor:
        if frames.shape[-1] % self.down or frames.shape[-2] % self.down:
            raise ShapeMismatch(
                f"spatial dims {tuple(frames.shape[-2:])} not divisible by "
                f"{self.down}")
        return F.pixel_unshuffle(frames, self.down)

    def decode(self, latents: torch.Tensor) -> torch.Tensor:
        if latents.shape[-3] != self.latent_channels:
            raise ShapeMismatch(
                f"expected {self.latent_channels} latent channels, got "
                f"{latents.shape[-3]}")
        return F.pixel_shuffle(latents, self.down)


class ConvAutoencoder(nn.Module):
    """Small lossy conv codec for the learned profile."""

    def __init__(self, down: int, latent_channels: int, width: int = 32):
        super().__init__()
        stages = down.bit_length() - 1  # down is a power of two
        enc = []
        ch = 3
        for _ in range(stages):
            enc += [nn.Conv2d(ch, width, 3, stride=2, padding=1), nn.SiLU()]
            ch = width
        enc += [nn.Conv2d(ch, latent_channels, 3, padding=1)]
        self.encoder = nn.Sequential(*enc)

        dec = [nn.Conv2d(latent_channels, width, 3, padding=1), nn.SiLU()]
        ch = width
        for i in range(stages):
            out = 3 if i == stages - 1 else width
            dec += [nn.ConvTranspose2d(ch, out, 4, stride=2, padding=1)]
            if i != stages - 1:
                dec += [nn.SiLU()]
            ch = out
        self.decoder = nn.Sequential(*dec)

    def encode(self, frames: torch.Tensor) -> torch.Tensor:
        return self.encoder(frames)

    def decode(self, latents: torch.Tensor) -> torch.Tensor:
        return self.decoder(latents)

    def forward(self, frames: torch.Tensor) -> torch.Tensor:
        return self.decode(self.encode(frames))


def make_codec(config: EngineConfig):
    if config.latent_profile == "test":
        return RearrangeCodec(config.latent_down)
    return ConvAutoencoder(config.latent_down, config.latent_channels)


def fit_autoencoder(codec: ConvAutoencoder, image: torch.Tensor,
                    steps: int = 600, lr: float = 2e-3) -> list:
    """Overfit the codec on a single image batch; returns per-step MSE."""
    opt = torch.optim.Adam(codec.parameters(), lr=lr)
    losses = []
    batch = image if image.dim() == 4 else image.unsqueeze(0)
    for _ in range(steps):
        opt.zero_grad()
        loss = F.mse_loss(codec(batch), batch)
        loss.backward()
        opt.step()
        losses.append(float(loss.detach()))
    return losses
