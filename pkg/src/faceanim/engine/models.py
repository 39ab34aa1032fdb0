"""Dual-UNet model stack.

A Reference Net encodes the reference image (channel-concatenated with
motion frames) into per-resolution features; the Denoising UNet injects
those features into its spatial self-attention, attends to a global image
embedding via cross-attention, and mixes across frames with temporal
attention. Pose maps and the masked reference face enter additively through
two zero-initialized guider CNNs, so conditioning starts neutral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import ShapeMismatch
from .codec import make_codec
from .config import EngineConfig


def timestep_embedding(t: torch.Tensor, dim: int, max_period: float = 10000.0):
    half = dim // 2
    freqs = torch.exp(
        -math.log(max_period)
        * torch.arange(half, dtype=t.dtype, device=t.device) / half
    )
    args = t[:, None] * freqs[None, :]
    emb = torch.cat([torch.cos(args), torch.sin(args)], dim=-1)
    if dim % 2:
        emb = torch.cat([emb, torch.zeros_like(emb[:, :1])], dim=-1)
    return emb


class ResBlock(nn.Module):
    def __init__(self, in_ch: int, out_ch: int, time_dim: Optional[int] = None):
        super().__init__()
        groups = math.gcd(8, in_ch)
        self.norm1 = nn.GroupNorm(groups, in_ch)
        self.conv1 = nn.Conv2d(in_ch, out_ch, 3, padding=1)
        self.norm2 = nn.GroupNorm(math.gcd(8, out_ch), out_ch)
        self.conv2 = nn.Conv2d(out_ch, out_ch, 3, padding=1)
        self.time_proj = nn.Linear(time_dim, out_ch) if time_dim else None
        self.skip = nn.Conv2d(in_ch, out_ch, 1) if in_ch != out_ch \
            else nn.Identity()

    def forward(self, x, t_emb=None):
        h = self.conv1(F.silu(self.norm1(x)))
        if self.time_proj is not None and t_emb is not None:
            h = h + self.time_proj(F.silu(t_emb))[:, :, None, None]
        h = self.conv2(F.silu(self.norm2(h)))
        return h + self.skip(x)


class Attention(nn.Module):
    """Single-head scaled dot-product attention with projections."""

    def __init__(self, dim: int, kv_dim: Optional[int] = None,
                 head_dim: int = 64):
        super().__init__()
        kv_dim = kv_dim if kv_dim is not None else dim
        self.scale = head_dim ** -0.5
        self.to_q = nn.Linear(dim, head_dim, bias=False)
        self.to_k = nn.Linear(kv_dim, head_dim, bias=False)
        self.to_v = nn.Linear(kv_dim, head_dim, bias=False)
        self.to_out = nn.Linear(head_dim, dim)

    def forward(self, x, context=None):
        ctx = x if context is None else context
        q = self.to_q(x) * self.scale
        k = self.to_k(ctx)
        v = self.to_v(ctx)
        attn = torch.softmax(q @ k.transpose(-2, -1), dim=-1)
        return self.to_out(attn @ v)


class SpatialBlock(nn.Module):
    """Per-frame transformer block: self-attention over spatial tokens with
    Reference Net features concatenated into the key/value set, then
    cross-attention to the image embedding, then a small MLP."""

    def __init__(self, dim: int, embed_dim: int, head_dim: int = 64):
        super().__init__()
        self.norm1 = nn.LayerNorm(dim)
        self.self_attn = Attention(dim, head_dim=head_dim)
        self.norm2 = nn.LayerNorm(dim)
        self.cross_attn = Attention(dim, kv_dim=embed_dim, head_dim=head_dim)
        self.norm3 = nn.LayerNorm(dim)
        self.mlp = nn.Sequential(
            nn.Linear(dim, dim * 2), nn.SiLU(), nn.Linear(dim * 2, dim))

    def forward(self, x, ref_feat, image_emb):
        # x: (f, C, h, w); ref_feat: (C, hr, wr); image_emb: (D,)
        f, c, h, w = x.shape
        tokens = x.flatten(2).transpose(1, 2)  # (f, h*w, C)
        norm = self.norm1(tokens)
        ref_tokens = ref_feat.flatten(1).transpose(0, 1)  # (hr*wr, C)
        ctx = torch.cat([norm, ref_tokens[None].expand(f, -1, -1)], dim=1)
        tokens = tokens + self.self_attn(norm, ctx)
        emb = image_emb[None, None, :].expand(f, 1, -1)
        tokens = tokens + self.cross_attn(self.norm2(tokens), emb)
        tokens = tokens + self.mlp(self.norm3(tokens))
        return tokens.transpose(1, 2).reshape(f, c, h, w)


class TemporalMix(nn.Module):
    """Attention across the frame axis per spatial location.

    Residual with a zero-initialized gate, so the layer starts as identity.
    Values are the raw features (no value/output projection) and there is
    no positional bias, so a single frame passes through exactly unchanged
    and the mix is equivariant to frame permutations.
    """

    def __init__(self, dim: int, head_dim: int = 64):
        super().__init__()
        self.scale = head_dim ** -0.5
        self.to_q = nn.Linear(dim, head_dim, bias=False)
        self.to_k = nn.Linear(dim, head_dim, bias=False)
        self.gate = nn.Parameter(torch.zeros(()))

    def forward(self, x):
        f, c, h, w = x.shape
        if f == 1:
            return x
        tokens = x.permute(2, 3, 0, 1).reshape(h * w, f, c)
        q = self.to_q(tokens) * self.scale
        k = self.to_k(tokens)
        attn = torch.softmax(q @ k.transpose(-2, -1), dim=-1)
        mixed = attn @ tokens
        out = tokens + self.gate * (mixed - tokens)
        return out.reshape(h, w, f, c).permute(2, 3, 0, 1)


class GuiderCNN(nn.Module):
    """Lightweight encoder from image space to latent space.

    The final 1x1 conv is zero-initialized so an untrained guider emits
    exactly zero and leaves denoising unaffected.
    """

    def __init__(self, in_ch: int, out_ch: int, down: int, width: int = 32):
        super().__init__()
        stages = down.bit_length() - 1
        layers = []
        ch = in_ch
        for _ in range(stages):
            layers += [nn.Conv2d(ch, width, 3, stride=2, padding=1), nn.SiLU()]
            ch = width
        layers += [nn.Conv2d(ch, width, 3, padding=1), nn.SiLU()]
        self.body = nn.Sequential(*layers)
        self.out = nn.Conv2d(width, out_ch, 1)
        nn.init.zeros_(self.out.weight)
        nn.init.zeros_(self.out.bias)

    def forward(self, x):
        return self.out(self.body(x))


class ReferenceNet(nn.Module):
    """Encodes the reference stack into one feature map per UNet level."""

    def __init__(self, in_channels: int, down: int, widths):
        super().__init__()
        self.in_channels = in_channels
        stages = down.bit_length() - 1
        stem = []
        ch = in_channels
        for _ in range(stages):
            stem += [nn.Conv2d(ch, widths[0], 3, stride=2, padding=1),
                     nn.SiLU()]
            ch = widths[0]
        self.stem = nn.Sequential(*stem)
        self.blocks = nn.ModuleList([ResBlock(widths[0], widths[0])])
        self.downs = nn.ModuleList()
        for i in range(1, len(widths)):
            self.downs.append(
                nn.Conv2d(widths[i - 1], widths[i], 3, stride=2, padding=1))
            self.blocks.append(ResBlock(widths[i], widths[i]))

    def forward(self, stack: torch.Tensor) -> List[torch.Tensor]:
        # stack: (3(n+1), H, W)
        if stack.dim() != 3 or stack.shape[0] != self.in_channels:
            raise ShapeMismatch(
                f"reference stack must have {self.in_channels} channels, got "
                f"{tuple(stack.shape)}")
        x = self.stem(stack[None])
        feats = []
        x = self.blocks[0](x)
        feats.append(x[0])
        for down, block in zip(self.downs, self.blocks[1:]):
            x = block(down(x))
            feats.append(x[0])
        return feats


class ImageEmbedder(nn.Module):
    """Fixed-seed random linear projection of the average-pooled image.

    Deterministic stand-in for a pretrained image encoder; the projection
    is a buffer, never trained.
    """

    POOL = 8

    def __init__(self, embed_dim: int, seed: int = 90210):
        super().__init__()
        gen = torch.Generator().manual_seed(seed)
        weight = torch.randn(3 * self.POOL * self.POOL, embed_dim,
                             generator=gen)
        weight /= math.sqrt(weight.shape[0])
        self.register_buffer("weight", weight)

    def forward(self, image: torch.Tensor) -> torch.Tensor:
        # image: (3, H, W) -> (embed_dim,)
        pooled = F.adaptive_avg_pool2d(image[None], self.POOL).flatten()
        return pooled @ self.weight


class DenoisingUNet(nn.Module):
    """Two-or-more level video UNet over (frames, channels, h, w) latents."""

    def __init__(self, latent_channels: int, widths, embed_dim: int,
                 head_dim: int = 64):
        super().__init__()
        self.widths = tuple(widths)
        time_dim = widths[0] * 2
        self.time_dim = time_dim
        self.time_mlp = nn.Sequential(
            nn.Linear(time_dim, time_dim), nn.SiLU(),
            nn.Linear(time_dim, time_dim))
        self.conv_in = nn.Conv2d(latent_channels, widths[0], 3, padding=1)

        self.down_res = nn.ModuleList()
        self.down_spatial = nn.ModuleList()
        self.down_temporal = nn.ModuleList()
        self.downsamplers = nn.ModuleList()
        for i, w in enumerate(widths):
            self.down_res.append(ResBlock(w, w, time_dim))
            self.down_spatial.append(SpatialBlock(w, embed_dim, head_dim))
            self.down_temporal.append(TemporalMix(w, head_dim))
            if i + 1 < len(widths):
                self.downsamplers.append(
                    nn.Conv2d(w, widths[i + 1], 3, stride=2, padding=1))

        wb = widths[-1]
        self.mid_res1 = ResBlock(wb, wb, time_dim)
        self.mid_spatial = SpatialBlock(wb, embed_dim, head_dim)
        self.mid_temporal = TemporalMix(wb, head_dim)
        self.mid_res2 = ResBlock(wb, wb, time_dim)

        self.up_convs = nn.ModuleList()
        self.up_res = nn.ModuleList()
        self.up_spatial = nn.ModuleList()
        self.up_temporal = nn.ModuleList()
        for i in range(len(widths) - 1, 0, -1):
            self.up_convs.append(nn.Conv2d(widths[i], widths[i - 1], 3,
                                           padding=1))
            w = widths[i - 1]
            self.up_res.append(ResBlock(w * 2, w, time_dim))
            self.up_spatial.append(SpatialBlock(w, embed_dim, head_dim))
            self.up_temporal.append(TemporalMix(w, head_dim))

        self.out_norm = nn.GroupNorm(math.gcd(8, widths[0]), widths[0])
        self.conv_out = nn.Conv2d(widths[0], latent_channels, 3, padding=1)
        # time-conditioned scalar gain on an input->output skip; zero-init
        # so the skip starts inactive
        self.skip_gain = nn.Linear(time_dim, 1)
        nn.init.zeros_(self.skip_gain.weight)
        nn.init.zeros_(self.skip_gain.bias)

    def forward(self, x: torch.Tensor, t: int,
                ref_feats: List[torch.Tensor],
                image_emb: torch.Tensor,
                skip_temporal: bool = False) -> torch.Tensor:
        f = x.shape[0]
        if len(ref_feats) != len(self.widths):
            raise ShapeMismatch(
                f"need {len(self.widths)} reference feature maps, got "
                f"{len(ref_feats)}")
        tv = torch.full((f,), float(t), dtype=x.dtype, device=x.device)
        t_emb = self.time_mlp(timestep_embedding(tv, self.time_dim))

        h = self.conv_in(x)
        skips = []
        for i in range(len(self.widths)):
            h = self.down_res[i](h, t_emb)
            h = self.down_spatial[i](h, ref_feats[i], image_emb)
            if not skip_temporal:
                h = self.down_temporal[i](h)
            skips.append(h)
            if i + 1 < len(self.widths):
                h = self.downsamplers[i](h)

        h = self.mid_res1(h, t_emb)
        h = self.mid_spatial(h, ref_feats[-1], image_emb)
        if not skip_temporal:
            h = self.mid_temporal(h)
        h = self.mid_res2(h, t_emb)

        for j, i in enumerate(range(len(self.widths) - 1, 0, -1)):
            h = F.interpolate(h, scale_factor=2, mode="nearest")
            h = self.up_convs[j](h)
            h = torch.cat([h, skips[i - 1]], dim=1)
            h = self.up_res[j](h, t_emb)
            h = self.up_spatial[j](h, ref_feats[i - 1], image_emb)
            if not skip_temporal:
                h = self.up_temporal[j](h)

        gain = self.skip_gain(t_emb)[:, :, None, None]
        return self.conv_out(F.silu(self.out_norm(h))) + gain * x


@dataclass
class ConditioningBundle:
    reference_features: List[torch.Tensor]
    image_embedding: torch.Tensor
    pose_latents: torch.Tensor       # (f, c, h, w)
    facemask_latents: torch.Tensor   # (c, h, w)


class FaceAnimationModel(nn.Module):
    """Everything trainable, plus the codec and the frozen image embedder."""

    def __init__(self, config: EngineConfig):
        super().__init__()
        self.config = config
        widths = tuple(config.base_width * 2 ** i for i in range(config.levels))
        self.widths = widths
        self.codec = make_codec(config)
        self.reference_net = ReferenceNet(
            3 * (config.n_motion + 1), config.latent_down, widths)
        self.pose_guider = GuiderCNN(3, config.latent_channels,
                                     config.latent_down)
        self.facemask_encoder = GuiderCNN(3, config.latent_channels,
                                          config.latent_down)
        self.embedder = ImageEmbedder(config.embed_dim,
                                      seed=config.seed + 90210)
        self.unet = DenoisingUNet(config.latent_channels, widths,
                                  config.embed_dim)

    # --- conditioning encoders ---

    def reference_features(self, stack: torch.Tensor) -> List[torch.Tensor]:
        return self.reference_net(stack)

    def pose_guide(self, pose_maps: torch.Tensor) -> torch.Tensor:
        # pose_maps: (f, 3, S, S) -> (f, c, h, w)
        if pose_maps.shape[-1] != self.config.image_size:
            raise ShapeMismatch(
                f"pose maps must be {self.config.image_size} px, got "
                f"{tuple(pose_maps.shape)}")
        return self.pose_guider(pose_maps)

    def facemask_guide(self, masked_ref: torch.Tensor) -> torch.Tensor:
        # masked_ref: (3, S, S) -> (c, h, w)
        if masked_ref.shape != (3, self.config.image_size,
                                self.config.image_size):
            raise ShapeMismatch(
                f"masked reference must be (3, S, S), got "
                f"{tuple(masked_ref.shape)}")
        return self.facemask_encoder(masked_ref[None])[0]

    def embed_image(self, image: torch.Tensor) -> torch.Tensor:
        return self.embedder(image)

    # --- denoising ---

    def denoise(self, noisy: torch.Tensor, t: int,
                bundle: ConditioningBundle,
                skip_temporal: bool = False) -> torch.Tensor:
        if bundle.pose_latents.shape != noisy.shape:
            raise ShapeMismatch(
                f"pose latents {tuple(bundle.pose_latents.shape)} vs noisy "
                f"{tuple(noisy.shape)}")
        if bundle.facemask_latents.shape != noisy.shape[1:]:
            raise ShapeMismatch(
                f"facemask latents {tuple(bundle.facemask_latents.shape)} vs "
                f"latent frame {tuple(noisy.shape[1:])}")
        x = noisy + bundle.pose_latents + bundle.facemask_latents[None]
        return self.unet(x, t, bundle.reference_features,
                         bundle.image_embedding, skip_temporal=skip_temporal)
