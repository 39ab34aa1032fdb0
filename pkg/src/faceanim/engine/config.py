"""Engine configuration and profiles."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import BadConfig

MOTION_COUNTS = (0, 1, 2, 4)


@dataclass
class EngineConfig:
    image_size: int = 512
    latent_down: int = 8
    latent_channels: int = 4
    clip_len: int = 16
    n_motion: int = 2
    T: int = 1000
    sample_steps: int = 25
    beta_start: float = 8.5e-4
    beta_end: float = 1.2e-2
    fps_out: float = 24.0
    seed: int = 0
    # model-shape knobs (artifact decisions, not profile-mandated)
    latent_profile: str = "learned"  # "test" = lossless rearrangement codec
    base_width: int = 64
    levels: int = 2
    embed_dim: int = 64

    def __post_init__(self):
        if self.image_size % self.latent_down != 0:
            raise BadConfig("image_size must be divisible by latent_down")
        if not (self.T >= self.sample_steps >= 1):
            raise BadConfig("need T >= sample_steps >= 1")
        if self.clip_len < 1:
            raise BadConfig("clip_len must be >= 1")
        if self.n_motion not in MOTION_COUNTS:
            raise BadConfig(f"n_motion must be one of {MOTION_COUNTS}")
        if self.latent_profile not in ("test", "learned"):
            raise BadConfig(f"unknown latent_profile {self.latent_profile!r}")
        if self.latent_profile == "test" and \
                self.latent_channels != 3 * self.latent_down ** 2:
            raise BadConfig(
                "test latent profile requires latent_channels == "
                f"3*latent_down^2 = {3 * self.latent_down ** 2}")
        if self.latent_down & (self.latent_down - 1):
            raise BadConfig("latent_down must be a power of two")
        if (self.image_size // self.latent_down) % (2 ** (self.levels - 1)):
            raise BadConfig("latent size not divisible across UNet levels")

    @property
    def latent_size(self) -> int:
        return self.image_size // self.latent_down

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @staticmethod
    def from_json(text: str) -> "EngineConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise BadConfig(f"malformed config JSON: {e}") from e
        if not isinstance(doc, dict):
            raise BadConfig("config root must be an object")
        known = {f for f in EngineConfig.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise BadConfig(f"unknown config fields: {sorted(unknown)}")
        return EngineConfig(**doc)

    @staticmethod
    def from_file(path) -> "EngineConfig":
        return EngineConfig.from_json(Path(path).read_text(encoding="utf-8"))


def toy_config(**overrides) -> EngineConfig:
    """64x64 profile with the lossless latent; what all the fast tests use."""
    params = dict(
        image_size=64, latent_down=4, latent_channels=48, clip_len=8,
        n_motion=2, T=1000, sample_steps=25, latent_profile="test",
        base_width=64, levels=2, embed_dim=64,
    )
    params.update(overrides)
    return EngineConfig(**params)
