from .config import EngineConfig, toy_config
from .schedule import (
    NoiseSchedule,
    add_noise,
    ddim_step,
    ddim_timesteps,
    make_schedule,
)
from .codec import ConvAutoencoder, RearrangeCodec, fit_autoencoder, make_codec
from .models import (
    ConditioningBundle,
    DenoisingUNet,
    FaceAnimationModel,
    GuiderCNN,
    ImageEmbedder,
    ReferenceNet,
)
from .training import (
    TrainBatch,
    frames_to_tensor,
    image_to_tensor,
    make_bundle,
    overfit,
    tensor_to_image,
    train_step,
)
from .generate import GenerationTrace, generate_video
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "EngineConfig", "toy_config",
    "NoiseSchedule", "add_noise", "ddim_step", "ddim_timesteps",
    "make_schedule",
    "ConvAutoencoder", "RearrangeCodec", "fit_autoencoder", "make_codec",
    "ConditioningBundle", "DenoisingUNet", "FaceAnimationModel", "GuiderCNN",
    "ImageEmbedder", "ReferenceNet",
    "TrainBatch", "frames_to_tensor", "image_to_tensor", "make_bundle",
    "overfit", "tensor_to_image", "train_step",
    "GenerationTrace", "generate_video",
    "load_checkpoint", "save_checkpoint",
]
