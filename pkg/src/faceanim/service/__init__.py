from .artifacts import ArtifactStore
from .config import DEFAULT_FPS, DEFAULT_HEIGHT, DEFAULT_WIDTH, ServiceConfig
from .encode import encode_video, probe_video
from .jobs import FAILED, QUEUED, RUNNING, SUCCEEDED, GenerationJob, JobStore
from .media import (
    UndecodableMedia,
    decode_image,
    decode_video,
    decode_wav,
    encode_image,
    encode_wav,
    resize_image,
)
from .worker import make_generator, run_claimed_job, work_once, worker_loop
from .app import create_app

__all__ = [
    "ArtifactStore",
    "DEFAULT_FPS", "DEFAULT_HEIGHT", "DEFAULT_WIDTH", "ServiceConfig",
    "encode_video", "probe_video",
    "FAILED", "QUEUED", "RUNNING", "SUCCEEDED", "GenerationJob", "JobStore",
    "UndecodableMedia", "decode_image", "decode_video", "decode_wav",
    "encode_image", "encode_wav", "resize_image",
    "make_generator", "run_claimed_job", "work_once", "worker_loop",
    "create_app",
]
