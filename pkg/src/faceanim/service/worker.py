"""Job workers: claim, generate, encode, store, finalize."""

from __future__ import annotations

import threading
import time
import traceback
from typing import Callable, List, Optional

import numpy as np

from ..errors import FaceAnimError
from ..pose.io import loads_pose
from ..pose.resample import resample_pose
from ..pose.types import PoseSequence
from .artifacts import ArtifactStore
from .encode import encode_video
from .jobs import GenerationJob, JobStore
from .media import decode_image, resize_image

# (reference image at engine size, pose sequence, seed) -> RGB frames
VideoGenerator = Callable[[np.ndarray, PoseSequence, int], List[np.ndarray]]


def make_generator(model) -> VideoGenerator:
    """Bind an engine model into the worker's generator interface."""
    from ..engine.generate import generate_video

    def generate(reference: np.ndarray, seq: PoseSequence,
                 seed: int) -> List[np.ndarray]:
        size = model.config.image_size
        return generate_video(resize_image(reference, size, size), seq,
                              model, seed=seed)

    return generate


def run_claimed_job(job: GenerationJob, token: int, jobs: JobStore,
                    artifacts: ArtifactStore, generator: VideoGenerator,
                    max_frames: int = 0,
                    encode_backend: str = "auto") -> bool:
    """Execute one already-claimed job through to its terminal transition."""
    try:
        ref_bytes, _ = artifacts.get(job.reference_ref)
        reference = decode_image(ref_bytes)
        pose_bytes, _ = artifacts.get(job.pose_ref)
        seq = loads_pose(pose_bytes.decode("utf-8"))

        params = job.params
        fps = float(params["fps"])
        if seq.fps != fps:
            seq = resample_pose(seq, fps)
        if max_frames and len(seq) > max_frames:
            raise FaceAnimError(
                f"pose sequence of {len(seq)} frames exceeds the "
                f"{max_frames}-frame cap")

        frames = generator(reference, seq, int(params.get("seed", 0)))
        width, height = int(params["width"]), int(params["height"])
        frames = [resize_image(f, width, height) for f in frames]
        data, media_type = encode_video(frames, fps, backend=encode_backend)
        result_ref = artifacts.put(data, media_type)
        meta = {
            "frames": len(frames), "fps": fps, "width": width,
            "height": height, "duration_s": len(frames) / fps,
            "media_type": media_type,
        }
        return jobs.finalize(job.id, token, result_ref=result_ref,
                             result_meta=meta)
    except FaceAnimError as e:
        return jobs.finalize(job.id, token,
                             error=f"{type(e).__name__}: {e}")
    except Exception as e:  # never leave a job running forever
        traceback.print_exc()
        return jobs.finalize(job.id, token,
                             error=f"internal error: {type(e).__name__}: {e}")


def work_once(jobs: JobStore, artifacts: ArtifactStore,
              generator: VideoGenerator, worker_id: str = "worker",
              lease_seconds: float = 120.0, max_frames: int = 0,
              encode_backend: str = "auto") -> bool:
    """Claim and run at most one job; returns whether one was processed."""
    claimed = jobs.claim(worker_id, lease_seconds)
    if claimed is None:
        return False
    job, token = claimed
    run_claimed_job(job, token, jobs, artifacts, generator,
                    max_frames=max_frames, encode_backend=encode_backend)
    return True


def worker_loop(jobs: JobStore, artifacts: ArtifactStore,
                generator: VideoGenerator, worker_id: str,
                stop: threading.Event, lease_seconds: float = 120.0,
                poll_interval: float = 0.25, max_frames: int = 0,
                encode_backend: str = "auto") -> None:
    while not stop.is_set():
        busy = work_once(jobs, artifacts, generator, worker_id,
                         lease_seconds, max_frames, encode_backend)
        if not busy:
            time.sleep(poll_interval)
