"""Pose acquisition: video landmark extraction and audio-driven prediction.

Detector and predictor are plug-in interfaces; the deterministic stubs here
are what ships in-repo. Real model weights (DWPose, audio-to-pose nets) plug
in at deployment without changing callers.
"""

from __future__ import annotations

import math
from typing import Protocol, Sequence

import numpy as np

from ..errors import BadSampleRate, DetectorFailure, EmptyAudio, EmptyVideo
from .types import DEFAULT_SCHEMA, FACE68_LOWER_LIP, SCHEMAS, PoseFrame, PoseSequence

AUDIO_POSE_FPS = 24.0


class LandmarkDetector(Protocol):
    """Per-frame landmark detection: RGB frame -> (x, y, confidence) list."""

    schema_id: str

    def detect(self, frame: np.ndarray) -> Sequence[tuple]:
        ...


class ConstantDetector:
    """Stub detector returning the same landmark set for every frame."""

    def __init__(self, points, schema_id: str = DEFAULT_SCHEMA):
        self.points = [tuple(p) for p in points]
        self.schema_id = schema_id

    def detect(self, frame: np.ndarray):
        return self.points


class CentroidDetector:
    """Stub detector placing every landmark at the brightness centroid.

    Useful for tracking a synthetic moving dot without any learned model.
    """

    def __init__(self, schema_id: str = DEFAULT_SCHEMA):
        self.schema_id = schema_id

    def detect(self, frame: np.ndarray):
        gray = np.asarray(frame, dtype=np.float64).sum(axis=-1)
        total = gray.sum()
        if total <= 0:
            raise ValueError("blank frame, no centroid")
        h, w = gray.shape
        ys = (gray.sum(axis=1) * np.arange(h)).sum() / total
        xs = (gray.sum(axis=0) * np.arange(w)).sum() / total
        x = xs / (w - 1) if w > 1 else 0.0
        y = ys / (h - 1) if h > 1 else 0.0
        n = SCHEMAS[self.schema_id]
        return [(x, y, 1.0)] * n


def extract_pose_from_video(video_frames: Sequence[np.ndarray], fps: float,
                            detector: LandmarkDetector) -> PoseSequence:
    """Run the detector on every frame; failed frames get zero confidence."""
    if len(video_frames) == 0:
        raise EmptyVideo("no video frames")
    schema_id = getattr(detector, "schema_id", DEFAULT_SCHEMA)
    n_points = SCHEMAS[schema_id]
    h, w = np.asarray(video_frames[0]).shape[:2]

    frames = []
    failures = 0
    for frame in video_frames:
        try:
            pts = detector.detect(np.asarray(frame))
            frames.append(PoseFrame.from_points(pts))
        except Exception:
            failures += 1
            frames.append(PoseFrame.zeros(n_points))
    if failures == len(video_frames):
        raise DetectorFailure("detector failed on every frame")

    return PoseSequence(fps=float(fps), width=int(w), height=int(h),
                        frames=frames, schema_id=schema_id)


def make_neutral_template() -> PoseFrame:
    """Synthetic neutral 68-landmark face, centered, confidence 1."""
    import math as _m
    pts = []
    # jaw: lower half-ellipse, 17 points
    for i in range(17):
        a = _m.pi * i / 16
        pts.append((0.5 - 0.22 * _m.cos(a), 0.45 + 0.28 * _m.sin(a), 1.0))
    # brows: two arcs of 5
    for side in (-1, 1):
        for i in range(5):
            x = 0.5 + side * (0.06 + 0.025 * i)
            pts.append((x, 0.36 - 0.01 * _m.sin(_m.pi * i / 4), 1.0))
    # nose: bridge 4 + base 5
    for i in range(4):
        pts.append((0.5, 0.40 + 0.03 * i, 1.0))
    for i in range(5):
        pts.append((0.46 + 0.02 * i, 0.53, 1.0))
    # eyes: two hexagons
    for cx in (0.41, 0.59):
        for i in range(6):
            a = 2 * _m.pi * i / 6
            pts.append((cx + 0.035 * _m.cos(a), 0.42 + 0.015 * _m.sin(a), 1.0))
    # mouth: outer ring of 12 + inner ring of 8
    for i in range(12):
        a = 2 * _m.pi * i / 12
        pts.append((0.5 + 0.06 * _m.cos(a), 0.62 + 0.025 * _m.sin(a), 1.0))
    for i in range(8):
        a = 2 * _m.pi * i / 8
        pts.append((0.5 + 0.035 * _m.cos(a), 0.62 + 0.012 * _m.sin(a), 1.0))
    return PoseFrame.from_points(pts)


class NeutralTemplateDetector:
    """Stub face detector: any image with visible content yields the
    neutral template landmarks; blank images count as no face."""

    def __init__(self, min_std: float = 1e-3, schema_id: str = DEFAULT_SCHEMA):
        self.min_std = min_std
        self.schema_id = schema_id
        self._template = make_neutral_template()

    def detect(self, frame: np.ndarray):
        if float(np.asarray(frame, dtype=np.float64).std()) < self.min_std:
            raise ValueError("blank image, no face")
        return self._template.keypoints


class AudioPosePredictor(Protocol):
    def predict(self, audio: np.ndarray, sample_rate: int,
                template: PoseFrame) -> PoseSequence:
        ...


class EnergyToMouthPredictor:
    """Deterministic audio stub: per-frame RMS energy opens the mouth.

    Lower-lip landmarks of the template shift down by
    max_offset * min(1, rms), so the opening is monotone in window energy.
    """

    def __init__(self, max_offset: float = 0.05):
        self.max_offset = max_offset

    def predict(self, audio: np.ndarray, sample_rate: int,
                template: PoseFrame) -> PoseSequence:
        audio = np.asarray(audio, dtype=np.float64)
        n_frames = int(math.floor(len(audio) / sample_rate * AUDIO_POSE_FPS))
        n_frames = max(1, n_frames)
        lip = set(FACE68_LOWER_LIP) if len(template) == 68 else set()

        frames = []
        for k in range(n_frames):
            lo = int(math.floor(k * sample_rate / AUDIO_POSE_FPS))
            hi = int(math.floor((k + 1) * sample_rate / AUDIO_POSE_FPS))
            window = audio[lo:hi]
            rms = float(np.sqrt(np.mean(window ** 2))) if len(window) else 0.0
            offset = self.max_offset * min(1.0, rms)
            if offset == 0.0:
                frames.append(template)
                continue
            pts = [
                (x, y + offset, c) if i in lip else (x, y, c)
                for i, (x, y, c) in enumerate(template.keypoints)
            ]
            frames.append(PoseFrame.from_points(pts))

        return PoseSequence(fps=AUDIO_POSE_FPS, width=512, height=512,
                            frames=frames, schema_id=DEFAULT_SCHEMA)


def pose_from_audio(audio: np.ndarray, sample_rate: int, template: PoseFrame,
                    predictor: AudioPosePredictor | None = None) -> PoseSequence:
    """Predict a 24 fps pose sequence from mono PCM audio."""
    audio = np.asarray(audio)
    if audio.size == 0:
        raise EmptyAudio("no audio samples")
    if sample_rate <= 0:
        raise BadSampleRate(f"sample rate must be positive, got {sample_rate}")
    if predictor is None:
        predictor = EnergyToMouthPredictor()
    return predictor.predict(audio, sample_rate, template)
