"""Decoding of uploaded media: images, videos, WAV audio."""

from __future__ import annotations

import io
import os
import tempfile
import wave
from typing import List, Tuple

import numpy as np

from ..errors import FaceAnimError


class UndecodableMedia(FaceAnimError):
    pass


def decode_image(data: bytes) -> np.ndarray:
    """Image bytes -> H x W x 3 float32 in [0,1]."""
    from PIL import Image, UnidentifiedImageError
    try:
        img = Image.open(io.BytesIO(data)).convert("RGB")
    except (UnidentifiedImageError, OSError, ValueError) as e:
        raise UndecodableMedia(f"cannot decode image: {e}") from e
    return np.asarray(img, dtype=np.float32) / 255.0


def encode_image(image: np.ndarray) -> bytes:
    from PIL import Image
    arr = (np.clip(np.asarray(image), 0.0, 1.0) * 255.0).round().astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="PNG")
    return buf.getvalue()


def decode_video(data: bytes) -> Tuple[List[np.ndarray], float]:
    """Video bytes -> (RGB float frames, fps)."""
    import cv2
    with tempfile.NamedTemporaryFile(suffix=".mp4", delete=False) as tmp:
        tmp.write(data)
        path = tmp.name
    try:
        cap = cv2.VideoCapture(path)
        frames = []
        if cap.isOpened():
            while True:
                ok, frame = cap.read()
                if not ok:
                    break
                rgb = cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)
                frames.append(rgb.astype(np.float32) / 255.0)
            fps = float(cap.get(cv2.CAP_PROP_FPS)) or 24.0
            cap.release()
        else:
            fps = 0.0
    finally:
        os.unlink(path)
    if not frames:
        raise UndecodableMedia("no decodable video frames")
    return frames, fps


def decode_wav(data: bytes) -> Tuple[np.ndarray, int]:
    """WAV bytes -> (mono float samples in [-1,1], sample rate)."""
    try:
        with wave.open(io.BytesIO(data)) as wf:
            rate = wf.getframerate()
            n = wf.getnframes()
            width = wf.getsampwidth()
            channels = wf.getnchannels()
            raw = wf.readframes(n)
    except (wave.Error, EOFError) as e:
        raise UndecodableMedia(f"cannot decode WAV: {e}") from e
    if width == 2:
        samples = np.frombuffer(raw, dtype=np.int16).astype(np.float32) / 32768.0
    elif width == 1:
        samples = (np.frombuffer(raw, dtype=np.uint8).astype(np.float32)
                   - 128.0) / 128.0
    else:
        raise UndecodableMedia(f"unsupported WAV sample width {width}")
    if channels > 1:
        samples = samples.reshape(-1, channels).mean(axis=1)
    return samples, rate


def encode_wav(samples: np.ndarray, rate: int) -> bytes:
    pcm = (np.clip(np.asarray(samples), -1.0, 1.0) * 32767.0).astype(np.int16)
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(rate)
        wf.writeframes(pcm.tobytes())
    return buf.getvalue()


def resize_image(image: np.ndarray, width: int, height: int) -> np.ndarray:
    import cv2
    if image.shape[0] == height and image.shape[1] == width:
        return image
    return cv2.resize(image, (width, height), interpolation=cv2.INTER_AREA)
