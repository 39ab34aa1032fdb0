"""Video encoding behind an external-encoder boundary.

Preferred backend is an ffmpeg binary (H.264 in MP4). Without one we fall
back to OpenCV's mp4v writer, and as a last resort to a raw-frames zip
archive so test environments without any encoder still produce playable-ish
artifacts with probeable metadata.
"""

from __future__ import annotations

import io
import json
import os
import shutil
import subprocess
import tempfile
import zipfile
from typing import Dict, List, Tuple

import numpy as np

from ..errors import EncodeFailed, EncoderUnavailable

MP4_TYPE = "video/mp4"
ARCHIVE_TYPE = "application/zip"


def _to_uint8(frames: List[np.ndarray]) -> List[np.ndarray]:
    out = []
    shape = None
    for f in frames:
        f = np.asarray(f)
        if f.ndim != 3 or f.shape[2] != 3:
            raise EncodeFailed(f"frame shape {f.shape} is not HxWx3")
        if shape is None:
            shape = f.shape
        elif f.shape != shape:
            raise EncodeFailed(f"frame dims {f.shape} != {shape}")
        if f.dtype != np.uint8:
            f = (np.clip(f, 0.0, 1.0) * 255.0).round().astype(np.uint8)
        out.append(f)
    return out


def _encode_ffmpeg(frames: List[np.ndarray], fps: float) -> bytes:
    ffmpeg = shutil.which("ffmpeg")
    if ffmpeg is None:
        raise EncoderUnavailable("no ffmpeg binary on PATH")
    h, w, _ = frames[0].shape
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "out.mp4")
        proc = subprocess.run(
            [ffmpeg, "-y", "-f", "rawvideo", "-pix_fmt", "rgb24",
             "-s", f"{w}x{h}", "-r", str(fps), "-i", "-",
             "-c:v", "libx264", "-pix_fmt", "yuv420p", out],
            input=b"".join(f.tobytes() for f in frames),
            capture_output=True)
        if proc.returncode != 0:
            raise EncodeFailed(f"ffmpeg failed: {proc.stderr[-500:]!r}")
        return open(out, "rb").read()


def _encode_opencv(frames: List[np.ndarray], fps: float) -> bytes:
    import cv2
    h, w, _ = frames[0].shape
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "out.mp4")
        writer = cv2.VideoWriter(out, cv2.VideoWriter_fourcc(*"mp4v"),
                                 fps, (w, h))
        if not writer.isOpened():
            raise EncoderUnavailable("OpenCV VideoWriter could not open")
        for f in frames:
            writer.write(cv2.cvtColor(f, cv2.COLOR_RGB2BGR))
        writer.release()
        data = open(out, "rb").read()
        if not data:
            raise EncodeFailed("OpenCV produced an empty file")
        return data


def _encode_archive(frames: List[np.ndarray], fps: float) -> bytes:
    from PIL import Image
    h, w, _ = frames[0].shape
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_STORED) as zf:
        zf.writestr("meta.json", json.dumps(
            {"frames": len(frames), "fps": fps, "width": w, "height": h}))
        for i, f in enumerate(frames):
            png = io.BytesIO()
            Image.fromarray(f).save(png, format="PNG")
            zf.writestr(f"frame_{i:05d}.png", png.getvalue())
    return buf.getvalue()


def encode_video(frames: List[np.ndarray], fps: float,
                 backend: str = "auto") -> Tuple[bytes, str]:
    """Encode frames; returns (bytes, media_type)."""
    if fps <= 0:
        raise EncodeFailed(f"fps must be positive, got {fps}")
    if len(frames) == 0:
        raise EncodeFailed("no frames to encode")
    frames = _to_uint8(frames)

    if backend == "ffmpeg":
        return _encode_ffmpeg(frames, fps), MP4_TYPE
    if backend == "opencv":
        return _encode_opencv(frames, fps), MP4_TYPE
    if backend == "archive":
        return _encode_archive(frames, fps), ARCHIVE_TYPE
    if backend != "auto":
        raise EncoderUnavailable(f"unknown backend {backend!r}")

    if shutil.which("ffmpeg"):
        return _encode_ffmpeg(frames, fps), MP4_TYPE
    try:
        return _encode_opencv(frames, fps), MP4_TYPE
    except (EncoderUnavailable, ImportError):
        return _encode_archive(frames, fps), ARCHIVE_TYPE


def probe_video(data: bytes, media_type: str) -> Dict:
    """Container metadata: frames, fps, width, height, duration_s."""
    if media_type == ARCHIVE_TYPE:
        with zipfile.ZipFile(io.BytesIO(data)) as zf:
            meta = json.loads(zf.read("meta.json"))
    elif media_type == MP4_TYPE:
        import cv2
        with tempfile.NamedTemporaryFile(suffix=".mp4", delete=False) as tmp:
            tmp.write(data)
            path = tmp.name
        try:
            cap = cv2.VideoCapture(path)
            if not cap.isOpened():
                raise EncodeFailed("unreadable MP4 container")
            meta = {
                "frames": int(cap.get(cv2.CAP_PROP_FRAME_COUNT)),
                "fps": float(cap.get(cv2.CAP_PROP_FPS)),
                "width": int(cap.get(cv2.CAP_PROP_FRAME_WIDTH)),
                "height": int(cap.get(cv2.CAP_PROP_FRAME_HEIGHT)),
            }
            cap.release()
        finally:
            os.unlink(path)
    else:
        raise EncodeFailed(f"cannot probe media type {media_type!r}")
    meta["duration_s"] = meta["frames"] / meta["fps"]
    return meta
