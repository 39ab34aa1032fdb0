"""Canonical pose file format.

UTF-8 JSON, version 1:
    {"version":1,"schema_id":"face68","fps":24,"width":512,"height":512,
     "frames":[{"kp":[[x,y,c],...]}]}
Writes emit keys in exactly that order; readers accept any order.
Floats are written with repr precision, so load(save(s)) == s bit-exactly.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

from ..errors import IoError, ParseError
from .types import SCHEMAS, PoseFrame, PoseSequence

FORMAT_VERSION = 1


def dumps_pose(seq: PoseSequence) -> str:
    doc = {
        "version": FORMAT_VERSION,
        "schema_id": seq.schema_id,
        "fps": seq.fps,
        "width": seq.width,
        "height": seq.height,
        "frames": [
            {"kp": [[x, y, c] for x, y, c in f.keypoints]} for f in seq.frames
        ],
    }
    return json.dumps(doc, separators=(",", ":"))


def save_pose(seq: PoseSequence, path) -> None:
    try:
        Path(path).write_text(dumps_pose(seq), encoding="utf-8")
    except OSError as e:
        raise IoError(str(e)) from e


def _reject_constant(name):
    raise ParseError(f"non-finite number {name!r} in pose file")


def loads_pose(text: str) -> PoseSequence:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ParseError("pose file root must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported version {doc.get('version')!r}")
    try:
        schema_id = doc["schema_id"]
        fps = doc["fps"]
        width = doc["width"]
        height = doc["height"]
        raw_frames = doc["frames"]
    except KeyError as e:
        raise ParseError(f"missing key {e}") from e
    if schema_id not in SCHEMAS:
        raise ParseError(f"unknown schema_id {schema_id!r}")
    if not isinstance(fps, (int, float)) or not math.isfinite(fps) or fps <= 0:
        raise ParseError(f"bad fps {fps!r}")
    if not isinstance(raw_frames, list) or not raw_frames:
        raise ParseError("frames must be a non-empty list")

    expected = SCHEMAS[schema_id]
    frames = []
    for i, rf in enumerate(raw_frames):
        kp = rf.get("kp") if isinstance(rf, dict) else None
        if not isinstance(kp, list):
            raise ParseError(f"frame {i}: missing kp list")
        if len(kp) != expected:
            raise ParseError(
                f"frame {i}: {len(kp)} keypoints, schema {schema_id!r} "
                f"requires {expected}"
            )
        pts = []
        for j, p in enumerate(kp):
            if not (isinstance(p, list) and len(p) == 3):
                raise ParseError(f"frame {i} keypoint {j}: not an [x,y,c] triple")
            x, y, c = p
            for v in (x, y, c):
                if not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise ParseError(f"frame {i} keypoint {j}: bad value {v!r}")
            if not (0 <= x <= 1 and 0 <= y <= 1 and 0 <= c <= 1):
                raise ParseError(f"frame {i} keypoint {j}: out of [0,1] range")
            pts.append((float(x), float(y), float(c)))
        frames.append(PoseFrame(tuple(pts)))

    return PoseSequence(
        fps=float(fps), width=int(width), height=int(height),
        frames=frames, schema_id=schema_id,
    )


def load_pose(path) -> PoseSequence:
    if not os.path.exists(path):
        raise IoError(f"no such file: {path}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(str(e)) from e
    return loads_pose(text)
