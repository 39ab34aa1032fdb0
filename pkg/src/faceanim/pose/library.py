"""Directory-backed library of reusable pose sequences."""

from __future__ import annotations

import re
import threading
from pathlib import Path
from typing import List, Tuple

from ..errors import DuplicateId, NotFound, ParseError
from .io import load_pose, save_pose
from .types import PoseSequence

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]*$")
_SUFFIX = ".pose.json"


class PoseLibrary:
    """One `<id>.pose.json` file per sequence; single-writer adds,
    concurrent reads."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()

    def _path(self, seq_id: str) -> Path:
        if not _ID_RE.match(seq_id):
            raise NotFound(f"invalid sequence id {seq_id!r}")
        return self.directory / f"{seq_id}{_SUFFIX}"

    def list(self) -> List[Tuple[str, str, float, float]]:
        entries = []
        for path in sorted(self.directory.glob(f"*{_SUFFIX}")):
            seq_id = path.name[: -len(_SUFFIX)]
            try:
                seq = load_pose(path)
            except ParseError:
                continue
            entries.append((seq_id, seq_id, seq.duration_s, seq.fps))
        return entries

    def get(self, seq_id: str) -> PoseSequence:
        path = self._path(seq_id)
        if not path.exists():
            raise NotFound(f"no pose sequence {seq_id!r}")
        return load_pose(path)

    def add(self, seq_id: str, seq: PoseSequence) -> None:
        path = self._path(seq_id)
        with self._write_lock:
            if path.exists():
                raise DuplicateId(f"pose sequence {seq_id!r} already stored")
            save_pose(seq, path)
