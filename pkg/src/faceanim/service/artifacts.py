"""Content-addressed blob store with checksum verification on read."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Dict, Tuple

from ..errors import IoError, NotFound


class ArtifactStore:
    """Blobs keyed by sha256 of their content; identical content dedupes."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _blob(self, artifact_id: str) -> Path:
        return self.directory / f"{artifact_id}.bin"

    def _meta(self, artifact_id: str) -> Path:
        return self.directory / f"{artifact_id}.json"

    def put(self, data: bytes, media_type: str) -> str:
        artifact_id = hashlib.sha256(data).hexdigest()
        blob = self._blob(artifact_id)
        if not blob.exists():
            tmp = blob.with_suffix(".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, blob)
            meta = {"media_type": media_type, "size": len(data),
                    "checksum": artifact_id}
            mtmp = self._meta(artifact_id).with_suffix(".mjtmp")
            mtmp.write_text(json.dumps(meta), encoding="utf-8")
            os.replace(mtmp, self._meta(artifact_id))
        return artifact_id

    def exists(self, artifact_id: str) -> bool:
        return self._blob(artifact_id).exists()

    def get(self, artifact_id: str) -> Tuple[bytes, Dict]:
        blob = self._blob(artifact_id)
        if not blob.exists():
            raise NotFound(f"no artifact {artifact_id}")
        data = blob.read_bytes()
        meta = json.loads(self._meta(artifact_id).read_text(encoding="utf-8"))
        actual = hashlib.sha256(data).hexdigest()
        if actual != meta["checksum"]:
            raise IoError(f"artifact {artifact_id} corrupt: checksum mismatch")
        return data, meta

    def count(self) -> int:
        return sum(1 for _ in self.directory.glob("*.bin"))
