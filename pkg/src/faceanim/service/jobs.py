"""Durable generation-job store with leased claims.

Status only ever moves queued -> running -> {succeeded, failed}. A claim
carries an attempt token; finalizing requires the matching token, so a
worker whose lease expired (and whose job was re-claimed) can never produce
a second terminal transition.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..errors import NotFound

QUEUED = "queued"
RUNNING = "running"
SUCCEEDED = "succeeded"
FAILED = "failed"
TERMINAL = (SUCCEEDED, FAILED)


@dataclass
class GenerationJob:
    id: str
    created_at: float
    status: str
    reference_ref: str
    pose_ref: str
    params: Dict
    result_ref: Optional[str] = None
    result_meta: Optional[Dict] = None
    error: Optional[str] = None
    attempt: int = 0
    lease_expires: float = 0.0
    worker_id: Optional[str] = None

    @staticmethod
    def new(reference_ref: str, pose_ref: str, params: Dict) -> "GenerationJob":
        return GenerationJob(
            id=uuid.uuid4().hex, created_at=time.time(), status=QUEUED,
            reference_ref=reference_ref, pose_ref=pose_ref, params=params)


class JobStore:
    """One JSON file per job, written atomically; in-process mutex makes
    claim/finalize compare-and-swap."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, job_id: str) -> Path:
        return self.directory / f"{job_id}.job.json"

    def _write(self, job: GenerationJob) -> None:
        tmp = self._path(job.id).with_suffix(".tmp")
        tmp.write_text(json.dumps(asdict(job)), encoding="utf-8")
        os.replace(tmp, self._path(job.id))

    def _read(self, path: Path) -> GenerationJob:
        return GenerationJob(**json.loads(path.read_text(encoding="utf-8")))

    def create(self, job: GenerationJob) -> None:
        with self._lock:
            self._write(job)

    def get(self, job_id: str) -> GenerationJob:
        path = self._path(job_id)
        if not path.exists():
            raise NotFound(f"no job {job_id}")
        return self._read(path)

    def list(self) -> List[GenerationJob]:
        return sorted((self._read(p) for p in
                       self.directory.glob("*.job.json")),
                      key=lambda j: j.created_at)

    def claim(self, worker_id: str, lease_seconds: float,
              now: Optional[float] = None) -> Optional[Tuple[GenerationJob, int]]:
        """Claim a queued job, or a running one whose lease expired."""
        now = time.time() if now is None else now
        with self._lock:
            for job in self.list():
                claimable = job.status == QUEUED or (
                    job.status == RUNNING and job.lease_expires <= now)
                if not claimable:
                    continue
                job.status = RUNNING
                job.attempt += 1
                job.lease_expires = now + lease_seconds
                job.worker_id = worker_id
                self._write(job)
                return job, job.attempt
        return None

    def finalize(self, job_id: str, token: int,
                 result_ref: Optional[str] = None,
                 result_meta: Optional[Dict] = None,
                 error: Optional[str] = None) -> bool:
        """Terminal transition; returns False if the token lost its claim."""
        with self._lock:
            job = self.get(job_id)
            if job.status != RUNNING or job.attempt != token:
                return False
            if error is not None:
                job.status = FAILED
                job.error = error
            else:
                job.status = SUCCEEDED
                job.result_ref = result_ref
                job.result_meta = result_meta
            job.lease_expires = 0.0
            self._write(job)
            return True
