"""REST API for pose acquisition and generation jobs."""

from __future__ import annotations

import threading
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, Form, HTTPException, Request, Response, UploadFile
from fastapi.responses import JSONResponse

from ..conditioning import locate_face
from ..errors import (
    DetectorFailure,
    EmptyAudio,
    EmptyVideo,
    NoFace,
    NotFound,
)
from ..pose.io import dumps_pose, loads_pose
from ..pose.library import PoseLibrary
from ..pose.sources import (
    NeutralTemplateDetector,
    extract_pose_from_video,
    make_neutral_template,
    pose_from_audio,
)
from ..pose.types import PoseFrame
from .artifacts import ArtifactStore
from .config import DEFAULT_FPS, DEFAULT_HEIGHT, DEFAULT_WIDTH, ServiceConfig
from .jobs import GenerationJob, JobStore, SUCCEEDED
from .media import UndecodableMedia, decode_image, decode_video, decode_wav
from .worker import VideoGenerator, worker_loop

POSE_MEDIA_TYPE = "application/x-pose+json"


def _job_view(job: GenerationJob) -> dict:
    view = {
        "id": job.id,
        "status": job.status,
        "created_at": job.created_at,
        "params": job.params,
        "url": f"/api/jobs/{job.id}",
    }
    if job.status == SUCCEEDED:
        view["result_url"] = f"/api/artifacts/{job.result_ref}"
        view.update(job.result_meta or {})
    if job.error is not None:
        view["error"] = job.error
    return view


def create_app(config: Optional[ServiceConfig] = None,
               generator: Optional[VideoGenerator] = None,
               detector=None,
               start_workers: bool = False) -> FastAPI:
    config = config or ServiceConfig()
    detector = detector or NeutralTemplateDetector()
    jobs = JobStore(config.job_dir)
    artifacts = ArtifactStore(config.artifact_dir)
    library = PoseLibrary(config.pose_library_dir)

    stop = threading.Event()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        threads = []
        if start_workers and generator is not None:
            for i in range(config.worker_count):
                t = threading.Thread(
                    target=worker_loop,
                    args=(jobs, artifacts, generator, f"worker-{i}", stop),
                    kwargs=dict(lease_seconds=config.lease_seconds,
                                max_frames=config.max_frames,
                                encode_backend=config.encode_backend),
                    daemon=True)
                t.start()
                threads.append(t)
        yield
        stop.set()
        for t in threads:
            t.join(timeout=5)

    app = FastAPI(title="faceanim", lifespan=lifespan, openapi_url="/api/spec")
    app.state.jobs = jobs
    app.state.artifacts = artifacts
    app.state.library = library

    async def _read_limited(upload: UploadFile) -> bytes:
        data = await upload.read()
        if len(data) > config.upload_limit_bytes:
            raise HTTPException(413, "TooLarge: upload exceeds size limit")
        return data

    def _store_pose(seq) -> str:
        return artifacts.put(dumps_pose(seq).encode("utf-8"), POSE_MEDIA_TYPE)

    def _check_face(image) -> PoseFrame:
        try:
            landmarks = PoseFrame.from_points(detector.detect(image))
        except Exception as e:
            raise HTTPException(422, f"NoFace: {e}") from e
        try:
            locate_face(landmarks, height=image.shape[0],
                        width=image.shape[1])
        except NoFace as e:
            raise HTTPException(422, f"NoFace: {e}") from e
        return landmarks

    @app.get("/api/pose-library")
    def pose_library() -> list:
        return [
            {"id": i, "name": name, "duration_s": dur, "fps": fps}
            for i, name, dur, fps in library.list()
        ]

    @app.get("/api/pose-library/{pose_id}")
    def pose_library_get(pose_id: str) -> Response:
        try:
            seq = library.get(pose_id)
        except NotFound as e:
            raise HTTPException(404, f"UnknownLibraryId: {e}") from e
        return Response(dumps_pose(seq), media_type=POSE_MEDIA_TYPE)

    @app.post("/api/pose/extract", status_code=201)
    async def pose_extract(video: UploadFile) -> dict:
        data = await _read_limited(video)
        try:
            frames, fps = decode_video(data)
        except UndecodableMedia as e:
            raise HTTPException(422, f"UndecodableMedia: {e}") from e
        try:
            seq = extract_pose_from_video(frames, fps, detector)
        except (DetectorFailure, EmptyVideo) as e:
            raise HTTPException(422, f"DetectorFailure: {e}") from e
        return {"pose_id": _store_pose(seq), "frames": len(seq),
                "fps": seq.fps}

    @app.post("/api/pose/from-audio", status_code=201)
    async def pose_audio(audio: UploadFile) -> dict:
        data = await _read_limited(audio)
        try:
            samples, rate = decode_wav(data)
        except UndecodableMedia as e:
            raise HTTPException(422, f"UndecodableMedia: {e}") from e
        try:
            seq = pose_from_audio(samples, rate, make_neutral_template())
        except EmptyAudio as e:
            raise HTTPException(422, f"UndecodableMedia: {e}") from e
        return {"pose_id": _store_pose(seq), "frames": len(seq),
                "fps": seq.fps}

    @app.post("/api/jobs", status_code=202)
    async def submit_job(reference: UploadFile,
                         pose_source: str = Form(...),
                         width: Optional[int] = Form(None),
                         height: Optional[int] = Form(None),
                         fps: Optional[float] = Form(None),
                         seed: Optional[int] = Form(None),
                         video: Optional[UploadFile] = None,
                         audio: Optional[UploadFile] = None) -> dict:
        ref_bytes = await _read_limited(reference)
        try:
            image = decode_image(ref_bytes)
        except UndecodableMedia as e:
            raise HTTPException(400, f"InvalidImage: {e}") from e
        _check_face(image)

        if pose_source.startswith("library:"):
            lib_id = pose_source.split(":", 1)[1]
            try:
                pose_ref = _store_pose(library.get(lib_id))
            except NotFound as e:
                raise HTTPException(404, f"UnknownLibraryId: {e}") from e
        elif pose_source.startswith("pose:"):
            pose_ref = pose_source.split(":", 1)[1]
            if not artifacts.exists(pose_ref):
                raise HTTPException(404, f"no pose artifact {pose_ref}")
        elif pose_source == "video":
            if video is None:
                raise HTTPException(422, "PoseExtractionFailed: missing "
                                         "video upload")
            result = await pose_extract(video)
            pose_ref = result["pose_id"]
        elif pose_source == "audio":
            if audio is None:
                raise HTTPException(422, "PoseExtractionFailed: missing "
                                         "audio upload")
            result = await pose_audio(audio)
            pose_ref = result["pose_id"]
        else:
            raise HTTPException(422, f"unknown pose_source {pose_source!r}")

        params = {
            "width": width if width is not None else DEFAULT_WIDTH,
            "height": height if height is not None else DEFAULT_HEIGHT,
            "fps": fps if fps is not None else DEFAULT_FPS,
            "seed": seed if seed is not None else 0,
        }
        job = GenerationJob.new(reference_ref=artifacts.put(ref_bytes,
                                                            "image/png"),
                                pose_ref=pose_ref, params=params)
        jobs.create(job)
        return {"id": job.id, "status": job.status,
                "url": f"/api/jobs/{job.id}"}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str) -> dict:
        try:
            job = jobs.get(job_id)
        except NotFound as e:
            raise HTTPException(404, str(e)) from e
        return _job_view(job)

    @app.get("/api/jobs")
    def list_jobs() -> list:
        return [_job_view(j) for j in jobs.list()]

    @app.get("/api/artifacts/{artifact_id}")
    def get_artifact(artifact_id: str) -> Response:
        try:
            data, meta = artifacts.get(artifact_id)
        except NotFound as e:
            raise HTTPException(404, str(e)) from e
        return Response(content=data, media_type=meta["media_type"])

    return app
