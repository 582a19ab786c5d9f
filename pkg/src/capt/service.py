"""HTTP gateway: the exercise catalog, attempt submission and attempt lookup.

Routes live under /v1. Submission runs the full pipeline and persists an
attempt record whether the sample passed validation (200) or not (422);
transport-level failures use a uniform error envelope.
"""

from __future__ import annotations

import hashlib
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import FastAPI, File, Form, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .alignment import InfeasibleAlignmentError
from .audio import WavFormatError
from .config import ServiceConfig
from .exercises import ExerciseScript, load_exercise_catalog
from .pipeline import ingest_wav, run_pipeline
from .posteriors import (
    DemoProvider,
    FixtureProvider,
    PosteriorProvider,
    PpgFormatError,
    load_ppg,
)
from .serialize import (
    analysis_to_dict,
    exercise_summary,
    exercise_to_dict,
    validation_to_dict,
)
from .store import AttemptRecord, AttemptStore, new_attempt_id


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def _build_provider(config: ServiceConfig) -> PosteriorProvider | None:
    if config.provider.kind == "demo":
        return DemoProvider(error_plan=dict(config.provider.error_plan))
    if config.provider.kind == "fixture":
        return FixtureProvider(Path(config.provider.ppg_dir))
    return None  # external: every request must carry its own ppg


def create_app(config: ServiceConfig, catalog: list[ExerciseScript] | None = None) -> FastAPI:
    if catalog is None:
        catalog = load_exercise_catalog(config.catalog_path)
    exercises = {script.id: script for script in catalog}
    store = AttemptStore(config.attempts_dir)
    provider = _build_provider(config)

    app = FastAPI(title="pronunciation feedback gateway", version="1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/v1/exercises")
    def list_exercises() -> dict[str, Any]:
        return {"exercises": [exercise_summary(s) for s in catalog]}

    @app.get("/v1/exercises/{exercise_id}")
    def get_exercise(exercise_id: str):
        script = exercises.get(exercise_id)
        if script is None:
            return _error(404, "unknown_exercise", f"no exercise {exercise_id!r}")
        return exercise_to_dict(script)

    @app.get("/v1/attempts/{attempt_id}")
    def get_attempt(attempt_id: str):
        record = store.load(attempt_id)
        if record is None:
            return _error(404, "unknown_attempt", f"no attempt {attempt_id!r}")
        return record.to_dict()

    @app.post("/v1/attempts")
    async def submit_attempt(
        exercise_id: str = Form(...),
        audio: UploadFile = File(...),
        ppg: UploadFile | None = File(default=None),
    ):
        script = exercises.get(exercise_id)
        if script is None:
            return _error(404, "unknown_exercise", f"no exercise {exercise_id!r}")

        audio_bytes = await audio.read()
        try:
            buffer = ingest_wav(audio_bytes)
        except WavFormatError as exc:
            return _error(400, "bad_audio", str(exc))

        try:
            if ppg is not None:
                import json as _json
                import tempfile

                ppg_bytes = await ppg.read()
                # load_ppg validates shape and inventory; go through a temp file
                # so file- and request-supplied posteriorgrams share one code path.
                with tempfile.NamedTemporaryFile("wb", suffix=".ppg.json") as fh:
                    fh.write(ppg_bytes)
                    fh.flush()
                    posteriorgram = load_ppg(fh.name, script.inventory)
                provider_used = "external"
            elif provider is not None:
                posteriorgram = provider.provide(buffer, script)
                provider_used = config.provider.kind
            else:
                return _error(400, "missing_ppg",
                              "service runs the external provider; requests must attach a ppg part")
        except PpgFormatError as exc:
            return _error(400, "bad_ppg", str(exc))

        attempt_id = new_attempt_id()
        received_at = datetime.now(timezone.utc).isoformat()
        digest = hashlib.sha256(audio_bytes).hexdigest()

        try:
            outcome = run_pipeline(buffer, posteriorgram, script, config)
        except InfeasibleAlignmentError as exc:
            return _error(500, "alignment_infeasible", str(exc))

        if outcome.ok:
            result = analysis_to_dict(outcome.analysis)
            record = AttemptRecord(attempt_id, exercise_id, received_at, digest,
                                   provider_used, "analyzed", result)
            store.save(record)
            return JSONResponse(status_code=200,
                                content={"attempt_id": attempt_id, "analysis": result})

        report = validation_to_dict(outcome.validation)
        record = AttemptRecord(attempt_id, exercise_id, received_at, digest,
                               provider_used, "rejected", report)
        store.save(record)
        return JSONResponse(
            status_code=422,
            content={
                "error": {
                    "code": "validation_failed",
                    "message": f"sample rejected by the {outcome.validation.failed_code} check",
                },
                "attempt_id": attempt_id,
                "validation": report,
            },
        )

    return app
