"""HTTP JSON API over verification and contestation sessions.

A session holds the framework produced for a claim (or opened from a
document), its strengths under one semantics, and the edit history.
Edits within a session are serialized by a per-session lock; reads see
immutable snapshots. Sessions can be persisted to disk as one JSON
document each and are restored on startup.
"""

from __future__ import annotations

import json
import logging
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from threading import Lock

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from claimarg import contestation, generation, pipeline, qbaf as qbaf_mod, semantics
from claimarg.generation import GenerationParams, MockBackend
from claimarg.llm_client import DiskCache, LlmBackend, ModelConfig
from claimarg.qbaf import InvalidFrameworkError, Qbaf, QbafError, classify

log = logging.getLogger(__name__)


@dataclass
class Session:
    session_id: str
    semantics: str
    initial: Qbaf
    current: Qbaf
    strengths: dict[str, float]
    history: list[contestation.ContestationDiff] = field(default_factory=list)
    lock: Lock = field(default_factory=Lock, repr=False)


def _polarities(qbaf: Qbaf) -> dict[str, str]:
    labels = {qbaf.root: "root"}
    for arg in qbaf.arguments:
        if arg.id != qbaf.root:
            labels[arg.id] = classify(qbaf, arg.id)
    return labels


def _session_view(session: Session) -> dict:
    root_strength = session.strengths[session.current.root]
    return {
        "session_id": session.session_id,
        "semantics": session.semantics,
        "qbaf": qbaf_mod.to_dict(session.current, {session.semantics: session.strengths}),
        "root_strength": root_strength,
        "label": pipeline.decide(root_strength),
        "polarity": _polarities(session.current),
        "history": [contestation.diff_to_dict(d) for d in session.history],
    }


def _session_snapshot(session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "semantics": session.semantics,
        "initial_qbaf": qbaf_mod.to_dict(session.initial),
        "current_qbaf": qbaf_mod.to_dict(session.current),
        "history": [contestation.diff_to_dict(d) for d in session.history],
    }


def create_app(
    snapshot_dir: str | Path | None = None,
    model_config: ModelConfig | None = None,
    cache: DiskCache | None = None,
    allow_cors: bool = False,
) -> FastAPI:
    app = FastAPI(title="claimarg service")
    sessions: dict[str, Session] = {}
    sessions_lock = Lock()
    snapshots = Path(snapshot_dir) if snapshot_dir else None

    if allow_cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def persist(session: Session) -> None:
        if snapshots is None:
            return
        snapshots.mkdir(parents=True, exist_ok=True)
        path = snapshots / f"{session.session_id}.json"
        path.write_text(json.dumps(_session_snapshot(session), indent=2), "utf-8")

    def restore() -> None:
        if snapshots is None or not snapshots.exists():
            return
        for path in snapshots.glob("*.json"):
            try:
                doc = json.loads(path.read_text("utf-8"))
                initial = qbaf_mod.from_dict(doc["initial_qbaf"])
                current = qbaf_mod.from_dict(doc["current_qbaf"])
                session = Session(
                    session_id=doc["session_id"],
                    semantics=doc["semantics"],
                    initial=initial,
                    current=current,
                    strengths=semantics.evaluate(current, doc["semantics"]),
                )
                # Histories are informational after restart; replay metadata
                # stays in the snapshot file.
                sessions[session.session_id] = session
            except (QbafError, KeyError, json.JSONDecodeError) as exc:
                log.warning("skipping unreadable session snapshot %s: %s", path, exc)

    restore()

    def open_session(qbaf: Qbaf, semantics_name: str) -> Session:
        session = Session(
            session_id=uuid.uuid4().hex,
            semantics=semantics_name,
            initial=qbaf,
            current=qbaf,
            strengths=semantics.evaluate(qbaf, semantics_name),
        )
        with sessions_lock:
            sessions[session.session_id] = session
        persist(session)
        return session

    def make_backend(body: dict) -> generation.GeneratorBackend:
        if body.get("mock", model_config is None):
            return MockBackend(seed=int(body.get("seed", 0)))
        return LlmBackend(model_config, cache)

    @app.get("/semantics")
    def list_semantics() -> dict:
        return {"semantics": semantics.semantics_names()}

    @app.post("/verify")
    def verify(body: dict) -> JSONResponse:
        claim_text = body.get("claim")
        if not isinstance(claim_text, str) or not claim_text.strip():
            return JSONResponse({"error": "missing or empty 'claim'"}, status_code=400)
        method = body.get("method", pipeline.ARGLLM)
        if method not in pipeline.METHODS:
            return JSONResponse({"error": f"unknown method {method!r}"}, status_code=400)
        semantics_name = body.get("semantics", semantics.DF_QUAD)
        try:
            semantics.get_semantics(semantics_name)
            params = GenerationParams(
                depth=int(body.get("depth", 1)),
                supporters_per_node=int(body.get("supporters_per_node", 1)),
                attackers_per_node=int(body.get("attackers_per_node", 1)),
                claim_base_mode=body.get("base_mode", generation.FIXED_HALF),
            )
        except (ValueError, semantics.SemanticsError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)

        claim = pipeline.Claim(
            id=body.get("id", "interactive"),
            text=claim_text,
            context=body.get("context"),
        )
        config = pipeline.MethodConfig(
            method=method,
            backend=make_backend(body),
            semantics=semantics_name,
            generation=params,
        )
        try:
            verdict = pipeline.verify(claim, config)
        except generation.BackendError as exc:
            return JSONResponse({"error": str(exc)}, status_code=502)

        response: dict = {
            "method": verdict.method,
            "label": verdict.label,
            "root_strength": verdict.root_strength,
            "transcript": verdict.transcript.turns,
        }
        if verdict.qbaf is not None:
            session = open_session(verdict.qbaf, semantics_name)
            response["session_id"] = session.session_id
            response["qbaf"] = qbaf_mod.to_dict(
                verdict.qbaf, {semantics_name: verdict.strengths or {}}
            )
            response["polarity"] = _polarities(verdict.qbaf)
        return JSONResponse(response)

    @app.post("/sessions")
    def open_from_document(body: dict) -> JSONResponse:
        semantics_name = body.get("semantics", semantics.DF_QUAD)
        try:
            semantics.get_semantics(semantics_name)
            framework = qbaf_mod.from_dict(body["qbaf"])
            session = open_session(framework, semantics_name)
        except (KeyError, QbafError, InvalidFrameworkError, semantics.SemanticsError) as exc:
            return JSONResponse({"error": f"invalid framework: {exc}"}, status_code=400)
        return JSONResponse(_session_view(session))

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> JSONResponse:
        session = sessions.get(session_id)
        if session is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        with session.lock:
            return JSONResponse(_session_view(session))

    @app.post("/sessions/{session_id}/contest")
    def contest(session_id: str, body: dict) -> JSONResponse:
        session = sessions.get(session_id)
        if session is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        try:
            edit = contestation.edit_from_dict(body)
        except contestation.EditError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        with session.lock:
            try:
                edited, diff = contestation.apply_edit(
                    session.current, edit, session.semantics
                )
            except QbafError as exc:
                return JSONResponse({"error": str(exc)}, status_code=422)
            session.current = edited
            session.strengths = semantics.evaluate(edited, session.semantics)
            session.history.append(diff)
            persist(session)
            view = _session_view(session)
        view["diff"] = contestation.diff_to_dict(diff)
        return JSONResponse(view)

    return app
