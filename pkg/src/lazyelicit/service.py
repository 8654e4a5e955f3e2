"""HTTP facade over elicitation sessions.

Sessions live in memory, keyed by opaque ids, with optional JSON snapshots for
restarts.  Mutations on one session are serialized behind a per-session lock,
so two racing answers to the same pending question resolve to exactly one
winner; reads always see the latest committed snapshot.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import elicitation, io
from .elicitation import DirectRatioAnswer, ElicitationSession
from .errors import (
    DataFormatError,
    DecisionSupportError,
    DimensionMismatchError,
    EvaluationError,
    InvalidAnswerError,
    InvalidModelError,
    SessionStateError,
    UndefinedRatioError,
)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class SessionResource:
    id: str
    session: ElicitationSession
    created: str
    updated: str
    # Inputs retained so snapshots can be replayed after a restart.
    attributes_json: Any
    plans_rows: list[dict]
    epsilon: float
    accepted: bool = False


class SessionStore:
    """In-memory session registry with per-session write locks."""

    def __init__(self, snapshot_dir: str | None = None) -> None:
        self._sessions: dict[str, SessionResource] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        if self.snapshot_dir:
            self.snapshot_dir.mkdir(parents=True, exist_ok=True)
            self._load_snapshots()

    def add(self, resource: SessionResource) -> None:
        with self._registry_lock:
            self._sessions[resource.id] = resource
            self._locks[resource.id] = threading.Lock()
        self._snapshot(resource)

    def get(self, session_id: str) -> SessionResource | None:
        return self._sessions.get(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        return self._locks[session_id]

    def commit(self, resource: SessionResource) -> None:
        self._sessions[resource.id] = resource
        self._snapshot(resource)

    def _snapshot(self, resource: SessionResource) -> None:
        if not self.snapshot_dir:
            return
        payload = {
            "id": resource.id,
            "created": resource.created,
            "updated": resource.updated,
            "attributes": resource.attributes_json,
            "plans": resource.plans_rows,
            "epsilon": resource.epsilon,
            "answers": [io.answer_to_dict(a) for a in resource.session.answer_log],
            "accepted": resource.accepted,
        }
        path = self.snapshot_dir / f"{resource.id}.json"
        path.write_text(io.dump_json(payload), encoding="utf-8")

    def _load_snapshots(self) -> None:
        for path in sorted(self.snapshot_dir.glob("*.json")):
            payload = json.loads(path.read_text(encoding="utf-8"))
            attributes, subutilities = io.attributes_from_json(payload["attributes"])
            plans = io.plans_from_json(payload["plans"])
            answers = tuple(io.answer_from_dict(a) for a in payload["answers"])
            session = elicitation.replay_answers(
                plans, attributes, subutilities, answers, payload["epsilon"]
            )
            if payload.get("accepted"):
                session = elicitation.finish(session)
            resource = SessionResource(
                id=payload["id"],
                session=session,
                created=payload["created"],
                updated=payload["updated"],
                attributes_json=payload["attributes"],
                plans_rows=payload["plans"],
                epsilon=payload["epsilon"],
                accepted=bool(payload.get("accepted", False)),
            )
            self._sessions[resource.id] = resource
            self._locks[resource.id] = threading.Lock()


def _error(status: int, code: str, message: str, detail: Any = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _resource_payload(resource: SessionResource) -> dict:
    return {
        "id": resource.id,
        "created": resource.created,
        "updated": resource.updated,
        "session": io.session_to_dict(resource.session),
        "plans": io.plans_to_list(resource.session.matrix),
        "plan_labels": [p.label for p in resource.session.matrix.plans],
        "attributes": resource.attributes_json,
    }


def create_app(defaults: dict | None = None, snapshot_dir: str | None = None) -> FastAPI:
    """Build the API application.

    ``defaults`` may hold ``attributes`` (parsed schema tuple) and ``plans``
    (PlanRecord tuple) used when a create request omits them.
    """
    app = FastAPI(title="lazyelicit", version="0.1.0")
    store = SessionStore(snapshot_dir=snapshot_dir)
    app.state.store = store
    defaults = defaults or {}

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "bad-request", "request body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "bad-request", "request body must be a JSON object")
        try:
            if "attributes" in body:
                attributes_json = body["attributes"]
                attributes, subutilities = io.attributes_from_json(attributes_json)
            elif "attributes" in defaults:
                attributes, subutilities = defaults["attributes"]
                attributes_json = None
            else:
                return _error(400, "bad-request", "no attributes given and no server default")
            if "plans" in body:
                raw_plans = body["plans"]
                if isinstance(raw_plans, str):
                    plans, _ = io.plans_from_csv(raw_plans, [a.name for a in attributes])
                else:
                    plans = io.plans_from_json(raw_plans)
            elif "plans" in defaults:
                plans = defaults["plans"]
            else:
                return _error(400, "bad-request", "no plans given and no server default")
            epsilon = float(body.get("epsilon", 0.0))
            session = elicitation.start_session(plans, attributes, subutilities, epsilon)
        except (DataFormatError, DimensionMismatchError, InvalidModelError,
                EvaluationError, ValueError) as exc:
            return _error(400, "bad-request", str(exc))
        resource = SessionResource(
            id=uuid.uuid4().hex,
            session=session,
            created=_now(),
            updated=_now(),
            attributes_json=(
                attributes_json
                if attributes_json is not None
                else _schema_to_json(attributes, subutilities)
            ),
            plans_rows=[{"label": p.label, "w": list(p.w)} for p in plans],
            epsilon=epsilon,
        )
        store.add(resource)
        return _resource_payload(resource)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        resource = store.get(session_id)
        if resource is None:
            return _error(404, "not-found", f"no session {session_id}")
        return _resource_payload(resource)

    @app.get("/sessions/{session_id}/frontier")
    def get_frontier(session_id: str):
        resource = store.get(session_id)
        if resource is None:
            return _error(404, "not-found", f"no session {session_id}")
        frontier = resource.session.frontier
        return {
            "surviving": list(frontier.surviving),
            "count": len(frontier.surviving),
            "eliminated": [list(pair) for pair in resource.session.eliminations],
        }

    @app.get("/sessions/{session_id}/question")
    def get_question(session_id: str):
        resource = store.get(session_id)
        if resource is None:
            return _error(404, "not-found", f"no session {session_id}")
        with store.lock(session_id):
            resource = store.get(session_id)
            session = resource.session
            if session.pending is not None:
                return io.question_to_dict(session.pending)
            if session.status == elicitation.STATUS_DONE or session.decided:
                return Response(status_code=204)
            if len(session.matrix.columns) < 2:
                return Response(status_code=204)
            session, question = elicitation.next_question(session)
            store.commit(replace(resource, session=session, updated=_now()))
            return io.question_to_dict(question)

    @app.post("/sessions/{session_id}/answer")
    async def post_answer(session_id: str, request: Request):
        resource = store.get(session_id)
        if resource is None:
            return _error(404, "not-found", f"no session {session_id}")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(422, "invalid-answer", "request body must be JSON")
        try:
            answer = io.answer_from_dict(body)
        except (DataFormatError, InvalidAnswerError) as exc:
            return _error(422, "invalid-answer", str(exc))
        with store.lock(session_id):
            resource = store.get(session_id)
            session = resource.session
            try:
                if isinstance(answer, DirectRatioAnswer):
                    session = elicitation.apply_direct_ratio(session, answer)
                else:
                    if session.pending is None:
                        return _error(409, "no-pending-question", "no question is pending")
                    session = elicitation.apply_answer(session, answer)
            except SessionStateError as exc:
                return _error(409, "conflict", str(exc))
            except (InvalidAnswerError, UndefinedRatioError) as exc:
                return _error(422, "invalid-answer", str(exc))
            resource = replace(resource, session=session, updated=_now())
            store.commit(resource)
        return _resource_payload(resource)

    @app.post("/sessions/{session_id}/accept")
    def accept_session(session_id: str):
        resource = store.get(session_id)
        if resource is None:
            return _error(404, "not-found", f"no session {session_id}")
        with store.lock(session_id):
            resource = store.get(session_id)
            session = elicitation.finish(resource.session)
            report = elicitation.accept(session)
            resource = replace(resource, session=session, updated=_now(), accepted=True)
            store.commit(resource)
        return io.final_report_to_dict(report)

    return app


def _schema_to_json(attributes, subutilities) -> list[dict]:
    return [
        {
            "name": attribute.name,
            "kind": attribute.kind,
            "worst": attribute.worst,
            "best": attribute.best,
            "unit": attribute.unit,
            "subutility": {
                "type": fn.form,
                "points": [[value, utility] for value, utility in fn.points],
            },
        }
        for attribute, fn in zip(attributes, subutilities)
    ]
