"""HTTP JSON API over the ranking analyses, with per-session revisions.

A session holds one problem; the client revises its pairwise judgments and
re-runs analyses, mirroring the decision maker's loop: judge, learn which
judgments clash, revise, judge again.  Analysis responses are byte-identical
to the command-line structured reports for the equivalent problem document.
"""
from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.staticfiles import StaticFiles

from .analysis import (
    AnalysisPreconditionError,
    InconsistentProblemError,
    Problem,
    base_system,
    check_consistency,
)
from .documents import (
    ProblemFormatError,
    check_document,
    parse_problem,
    render_report,
    run_analysis,
    ReportFormat,
)
from .engine import Mode, SDSystem
from .model import Comparison, ComparisonKind, ReferenceComparisons
from .numbers import rational_text

__all__ = ["build_app", "FRONTEND_ENV"]

FRONTEND_ENV = "SDRANK_FRONTEND"

_KIND_NAMES = {ComparisonKind.STRICT: "strict", ComparisonKind.INDIFFERENT: "indifferent"}
_NAMES_KIND = {name: kind for kind, name in _KIND_NAMES.items()}


@dataclass
class _Session:
    ident: str
    problem: Problem
    revision: int = 0
    reports: list[bytes] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    _base_revision: int = -1
    _base: SDSystem | None = None

    def base(self) -> SDSystem | None:
        """Base elimination pass for the current revision (None = infeasible)."""
        with self.lock:
            if self._base_revision != self.revision:
                try:
                    self._base = base_system(self.problem)
                except InconsistentProblemError:
                    self._base = None
                self._base_revision = self.revision
            return self._base


def _summary(session: _Session) -> dict[str, Any]:
    problem = session.problem
    return {
        "id": session.ident,
        "revision": session.revision,
        "epsilon": rational_text(problem.config.epsilon),
        "criteria": [criterion.name for criterion in problem.criteria],
        "alternatives": list(problem.table.alternatives),
        "comparisons": [
            {
                "first": c.first,
                "kind": _KIND_NAMES[c.kind],
                "second": c.second,
                "ref": c.ref,
            }
            for c in problem.comparisons.pairs
        ],
        "feasible": session.base() is not None,
        "analyses": len(session.reports),
    }


def _check_body(problem: Problem) -> dict[str, Any]:
    report = check_consistency(problem, mode=Mode.ENUMERATE_ALL)
    document = check_document(problem, report)
    return {"kind": document.kind, **document.body}


async def _json_body(request: Request) -> Any:
    payload = await request.body()
    try:
        return json.loads(payload) if payload else {}
    except json.JSONDecodeError as error:
        raise HTTPException(400, f"malformed JSON body: {error.msg}") from error


def _edited_comparisons(
    current: ReferenceComparisons, body: Any
) -> ReferenceComparisons:
    if not isinstance(body, dict):
        raise HTTPException(400, "expected an object with 'add' and/or 'remove'")
    unknown = set(body) - {"add", "remove"}
    if unknown:
        raise HTTPException(400, f"unknown fields {sorted(unknown)}")
    removals = body.get("remove", [])
    additions = body.get("add", [])
    if not isinstance(removals, list) or not all(isinstance(r, str) for r in removals):
        raise HTTPException(400, "'remove' must be an array of comparison refs")
    if not isinstance(additions, list):
        raise HTTPException(400, "'add' must be an array of comparison objects")

    known_refs = {c.ref for c in current.pairs}
    for ref in removals:
        if ref not in known_refs:
            raise HTTPException(422, f"no comparison {ref!r} to remove")
    kept = [c for c in current.pairs if c.ref not in set(removals)]

    added = []
    for position, entry in enumerate(additions):
        where = f"add[{position}]"
        if not isinstance(entry, dict):
            raise HTTPException(400, f"{where}: expected an object")
        try:
            first = entry["first"]
            second = entry["second"]
            kind = _NAMES_KIND[entry["kind"]]
        except KeyError as error:
            raise HTTPException(
                400, f"{where}: missing or invalid field {error.args[0]!r}"
            ) from error
        if not isinstance(first, str) or not isinstance(second, str):
            raise HTTPException(400, f"{where}: names must be strings")
        try:
            added.append(Comparison(first, kind, second))
        except ValueError as error:
            raise HTTPException(422, f"{where}: {error}") from error
    try:
        return ReferenceComparisons(tuple(kept + added))
    except ValueError as error:
        raise HTTPException(422, str(error)) from error


def build_app(frontend: Path | None = None) -> FastAPI:
    """Application factory; each app owns an isolated in-memory session store."""
    app = FastAPI(title="robust ranking service")
    sessions: dict[str, _Session] = {}

    def _session(ident: str) -> _Session:
        try:
            return sessions[ident]
        except KeyError:
            raise HTTPException(404, f"no session {ident!r}") from None

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request) -> dict[str, Any]:
        payload = await request.body()
        try:
            problem = parse_problem(payload)
        except ProblemFormatError as error:
            raise HTTPException(400, str(error)) from error
        session = _Session(secrets.token_hex(8), problem)
        sessions[session.ident] = session
        return _summary(session)

    @app.get("/sessions/{ident}")
    def get_session(ident: str) -> dict[str, Any]:
        return _summary(_session(ident))

    @app.post("/sessions/{ident}/comparisons")
    async def revise_comparisons(ident: str, request: Request) -> dict[str, Any]:
        session = _session(ident)
        body = await _json_body(request)
        edited = _edited_comparisons(session.problem.comparisons, body)
        with session.lock:
            if edited != session.problem.comparisons:
                try:
                    session.problem = session.problem.with_comparisons(edited)
                except ValueError as error:
                    raise HTTPException(422, str(error)) from error
                session.revision += 1
        return {
            "id": session.ident,
            "revision": session.revision,
            "report": _check_body(session.problem),
        }

    @app.post("/sessions/{ident}/analyses")
    def request_analysis(ident: str, body: dict[str, Any]) -> Response:
        session = _session(ident)
        kind = body.get("kind")
        if not isinstance(kind, str):
            raise HTTPException(400, "field 'kind' (string) is required")
        params = body.get("params", {})
        if not isinstance(params, dict):
            raise HTTPException(400, "field 'params' must be an object")
        unknown = set(body) - {"kind", "params"}
        if unknown:
            raise HTTPException(400, f"unknown fields {sorted(unknown)}")
        try:
            document = run_analysis(session.problem, kind, params, base=session.base())
        except AnalysisPreconditionError as error:
            raise HTTPException(422, str(error)) from error
        except KeyError as error:
            raise HTTPException(422, str(error.args[0])) from error
        except ValueError as error:
            raise HTTPException(400, str(error)) from error
        payload = render_report(document, ReportFormat.STRUCTURED)
        with session.lock:
            session.reports.append(payload)
            index = len(session.reports)
        return Response(
            content=payload,
            media_type="application/json",
            headers={"X-Analysis-Index": str(index)},
        )

    @app.get("/sessions/{ident}/analyses/{index}")
    def get_analysis(ident: str, index: int) -> Response:
        session = _session(ident)
        if not 1 <= index <= len(session.reports):
            raise HTTPException(404, f"no analysis #{index}")
        return Response(
            content=session.reports[index - 1],
            media_type="application/json",
            headers={"X-Analysis-Index": str(index)},
        )

    static_dir = frontend
    if static_dir is None:
        override = os.environ.get(FRONTEND_ENV)
        if override:
            static_dir = Path(override)
        else:
            static_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="frontend")
    return app
