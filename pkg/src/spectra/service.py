"""Local walker service: a thin HTTP/JSON adapter over WalkSession.

Every endpoint's behavior is defined by the runtime operations; the
service adds session bookkeeping, per-session locking, and decoding of
enum/int values so clients never see raw bits.
"""

from __future__ import annotations

import base64
import os
import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .diagnostics import DiagnosticsError, SourceCatalog
from .game import to_gr1
from .gr1 import UnrealizableError, synthesize
from .lowering import lower
from .runtime import (AssumptionViolation, ControllerFormatError,
                      ControllerHandle, IncompleteInputError, WalkError,
                      WalkSession, handle_of, load, load_file)
from .semcheck import check, resolve_imports

DEFAULT_TTL = 3600.0


@dataclass
class SessionEntry:
    session: WalkSession
    name: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)


class SessionRegistry:
    """Maps opaque session ids to walk sessions; idle sessions expire."""

    def __init__(self, ttl: float = DEFAULT_TTL):
        self.ttl = ttl
        self._sessions: dict[str, SessionEntry] = {}
        self._lock = threading.Lock()

    def purge(self):
        now = time.monotonic()
        with self._lock:
            dead = [sid for sid, e in self._sessions.items()
                    if now - e.last_access > self.ttl]
            for sid in dead:
                del self._sessions[sid]

    def add(self, session: WalkSession, name: str) -> str:
        self.purge()
        sid = secrets.token_hex(8)
        with self._lock:
            self._sessions[sid] = SessionEntry(session, name)
        return sid

    def get(self, sid: str) -> SessionEntry | None:
        self.purge()
        with self._lock:
            entry = self._sessions.get(sid)
            if entry is not None:
                entry.last_access = time.monotonic()
            return entry

    def remove(self, sid: str) -> bool:
        with self._lock:
            return self._sessions.pop(sid, None) is not None

    def items(self):
        with self._lock:
            return list(self._sessions.items())


def _type_json(ty) -> dict:
    if ty[0] == "bool":
        return {"kind": "boolean"}
    if ty[0] == "enum":
        return {"kind": "enum", "values": list(ty[1])}
    return {"kind": "int", "lo": ty[1], "hi": ty[2]}


def _variables_json(handle: ControllerHandle) -> list:
    out = []
    for enc in handle.encodings.values():
        out.append({
            "name": enc.name,
            "kind": enc.kind,
            "type": _type_json(enc.ty),
            "internal": enc.name.startswith("__aux"),
        })
    return out


def _state_json(entry: SessionEntry) -> dict:
    s = entry.session
    return {
        "specName": entry.name,
        "cursor": s.cursor,
        "historyLength": len(s.history),
        "current": s.current_decoded(),
    }


def build_session_from_spec(path: str) -> WalkSession:
    catalog = SourceCatalog()
    ast = resolve_imports(path, catalog=catalog)
    checked = check(ast)
    ctrl = synthesize(to_gr1(lower(checked)))
    return WalkSession(handle_of(ctrl))


def create_app(registry: SessionRegistry | None = None,
               ui_dir: str | None = None) -> FastAPI:
    registry = registry if registry is not None else SessionRegistry()
    app = FastAPI(title="spectra walker service")
    app.state.registry = registry

    def not_found():
        return JSONResponse({"error": "unknown session"}, status_code=404)

    @app.get("/sessions")
    def list_sessions():
        return [{"id": sid, "name": e.name,
                 "historyLength": len(e.session.history)}
                for sid, e in registry.items()]

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await request.json()
        try:
            if "specPath" in body:
                session = build_session_from_spec(body["specPath"])
                name = os.path.basename(body["specPath"])
            elif "controllerPath" in body:
                session = WalkSession(load_file(body["controllerPath"]))
                name = os.path.basename(body["controllerPath"])
            elif "controllerB64" in body:
                handle = load(base64.b64decode(body["controllerB64"]))
                session = WalkSession(handle)
                name = body.get("name", "uploaded controller")
            else:
                return JSONResponse(
                    {"error": "provide specPath, controllerPath, or "
                              "controllerB64"}, status_code=400)
        except FileNotFoundError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except DiagnosticsError as exc:
            return JSONResponse(
                {"error": "specification has errors",
                 "diagnostics": [d.render() for d in exc.diagnostics]},
                status_code=400)
        except UnrealizableError:
            return JSONResponse(
                {"error": "specification is unrealizable; run the core "
                          "analysis"}, status_code=400)
        except ControllerFormatError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        sid = registry.add(session, name)
        return {"id": sid, "variables": _variables_json(session.handle)}

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str):
        entry = registry.get(sid)
        if entry is None:
            return not_found()
        with entry.lock:
            return _state_json(entry)

    @app.get("/sessions/{sid}/variables")
    def get_variables(sid: str):
        entry = registry.get(sid)
        if entry is None:
            return not_found()
        return {"id": sid, "variables": _variables_json(entry.session.handle)}

    @app.get("/sessions/{sid}/env-options")
    def env_options(sid: str):
        entry = registry.get(sid)
        if entry is None:
            return not_found()
        with entry.lock:
            options, truncated = entry.session.env_options()
        return {"options": options, "truncated": truncated}

    @app.post("/sessions/{sid}/step")
    async def step(sid: str, request: Request):
        entry = registry.get(sid)
        if entry is None:
            return not_found()
        body = await request.json()
        inputs = body.get("inputs", body)
        try:
            with entry.lock:
                outputs = entry.session.step(inputs)
                return {"outputs": outputs, "state": _state_json(entry)}
        except AssumptionViolation as exc:
            return JSONResponse(
                {"violatedAssumptions": [
                    {"label": a.label, "kind": a.kind, "file": a.file,
                     "start": a.start, "end": a.end}
                    for a in exc.violated]},
                status_code=409)
        except (IncompleteInputError, ValueError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except WalkError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)

    @app.post("/sessions/{sid}/back")
    def back(sid: str):
        entry = registry.get(sid)
        if entry is None:
            return not_found()
        try:
            with entry.lock:
                entry.session.back()
                return _state_json(entry)
        except WalkError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)

    @app.delete("/sessions/{sid}")
    def delete(sid: str):
        if not registry.remove(sid):
            return not_found()
        return Response(status_code=204)

    @app.get("/sessions/{sid}/trace.csv")
    def trace(sid: str):
        entry = registry.get(sid)
        if entry is None:
            return not_found()
        with entry.lock:
            csv = entry.session.trace_csv()
        return Response(csv, media_type="text/csv")

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def default_ui_dir() -> str | None:
    env = os.environ.get("SPECTRA_WALKER_UI")
    if env:
        return env
    # repo checkout layout: src/spectra/service.py -> <root>/frontend/dist
    root = os.path.dirname(os.path.dirname(os.path.dirname(
        os.path.abspath(__file__))))
    candidate = os.path.join(root, "frontend", "dist")
    return candidate if os.path.isdir(candidate) else None
