"""Localhost step server: the machine behind a JSON request/response API.

Routes::

    POST   /sessions                  {"term": text} -> {"session", "snapshot"}
    GET    /sessions/<id>/snapshot    -> {"snapshot"}
    POST   /sessions/<id>/step        {"direction": "forward"|"backward"}
                                      -> {"snapshot", "rule", "at_boundary"}
    POST   /sessions/<id>/reset       -> {"snapshot"}   (back to the initial state)
    DELETE /sessions/<id>             -> {"closed": true}

Stepping at a boundary (forward on final, backward on initial) is a no-op
flagged ``at_boundary``.  Errors come back as ``{"error": {"kind", ...}}``
with kind one of parse, open_term, unknown_session, protocol.  Each session
is guarded by a lock, so its requests are applied strictly in order; the
server itself is a development tool and binds localhost by default.

GET on any other path serves the stepper frontend when a built copy is
found (RCAM_STATIC_DIR or frontend/dist).
"""

from __future__ import annotations

import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .crumble import crumble_translate
from .machine import MachineState, init, run_backward, step_backward, step_forward
from .parser import ParseError, parse
from .serialize import state_snapshot
from .terms import free_vars


class _Session:
    def __init__(self, sid: str, state: MachineState):
        self.sid = sid
        self.state = state
        self.lock = threading.Lock()


class SessionRegistry:
    def __init__(self):
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def create(self, term_text: str) -> tuple[str, dict]:
        term = parse(term_text)
        free = free_vars(term)
        if free:
            raise OpenTermRequest(sorted(free))
        state = init(crumble_translate(term))
        with self._lock:
            self._counter += 1
            sid = f"s{self._counter}"
            self._sessions[sid] = _Session(sid, state)
        return sid, state_snapshot(state)

    def get(self, sid: str) -> _Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise UnknownSession(sid)
        return session

    def close(self, sid: str) -> None:
        with self._lock:
            if self._sessions.pop(sid, None) is None:
                raise UnknownSession(sid)

    def step(self, sid: str, direction: str) -> dict:
        session = self.get(sid)
        with session.lock:
            if direction == "forward":
                rule = step_forward(session.state)
            else:
                rule = step_backward(session.state)
            return {
                "snapshot": state_snapshot(session.state),
                "rule": rule,
                "at_boundary": rule is None,
            }

    def reset(self, sid: str) -> dict:
        session = self.get(sid)
        with session.lock:
            run_backward(session.state)
            return {"snapshot": state_snapshot(session.state)}

    def snapshot(self, sid: str) -> dict:
        session = self.get(sid)
        with session.lock:
            return {"snapshot": state_snapshot(session.state)}


class UnknownSession(Exception):
    pass


class OpenTermRequest(Exception):
    def __init__(self, free):
        self.free = free
        super().__init__(f"term not closed, free variables: {free}")


def _find_static_dir() -> Path | None:
    env = os.environ.get("RCAM_STATIC_DIR")
    candidates = [Path(env)] if env else []
    here = Path(__file__).resolve()
    candidates += [
        Path.cwd() / "frontend" / "dist",
        here.parents[2] / "frontend" / "dist",
        here.parents[3] / "frontend" / "dist" if len(here.parents) > 3 else None,
    ]
    for cand in candidates:
        if cand is not None and (cand / "index.html").is_file():
            return cand
    return None


_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
}


class _Handler(BaseHTTPRequestHandler):
    registry: SessionRegistry
    static_dir: Path | None
    verbose = False

    # -- plumbing ----------------------------------------------------------

    def log_message(self, fmt, *args):
        if self.verbose:
            super().log_message(fmt, *args)

    def _send_json(self, code: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, code: int, kind: str, message: str, **extra) -> None:
        self._send_json(code, {"error": {"kind": kind, "message": message, **extra}})

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as err:
            raise _Protocol(f"request body is not JSON: {err}") from err
        if not isinstance(doc, dict):
            raise _Protocol("request body must be a JSON object")
        return doc

    # -- routes -------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_POST(self):
        try:
            parts = [p for p in self.path.split("/") if p]
            if parts == ["sessions"]:
                doc = self._read_body()
                term = doc.get("term")
                if not isinstance(term, str):
                    raise _Protocol('expected {"term": string}')
                try:
                    sid, snapshot = self.registry.create(term)
                except ParseError as err:
                    self._error(400, "parse", str(err), position=err.position)
                    return
                except OpenTermRequest as err:
                    self._error(400, "open_term", str(err))
                    return
                self._send_json(200, {"session": sid, "snapshot": snapshot})
            elif len(parts) == 3 and parts[0] == "sessions" and parts[2] == "step":
                doc = self._read_body()
                direction = doc.get("direction")
                if direction not in ("forward", "backward"):
                    raise _Protocol('expected {"direction": "forward"|"backward"}')
                self._send_json(200, self.registry.step(parts[1], direction))
            elif len(parts) == 3 and parts[0] == "sessions" and parts[2] == "reset":
                self._send_json(200, self.registry.reset(parts[1]))
            else:
                self._error(404, "protocol", f"no such route: POST {self.path}")
        except UnknownSession as err:
            self._error(404, "unknown_session", f"no session {err}")
        except _Protocol as err:
            self._error(400, "protocol", str(err))

    def do_GET(self):
        parts = [p for p in self.path.split("/") if p]
        if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "snapshot":
            try:
                self._send_json(200, self.registry.snapshot(parts[1]))
            except UnknownSession as err:
                self._error(404, "unknown_session", f"no session {err}")
            return
        self._serve_static(parts)

    def do_DELETE(self):
        parts = [p for p in self.path.split("/") if p]
        if len(parts) == 2 and parts[0] == "sessions":
            try:
                self.registry.close(parts[1])
                self._send_json(200, {"closed": True})
            except UnknownSession as err:
                self._error(404, "unknown_session", f"no session {err}")
            return
        self._error(404, "protocol", f"no such route: DELETE {self.path}")

    def _serve_static(self, parts: list[str]) -> None:
        if self.static_dir is None:
            self._error(404, "protocol", "no frontend build found; API routes live under /sessions")
            return
        name = "index.html" if not parts else "/".join(parts)
        target = (self.static_dir / name).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            self._error(404, "protocol", f"no such file: {name}")
            return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class _Protocol(Exception):
    pass


class StepServer:
    """Embeddable server: used by ``rcam serve`` and spawned by tests."""

    def __init__(self, host: str = "127.0.0.1", port: int = 8653, verbose: bool = False):
        registry = SessionRegistry()
        static_dir = _find_static_dir()

        class Handler(_Handler):
            pass

        Handler.registry = registry
        Handler.static_dir = static_dir
        Handler.verbose = verbose
        self.registry = registry
        self.httpd = ThreadingHTTPServer((host, port), Handler)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def start(self) -> None:
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join()


def serve_forever(host: str, port: int) -> None:
    server = StepServer(host, port, verbose=True)
    print(f"rcam step server on http://{host}:{port}")
    if server.httpd.RequestHandlerClass.static_dir:
        print(f"serving frontend from {server.httpd.RequestHandlerClass.static_dir}")
    try:
        server.httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.httpd.server_close()
