"""HTTP/JSON facade over the engine.

Every response is an envelope ``{ok, data, errors, graph_version}``; the
version counter increases on every committed mutation. Readers are served
from graph snapshots and never block behind the single writer. The server
optionally serves a static console build next to the API.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlparse

from .engine import Engine, to_json
from .errors import BackendUnavailable, PprError, StaleSchedule
from .nlq import route_nl_query
from .scheduling import SchedulePolicy
from .turtle import TurtleParseFailure

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
}


class PprService(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(
        self,
        addr: tuple[str, int],
        engine: Engine,
        nl_backend=None,
        nl_fallback: bool = True,
        ui_dir: str | Path | None = None,
    ):
        super().__init__(addr, _Handler)
        self.engine = engine
        self.nl_backend = nl_backend
        self.nl_fallback = nl_fallback
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


class _Handler(BaseHTTPRequestHandler):
    server: PprService
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    # -- plumbing ------------------------------------------------------------

    def _body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    def _json_body(self) -> dict:
        raw = self._body()
        if not raw:
            return {}
        data = json.loads(raw.decode("utf-8"))
        if not isinstance(data, dict):
            raise ValueError("request body must be a JSON object")
        return data

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(payload)

    def _envelope(self, status: int, data=None, errors: list[dict] | None = None) -> None:
        body = {
            "ok": not errors,
            "data": data,
            "errors": errors or [],
            "graph_version": self.server.engine.version,
        }
        self._send(status, to_json(body).encode("utf-8"), "application/json")

    def _run(self, handler) -> None:
        try:
            self._envelope(200, data=handler())
        except TurtleParseFailure as exc:
            errors = [
                {"code": exc.code, "message": e.message, "line": e.line,
                 "column": e.column, "snippet": e.snippet}
                for e in exc.errors
            ]
            self._envelope(400, errors=errors)
        except StaleSchedule as exc:
            self._envelope(409, errors=[{"code": exc.code, "message": exc.message}])
        except BackendUnavailable as exc:
            self._envelope(502, errors=[{"code": exc.code, "message": exc.message}])
        except PprError as exc:
            self._envelope(400, errors=[{"code": exc.code, "message": exc.message}])
        except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
            self._envelope(400, errors=[{"code": "InvalidRequest", "message": str(exc)}])
        except Exception as exc:  # pragma: no cover - last resort
            self._envelope(500, errors=[{"code": "Internal", "message": str(exc)}])

    # -- routes ----------------------------------------------------------------

    def do_OPTIONS(self):
        self._send(204, b"", "text/plain")

    def do_GET(self):
        url = urlparse(self.path)
        engine = self.server.engine
        if url.path == "/api/graph":
            return self._run(engine.graph_payload)
        if url.path == "/api/validate":
            return self._run(engine.validate_payload)
        if url.path == "/api/conditions":
            query = parse_qs(url.query)
            asset = query.get("asset", [None])[0]
            return self._run(lambda: engine.conditions_payload(asset or None))
        if url.path.startswith("/api/processes/") and url.path.endswith("/eligible"):
            iri = unquote(url.path[len("/api/processes/") : -len("/eligible")])
            return self._run(lambda: engine.eligible_payload(iri))
        if not url.path.startswith("/api/"):
            return self._static(url.path)
        self._envelope(404, errors=[{"code": "NotFound", "message": url.path}])

    def do_POST(self):
        url = urlparse(self.path)
        engine = self.server.engine
        if url.path == "/api/graph/ttl":
            text = self._body().decode("utf-8")
            return self._run(lambda: engine.ingest_ttl(text))
        if url.path == "/api/runs":
            def runs():
                body = self._json_body()
                product = body["product"]
                n = int(body.get("n", 1))
                return engine.create_runs(product, n)
            return self._run(runs)
        if url.path == "/api/schedule":
            def preview():
                body = self._json_body()
                policy = _policy_from(body.get("policy") or {})
                return engine.schedule_payload(body.get("run_ids"), policy)
            return self._run(preview)
        if url.path == "/api/schedule/commit":
            def commit():
                return engine.commit_payload(self._json_body())
            return self._run(commit)
        if url.path.startswith("/api/resources/") and url.path.endswith("/capability"):
            iri = unquote(url.path[len("/api/resources/") : -len("/capability")])
            def capability():
                body = self._json_body()
                return engine.capability_payload(iri, body["capability"], body["action"])
            return self._run(capability)
        if url.path == "/api/diagnose":
            def diagnose():
                body = self._json_body()
                return engine.diagnose_payload(
                    body["condition"], body.get("affected_step"), body.get("observed_on_resource")
                )
            return self._run(diagnose)
        if url.path == "/api/chat":
            def chat():
                body = self._json_body()
                return route_nl_query(
                    engine, body.get("question", ""),
                    backend=self.server.nl_backend, fallback=self.server.nl_fallback,
                )
            return self._run(chat)
        self._envelope(404, errors=[{"code": "NotFound", "message": url.path}])

    # -- static console ----------------------------------------------------------

    def _static(self, path: str) -> None:
        root = self.server.ui_dir
        if root is None:
            self._envelope(404, errors=[{"code": "NotFound", "message": path}])
            return
        relative = unquote(path).lstrip("/") or "index.html"
        target = (root / relative).resolve()
        if root not in target.parents and target != root:
            self._send(403, b"forbidden", "text/plain")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._send(404, b"not found", "text/plain")
            return
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), content_type)


def _policy_from(data: dict) -> SchedulePolicy:
    return SchedulePolicy(
        improve=bool(data.get("improve", False)),
        max_iterations=int(data.get("max_iterations", 1000)),
        seed=int(data.get("seed", 0)),
    )


def create_service(
    engine: Engine,
    addr: tuple[str, int] = ("127.0.0.1", 8420),
    nl_backend=None,
    nl_fallback: bool = True,
    ui_dir: str | Path | None = None,
) -> PprService:
    return PprService(addr, engine, nl_backend, nl_fallback, ui_dir)


def parse_addr(value: str, default_port: int = 8420) -> tuple[str, int]:
    """'host:port', ':port' or 'host' -> bind address tuple."""
    if ":" in value:
        host, _, port = value.rpartition(":")
        return (host or "127.0.0.1", int(port))
    return (value or "127.0.0.1", default_port)
