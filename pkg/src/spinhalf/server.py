"""JSON-over-HTTP service exposing the command surface.

The service is stateless: every handler is a pure function of the request
body (seeds arrive in requests), so concurrent requests are served by a
plain threading HTTP server without synchronization. Responses are the
same canonical envelope bytes the CLI emits.

Status codes: 200 on success, 400 for malformed requests, 422 for domain
errors, 404 for unknown endpoints. Anticipated failures never produce 500.
"""

from __future__ import annotations

import json
import os
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import __version__
from .api import (
    CommandRequest,
    execute_command,
    failure,
    not_found,
    render_envelope,
)
from .errors import UsageError

DEFAULT_PORT = 8766
PORT_ENV_VAR = "SPINHALF_PORT"

_GET_ROUTES = {
    "/api/version": "version",
    "/api/basis": "basis",
}

_POST_ROUTES = {
    "/api/deduce": "deduce",
    "/api/probabilities": "probabilities",
    "/api/measure": "measure",
    "/api/chain": "chain",
    "/api/commutator": "commutator",
    "/api/bloch": "bloch",
}


def default_port() -> int:
    value = os.environ.get(PORT_ENV_VAR)
    if value is None:
        return DEFAULT_PORT
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{PORT_ENV_VAR} must be an integer, got {value!r}") from None


class _Handler(BaseHTTPRequestHandler):
    server_version = f"spinhalf/{__version__}"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        if getattr(self.server, "verbose", False):
            super().log_message(format, *args)

    def _respond(self, envelope) -> None:
        payload = render_envelope(envelope)
        self.send_response(envelope.http_status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        command = _GET_ROUTES.get(self.path)
        if command is None:
            self._respond(not_found(self.path))
            return
        self._respond(execute_command(CommandRequest(command, {})))

    def do_POST(self):
        command = _POST_ROUTES.get(self.path)
        if command is None:
            self._respond(not_found(self.path))
            return
        try:
            options = self._read_body()
        except UsageError as exc:
            self._respond(failure(exc))
            return
        self._respond(execute_command(CommandRequest(command, options)))

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise UsageError(f"request body is not valid JSON: {exc}") from None
        if not isinstance(body, dict):
            raise UsageError("request body must be a JSON object")
        return body


def create_server(port: int = 0, bind: str = "127.0.0.1",
                  verbose: bool = False) -> ThreadingHTTPServer:
    """Build the server without starting it (port 0 picks a free port)."""
    server = ThreadingHTTPServer((bind, port), _Handler)
    server.daemon_threads = True
    server.verbose = verbose
    return server


def serve(port: int | None = None, bind: str = "127.0.0.1",
          verbose: bool = True) -> None:
    """Run the service until interrupted."""
    if port is None:
        port = default_port()
    server = create_server(port, bind, verbose)
    host, actual_port = server.server_address[:2]
    print(
        f"spinhalf API listening on http://{host}:{actual_port}/api/version",
        flush=True,
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
