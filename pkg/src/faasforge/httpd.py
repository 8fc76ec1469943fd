"""Minimal threaded HTTP routing used by the management, device, and build services.

Routes map (method, path pattern) to a handler. Patterns use ``{name}``
segments, e.g. ``/functions/{name}/logs``. A handler returns a Response;
returning an EventStream switches the connection to server-sent events.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple
from urllib.parse import parse_qs, urlparse


@dataclass
class Request:
    method: str
    path: str
    params: Dict[str, str]
    query: Dict[str, List[str]]
    headers: Dict[str, str]
    body: bytes

    def json(self) -> object:
        try:
            return json.loads(self.body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as err:
            raise BadRequest(f"request body is not valid JSON: {err}")


@dataclass
class Response:
    status: int = 200
    body: bytes = b""
    content_type: str = "application/json"
    headers: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def json(cls, payload: object, status: int = 200) -> "Response":
        return cls(status=status, body=json.dumps(payload).encode("utf-8"))

    @classmethod
    def error(cls, status: int, kind: str, detail: str) -> "Response":
        return cls.json({"error": kind, "detail": detail}, status=status)

    @classmethod
    def raw(cls, body: bytes, status: int = 200, content_type: str = "application/octet-stream") -> "Response":
        return cls(status=status, body=body, content_type=content_type)


class EventStream:
    """Server-sent event response: the handler supplies an iterator of JSON-able events."""

    def __init__(self, events: Iterator[object]):
        self.events = events


class BadRequest(Exception):
    pass


Handler = Callable[[Request], object]


class Route:
    def __init__(self, method: str, pattern: str, handler: Handler):
        self.method = method.upper()
        self.handler = handler
        regex = re.sub(r"\{([a-zA-Z_][a-zA-Z0-9_]*)\}", r"(?P<\1>[^/]+)", pattern)
        self.regex = re.compile(f"^{regex}$")

    def match(self, method: str, path: str) -> Optional[Dict[str, str]]:
        if method != self.method:
            return None
        m = self.regex.match(path)
        return m.groupdict() if m else None


class Router:
    def __init__(self, routes: Iterable[Tuple[str, str, Handler]] = ()):
        self.routes: List[Route] = [Route(m, p, h) for m, p, h in routes]
        self.fallback: Optional[Handler] = None

    def add(self, method: str, pattern: str, handler: Handler) -> None:
        self.routes.append(Route(method, pattern, handler))

    def extend(self, routes: Iterable[Tuple[str, str, Handler]]) -> None:
        for method, pattern, handler in routes:
            self.add(method, pattern, handler)

    def dispatch(self, request: Request) -> object:
        path_exists = False
        for route in self.routes:
            params = route.match(request.method, request.path)
            if params is not None:
                request.params = params
                return route.handler(request)
            if route.regex.match(request.path):
                path_exists = True
        if self.fallback is not None:
            return self.fallback(request)
        if path_exists:
            return Response.error(405, "MethodNotAllowed", f"{request.method} not supported here")
        return Response.error(404, "NotFound", f"no route for {request.path}")


class HttpService:
    """A Router served by a ThreadingHTTPServer on its own thread."""

    def __init__(self, router: Router, host: str = "127.0.0.1", port: int = 0):
        self.router = router
        self._requested = (host, port)
        self._server: Optional[ThreadingHTTPServer] = None
        self._thread: Optional[threading.Thread] = None

    @property
    def address(self) -> Tuple[str, int]:
        if self._server is None:
            raise RuntimeError("service is not running")
        return self._server.server_address[:2]

    @property
    def url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def start(self) -> "HttpService":
        router = self.router

        class ServiceHandler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, fmt, *args):
                pass

            def _handle(self):
                parsed = urlparse(self.path)
                length = int(self.headers.get("Content-Length") or 0)
                body = self.rfile.read(length) if length else b""
                request = Request(
                    method=self.command,
                    path=parsed.path,
                    params={},
                    query=parse_qs(parsed.query),
                    headers={k: v for k, v in self.headers.items()},
                    body=body,
                )
                try:
                    result = router.dispatch(request)
                except BadRequest as err:
                    result = Response.error(400, "BadRequest", str(err))
                except Exception as err:  # keep the server alive on handler bugs
                    result = Response.error(500, "InternalError", f"{type(err).__name__}: {err}")
                if isinstance(result, EventStream):
                    self._write_stream(result)
                else:
                    self._write_response(result)

            def _write_response(self, response: Response):
                payload = response.body
                self.send_response(response.status)
                self.send_header("Content-Type", response.content_type)
                self.send_header("Content-Length", str(len(payload)))
                for key, value in response.headers.items():
                    self.send_header(key, value)
                self.end_headers()
                if self.command != "HEAD":
                    self.wfile.write(payload)

            def _write_stream(self, stream: EventStream):
                self.send_response(200)
                self.send_header("Content-Type", "text/event-stream")
                self.send_header("Cache-Control", "no-cache")
                self.send_header("Connection", "close")
                self.end_headers()
                try:
                    for event in stream.events:
                        data = json.dumps(event)
                        self.wfile.write(f"data: {data}\n\n".encode("utf-8"))
                        self.wfile.flush()
                except (BrokenPipeError, ConnectionResetError):
                    pass

            do_GET = _handle
            do_POST = _handle
            do_PUT = _handle
            do_DELETE = _handle
            do_HEAD = _handle

        self._server = ThreadingHTTPServer(self._requested, ServiceHandler)
        self._server.daemon_threads = True
        self._thread = threading.Thread(target=self._server.serve_forever, args=(0.05,), daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None
        if self._thread is not None:
            self._thread.join(timeout=2.0)
            self._thread = None

    def __enter__(self) -> "HttpService":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()
