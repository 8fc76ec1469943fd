"""One-port backend for the web console.

Mounts three route families on a single HTTP service: build sessions with a
server-sent progress stream, the platform management and trigger routes, and
the device API of an attached simulated home. Deployed functions talk back
to that same port through HOME_API_URL, so a build started here yields a
function whose effects are visible on the dashboard routes immediately.
"""

from __future__ import annotations

import mimetypes
import threading
import time
import uuid
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Union

from .bridge import Bridge, BuildOutcome, UserDescription
from .homesim import DeviceState
from .homesim.http_api import device_routes
from .httpd import BadRequest, EventStream, HttpService, Request, Response, Router
from .llm import Provider
from .platform import Platform
from .platform.gateway import platform_routes

RUNTIMES = ("python3", "nodejs")


class BuildSession:
    """Ordered event history for one build; followers replay it, then tail."""

    def __init__(self, session_id: str):
        self.id = session_id
        self._events: List[dict] = []
        self._done = False
        self._cond = threading.Condition()

    def append(self, event: dict) -> None:
        with self._cond:
            self._events.append(dict(event))
            if event.get("event") == "result":
                self._done = True
            self._cond.notify_all()

    @property
    def done(self) -> bool:
        with self._cond:
            return self._done

    def snapshot(self) -> List[dict]:
        with self._cond:
            return list(self._events)

    def follow(self, idle_timeout: float = 60.0) -> Iterator[dict]:
        """Yield every event from the beginning; stop after the result event
        or once the build has been silent for idle_timeout seconds."""
        index = 0
        deadline = time.monotonic() + idle_timeout
        while True:
            with self._cond:
                while index >= len(self._events) and not self._done:
                    remaining = deadline - time.monotonic()
                    if remaining <= 0 or not self._cond.wait(timeout=min(remaining, 0.5)):
                        if time.monotonic() >= deadline:
                            return
                fresh = self._events[index:]
                index = len(self._events)
                done = self._done
            deadline = time.monotonic() + idle_timeout
            yield from fresh
            if done:
                return


class _SessionStore:
    def __init__(self):
        self._sessions: Dict[str, BuildSession] = {}
        self._cond = threading.Condition()

    def create(self, session_id: str) -> BuildSession:
        with self._cond:
            if session_id in self._sessions:
                raise BadRequest(f"build session {session_id!r} already exists")
            session = BuildSession(session_id)
            self._sessions[session_id] = session
            self._cond.notify_all()
            return session

    def wait_for(self, session_id: str, timeout: float) -> Optional[BuildSession]:
        # subscribers may connect before the POST that creates the session
        deadline = time.monotonic() + timeout
        with self._cond:
            while session_id not in self._sessions:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return None
                self._cond.wait(timeout=remaining)
            return self._sessions[session_id]


def _artifact_summary(outcome: BuildOutcome) -> Optional[dict]:
    artifact = outcome.artifact
    if artifact is None:
        return None
    return {
        "selected_code": artifact.selected_code,
        "dependencies": list(artifact.dependencies),
        "code_blocks": len(artifact.code_blocks),
    }


class ConsoleService:
    """Build, manage, invoke, and observe from one origin.

    Routes:
      POST /build                    run the pipeline; body {description,
                                     runtime, task_id?, session?}
      GET  /build/{session}/events   SSE stream of stage transitions,
                                     ending with the result record
      POST /functions, GET /functions, DELETE /functions/{name},
      GET  /functions/{name}/logs, POST /fn/{name}
      GET/PUT device API of the attached home simulation
      static files from static_dir for any other GET, when configured
    """

    def __init__(self, platform: Platform, provider: Provider, *,
                 state: Optional[DeviceState] = None,
                 host: str = "127.0.0.1", port: int = 0,
                 static_dir: Optional[Union[str, Path]] = None,
                 subscribe_timeout: float = 10.0,
                 prompt_template: Optional[str] = None):
        self.platform = platform
        self.provider = provider
        self.prompt_template = prompt_template
        self.state = state if state is not None else DeviceState()
        self._sessions = _SessionStore()
        self._subscribe_timeout = subscribe_timeout
        self._static_dir = Path(static_dir).resolve() if static_dir else None

        router = Router()
        router.add("POST", "/build", self._build)
        router.add("GET", "/build/{session}/events", self._events)
        router.extend(platform_routes(platform))
        router.extend(device_routes(self.state))
        if self._static_dir is not None:
            router.fallback = self._static
        self._service = HttpService(router, host=host, port=port)

    # -- lifecycle --

    def start(self) -> "ConsoleService":
        self._service.start()
        return self

    def stop(self) -> None:
        self._service.stop()

    @property
    def url(self) -> str:
        return self._service.url

    def __enter__(self) -> "ConsoleService":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()

    # -- handlers --

    def _build(self, request: Request) -> Response:
        doc = request.json()
        if not isinstance(doc, dict):
            raise BadRequest("body must be a JSON object")
        text = doc.get("description")
        if not isinstance(text, str) or not text.strip():
            raise BadRequest("description must be a non-empty string")
        runtime = doc.get("runtime", "python3")
        if runtime not in RUNTIMES:
            raise BadRequest(f"runtime must be one of {list(RUNTIMES)}")
        task_id = doc.get("task_id")
        session_id = str(doc.get("session") or uuid.uuid4().hex[:12])
        session = self._sessions.create(session_id)

        bridge = Bridge(
            self.platform, self.provider,
            function_env={"HOME_API_URL": self.url},
            prompt_template=self.prompt_template,
        )
        try:
            outcome = bridge.build_and_deploy(
                UserDescription(
                    text=text, requested_runtime=runtime,
                    task_id=str(task_id) if task_id is not None else None,
                ),
                observer=session.append,
            )
        except Exception as err:
            # unblock stream followers before the 500 goes out
            session.append({"event": "result", "ok": False,
                            "error": f"{type(err).__name__}: {err}"})
            raise
        return Response.json({
            "session": session_id,
            "ok": outcome.ok,
            "record": outcome.record.summary() if outcome.record else None,
            "artifact": _artifact_summary(outcome),
            "breakdown": outcome.breakdown.to_dict(),
            "failure": (
                {"category": outcome.failure.category.value,
                 "evidence": outcome.failure.evidence}
                if outcome.failure else None
            ),
            "stage_error": outcome.stage_error,
        })

    def _events(self, request: Request):
        session = self._sessions.wait_for(
            request.params["session"], self._subscribe_timeout
        )
        if session is None:
            return Response.error(
                404, "NotFound",
                f"no build session named {request.params['session']!r}",
            )
        return EventStream(session.follow())

    def _static(self, request: Request) -> Response:
        if request.method != "GET" or self._static_dir is None:
            return Response.error(404, "NotFound", f"no route for {request.path}")
        relative = request.path.lstrip("/") or "index.html"
        candidate = (self._static_dir / relative).resolve()
        if not candidate.is_relative_to(self._static_dir):
            return Response.error(404, "NotFound", "path escapes the asset root")
        if candidate.is_dir():
            candidate = candidate / "index.html"
        if not candidate.is_file():
            return Response.error(404, "NotFound", f"no asset at {request.path}")
        content_type = (
            mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        )
        return Response.raw(candidate.read_bytes(), content_type=content_type)
