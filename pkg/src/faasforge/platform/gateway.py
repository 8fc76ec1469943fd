"""HTTP management and trigger surface for the embedded platform.

Management:
    POST   /functions                upload {name, runtime, files: {path: base64}, ...}
    GET    /functions                list deployment summaries
    DELETE /functions/{name}         tear down
    GET    /functions/{name}/logs    recent guest log lines

Trigger:
    POST   /fn/{name}                invoke with the raw request body
"""

from __future__ import annotations

import base64
import binascii
from typing import Dict, List, Tuple

from ..httpd import BadRequest, Handler, Request, Response
from .descriptors import (
    DeployStatus,
    DuplicateName,
    FunctionDescriptor,
    GuestError,
    InvalidDescriptor,
    InvokeTimeout,
    NotFound,
    ResourceLimits,
    UnknownRuntime,
)
from .registry import Platform


def _decode_files(raw: object) -> Dict[str, bytes]:
    if not isinstance(raw, dict) or not raw:
        raise BadRequest("'files' must be a non-empty object of path -> base64 content")
    bundle: Dict[str, bytes] = {}
    for path, encoded in raw.items():
        if not isinstance(encoded, str):
            raise BadRequest(f"file {path!r} content must be a base64 string")
        try:
            bundle[str(path)] = base64.b64decode(encoded, validate=True)
        except (binascii.Error, ValueError):
            raise BadRequest(f"file {path!r} content is not valid base64")
    return bundle


def _descriptor_from_json(payload: object) -> FunctionDescriptor:
    if not isinstance(payload, dict):
        raise BadRequest("request body must be a JSON object")
    try:
        name = payload["name"]
        runtime = payload["runtime"]
    except KeyError as err:
        raise BadRequest(f"missing required field {err.args[0]!r}")
    limits = ResourceLimits()
    raw_limits = payload.get("resource_limits")
    if isinstance(raw_limits, dict):
        limits = ResourceLimits(
            max_concurrency=int(raw_limits.get("max_concurrency", limits.max_concurrency)),
            invocation_timeout=float(raw_limits.get("invocation_timeout", limits.invocation_timeout)),
        )
    return FunctionDescriptor(
        name=str(name),
        runtime=str(runtime),
        source_bundle=_decode_files(payload.get("files")),
        entry_point=str(payload.get("entry_point", "fn")),
        dependencies=tuple(payload.get("dependencies", ())),
        env={str(k): str(v) for k, v in (payload.get("env") or {}).items()},
        resource_limits=limits,
    )


def platform_routes(platform: Platform) -> List[Tuple[str, str, Handler]]:
    def create(request: Request) -> Response:
        descriptor = _descriptor_from_json(request.json())
        try:
            record = platform.deploy(descriptor)
        except InvalidDescriptor as err:
            return Response.error(400, "InvalidDescriptor", str(err))
        except UnknownRuntime as err:
            return Response.error(400, "UnknownRuntime", str(err))
        except DuplicateName as err:
            return Response.error(409, "DuplicateName", str(err))
        status = 201 if record.status is DeployStatus.RUNNING else 502
        return Response.json(record.summary(), status=status)

    def listing(request: Request) -> Response:
        return Response.json({"functions": [r.summary() for r in platform.list()]})

    def remove(request: Request) -> Response:
        try:
            record = platform.remove(request.params["name"])
        except NotFound as err:
            return Response.error(404, "NotFound", str(err))
        return Response.json(record.summary())

    def logs(request: Request) -> Response:
        limit = 100
        if "limit" in request.query:
            try:
                limit = int(request.query["limit"][0])
            except ValueError:
                raise BadRequest("limit must be an integer")
        try:
            entries = platform.logs(request.params["name"], limit=limit)
        except NotFound as err:
            return Response.error(404, "NotFound", str(err))
        payload = [
            {"timestamp": e.timestamp, "stream": e.stream, "line": e.line} for e in entries
        ]
        return Response.json({"name": request.params["name"], "entries": payload})

    def trigger(request: Request) -> Response:
        try:
            result = platform.invoke(request.params["name"], request.body)
        except NotFound as err:
            return Response.error(404, "NotFound", str(err))
        except InvokeTimeout as err:
            return Response.error(504, "InvokeTimeout", str(err))
        except GuestError as err:
            return Response(
                status=502,
                body=str(err).encode("utf-8"),
                content_type="text/plain; charset=utf-8",
                headers={"X-Guest-Error": "1"},
            )
        return Response.raw(result.body, status=result.status, content_type=result.content_type)

    return [
        ("POST", "/functions", create),
        ("GET", "/functions", listing),
        ("DELETE", "/functions/{name}", remove),
        ("GET", "/functions/{name}/logs", logs),
        ("POST", "/fn/{name}", trigger),
    ]
