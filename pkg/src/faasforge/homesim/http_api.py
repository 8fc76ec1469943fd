"""HTTP face of the simulator: the device API guests call, plus console extras.

Guest surface:
    GET /devices                     -> ["light_livingroom", ...]
    GET /devices/{id}/{attribute}    -> {"value": ...}
    PUT /devices/{id}/{attribute}    {"value": ...} -> {"value": stored}
    GET /state                       -> {device: {attribute: value}}

Console extras:
    GET  /devices/{id}   full record; GET /world  everything incl. event log
    GET  /events         event log; POST /reset {state doc}; POST /advance {ticks}
"""

from __future__ import annotations

from typing import List, Tuple

from ..httpd import BadRequest, Handler, HttpService, Request, Response, Router
from .state import (
    DeviceState,
    OutOfRange,
    ReadOnlyAttribute,
    UnknownAttribute,
    UnknownDevice,
)


def device_routes(state: DeviceState) -> List[Tuple[str, str, Handler]]:
    def list_devices(request: Request) -> Response:
        return Response.json(sorted(state.devices))

    def device_record(request: Request) -> Response:
        device_id = request.params["id"]
        if device_id not in state.devices:
            return Response.error(404, "UnknownDevice", f"no device {device_id!r}")
        device = state.devices[device_id]
        return Response.json(
            {"id": device_id, "kind": device.kind, "attributes": dict(device.attributes)}
        )

    def read_attribute(request: Request) -> Response:
        try:
            value = state.get(request.params["id"], request.params["attribute"])
        except (UnknownDevice, UnknownAttribute) as err:
            return Response.error(404, type(err).__name__, str(err))
        return Response.json({"value": value})

    def write_attribute(request: Request) -> Response:
        body = request.json()
        if not isinstance(body, dict) or "value" not in body:
            raise BadRequest("body must be {\"value\": ...}")
        try:
            stored = state.set(request.params["id"], request.params["attribute"], body["value"])
        except (UnknownDevice, UnknownAttribute) as err:
            return Response.error(404, type(err).__name__, str(err))
        except (OutOfRange, ReadOnlyAttribute) as err:
            return Response.error(422, type(err).__name__, str(err))
        return Response.json({"value": stored})

    def flat_state(request: Request) -> Response:
        return Response.json(state.snapshot())

    def world(request: Request) -> Response:
        return Response.json(state.to_dict())

    def events(request: Request) -> Response:
        return Response.json({"events": [e.to_dict() for e in state.event_log]})

    def reset(request: Request) -> Response:
        doc = request.json() if request.body else {}
        try:
            state.reset(DeviceState.from_dict(doc))
        except (ValueError, OutOfRange, UnknownDevice, UnknownAttribute) as err:
            raise BadRequest(f"bad state document: {err}")
        return Response.json({"ok": True, "clock": state.clock})

    def advance(request: Request) -> Response:
        doc = request.json()
        try:
            clock = state.advance(int(doc.get("ticks", 1)))
        except (ValueError, TypeError) as err:
            raise BadRequest(str(err))
        return Response.json({"clock": clock})

    return [
        ("GET", "/devices", list_devices),
        ("GET", "/devices/{id}", device_record),
        ("GET", "/devices/{id}/{attribute}", read_attribute),
        ("PUT", "/devices/{id}/{attribute}", write_attribute),
        ("GET", "/state", flat_state),
        ("GET", "/world", world),
        ("GET", "/events", events),
        ("POST", "/reset", reset),
        ("POST", "/advance", advance),
    ]


def serve(state: DeviceState, host: str = "127.0.0.1", port: int = 0) -> HttpService:
    return HttpService(Router(device_routes(state)), host=host, port=port).start()
