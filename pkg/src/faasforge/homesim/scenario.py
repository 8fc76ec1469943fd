"""Scripted scenarios and the assertions that decide a semantic pass."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import requests

from ..platform import GuestError, InvokeTimeout
from .state import DeviceState, SimError

STIMULUS_KINDS = ("invoke_function", "set_attribute", "fire_sensor")
ASSERTION_KINDS = ("attribute_equals", "event_occurred", "event_order", "no_change")


class FunctionUnreachable(Exception):
    pass


@dataclass(frozen=True)
class Stimulus:
    at: int
    kind: str
    payload: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in STIMULUS_KINDS:
            raise ValueError(f"unknown stimulus kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"at": self.at, "kind": self.kind, **self.payload}

    @classmethod
    def from_dict(cls, doc: dict) -> "Stimulus":
        doc = dict(doc)
        return cls(at=int(doc.pop("at", 0)), kind=doc.pop("kind"), payload=doc)


@dataclass(frozen=True)
class ScenarioScript:
    initial_state: dict
    stimuli: Tuple[Stimulus, ...]

    def __post_init__(self):
        times = [s.at for s in self.stimuli]
        if times != sorted(times):
            raise ValueError("stimuli must be ordered by time")

    def to_dict(self) -> dict:
        return {
            "initial_state": self.initial_state,
            "stimuli": [s.to_dict() for s in self.stimuli],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ScenarioScript":
        return cls(
            initial_state=doc.get("initial_state", {}),
            stimuli=tuple(Stimulus.from_dict(s) for s in doc.get("stimuli", [])),
        )


@dataclass(frozen=True)
class Assertion:
    kind: str
    params: Dict[str, Any]

    def __post_init__(self):
        if self.kind not in ASSERTION_KINDS:
            raise ValueError(f"unknown assertion kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_dict(cls, doc: dict) -> "Assertion":
        doc = dict(doc)
        return cls(kind=doc.pop("kind"), params=doc)

    def describe(self) -> str:
        p = self.params
        if self.kind == "attribute_equals":
            return f"{p['device']}.{p['attribute']} == {p['value']!r}"
        if self.kind == "event_occurred":
            suffix = f" -> {p['new']!r}" if "new" in p else ""
            return f"event on {p['device']}.{p['attribute']}{suffix}"
        if self.kind == "event_order":
            first, then = p["first"], p["then"]
            return (
                f"{first['device']}.{first['attribute']} before "
                f"{then['device']}.{then['attribute']}"
            )
        target = p["device"] + (f".{p['attribute']}" if p.get("attribute") else "")
        return f"no change to {target}"

    def holds(self, state: DeviceState) -> bool:
        p = self.params
        if self.kind == "attribute_equals":
            try:
                return state.get(p["device"], p["attribute"]) == p["value"]
            except SimError:
                return False
        if self.kind == "event_occurred":
            for event in state.event_log:
                if event.device == p["device"] and event.attribute == p["attribute"]:
                    if "new" not in p or event.new == p["new"]:
                        return True
            return False
        if self.kind == "event_order":
            def first_index(target):
                for i, event in enumerate(state.event_log):
                    if event.device == target["device"] and event.attribute == target["attribute"]:
                        return i
                return None

            a = first_index(p["first"])
            b = first_index(p["then"])
            return a is not None and b is not None and a < b
        # no_change: the device (or one attribute of it) was never written
        for event in state.event_log:
            if event.device != p["device"]:
                continue
            if "attribute" not in p or p["attribute"] is None or event.attribute == p["attribute"]:
                return False
        return True


@dataclass(frozen=True)
class SemanticTestCase:
    scenario: ScenarioScript
    assertions: Tuple[Assertion, ...]
    name: str = ""

    def __post_init__(self):
        if not self.assertions:
            raise ValueError("a semantic test needs at least one assertion")

    def to_dict(self) -> dict:
        doc = {
            "scenario": self.scenario.to_dict(),
            "assertions": [a.to_dict() for a in self.assertions],
        }
        if self.name:
            doc["name"] = self.name
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "SemanticTestCase":
        return cls(
            scenario=ScenarioScript.from_dict(doc["scenario"]),
            assertions=tuple(Assertion.from_dict(a) for a in doc.get("assertions", [])),
            name=doc.get("name", ""),
        )


@dataclass(frozen=True)
class TestResult:
    passed: bool
    failed_assertions: Tuple[str, ...]
    invocations: int = 0


Invoker = Callable[[bytes], bytes]


def http_invoker(endpoint: str) -> Invoker:
    """Wrap a trigger URL; translate transport/guest failures into typed errors."""

    def invoke(payload: bytes) -> bytes:
        try:
            reply = requests.post(endpoint, data=payload, timeout=30)
        except requests.Timeout:
            raise InvokeTimeout(f"invocation of {endpoint} timed out")
        except requests.RequestException as err:
            raise FunctionUnreachable(f"{endpoint}: {err}")
        if reply.status_code == 404:
            raise FunctionUnreachable(f"{endpoint}: HTTP 404")
        if reply.headers.get("X-Guest-Error") == "1" or reply.status_code == 502:
            raise GuestError(reply.text)
        if reply.status_code == 504:
            raise InvokeTimeout(reply.text or "invocation timed out")
        return reply.content

    return invoke


def run_test(
    case: SemanticTestCase,
    function_endpoint: Union[str, Invoker],
    state: Optional[DeviceState] = None,
) -> TestResult:
    """Reset the world, replay the stimuli, judge the assertions.

    Invocation-level failures (unreachable, guest crash, timeout) propagate to
    the caller; they are verdicts about the function, not about user intent.
    """
    if state is None:
        state = DeviceState()
    initial = DeviceState.from_dict(case.scenario.initial_state)
    state.reset(initial)

    invoke = (
        http_invoker(function_endpoint)
        if isinstance(function_endpoint, str)
        else function_endpoint
    )

    invocations = 0
    for stimulus in case.scenario.stimuli:
        state.set_clock(max(state.clock, stimulus.at))
        if stimulus.kind == "set_attribute":
            p = stimulus.payload
            state.set(p["device"], p["attribute"], p["value"], force=True)
        elif stimulus.kind == "fire_sensor":
            p = stimulus.payload
            state.set(p["device"], "active", bool(p.get("value", True)), force=True)
        else:
            payload = stimulus.payload.get("payload", "")
            invoke(payload.encode("utf-8") if isinstance(payload, str) else payload)
            invocations += 1

    failed = tuple(a.describe() for a in case.assertions if not a.holds(state))
    return TestResult(passed=not failed, failed_assertions=failed, invocations=invocations)
