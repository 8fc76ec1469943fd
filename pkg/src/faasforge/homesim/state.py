"""The simulated home: devices, attribute rules, event log, virtual clock."""

from __future__ import annotations

import copy
import threading
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


class SimError(Exception):
    pass


class UnknownDevice(SimError):
    pass


class UnknownAttribute(SimError):
    pass


class OutOfRange(SimError):
    pass


class ReadOnlyAttribute(SimError):
    pass


@dataclass(frozen=True)
class AttributeSpec:
    default: Any
    kind: str = "str"  # str | int | float | bool | enum
    low: Optional[float] = None
    high: Optional[float] = None
    choices: Tuple[str, ...] = ()
    read_only: bool = False

    def check(self, value: Any) -> Any:
        if self.kind == "enum":
            if not isinstance(value, str) or value not in self.choices:
                raise OutOfRange(f"expected one of {list(self.choices)}, got {value!r}")
            return value
        if self.kind == "bool":
            if not isinstance(value, bool):
                raise OutOfRange(f"expected a boolean, got {value!r}")
            return value
        if self.kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise OutOfRange(f"expected an integer, got {value!r}")
            if not (self.low <= value <= self.high):
                raise OutOfRange(f"{value} outside [{self.low:g}, {self.high:g}]")
            return value
        if self.kind == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise OutOfRange(f"expected a number, got {value!r}")
            if not (self.low <= value <= self.high):
                raise OutOfRange(f"{value} outside [{self.low:g}, {self.high:g}]")
            return float(value)
        if not isinstance(value, str):
            raise OutOfRange(f"expected a string, got {value!r}")
        return value


ATTRIBUTE_SPECS: Dict[str, Dict[str, AttributeSpec]] = {
    "light": {
        "power": AttributeSpec("off", kind="enum", choices=("on", "off")),
        "brightness": AttributeSpec(70, kind="int", low=0, high=100),
        "color": AttributeSpec("warm_white"),
    },
    "thermostat": {
        "target_temp": AttributeSpec(21.0, kind="float", low=5, high=35),
        "current_temp": AttributeSpec(20.0, kind="float", low=-50, high=60, read_only=True),
        "mode": AttributeSpec("off", kind="enum", choices=("heat", "cool", "off")),
    },
    "blinds": {
        "position": AttributeSpec(100, kind="int", low=0, high=100),
    },
    "lock": {
        "locked": AttributeSpec(True, kind="bool"),
    },
    "motion_sensor": {
        "active": AttributeSpec(False, kind="bool", read_only=True),
    },
    "speaker": {
        "power": AttributeSpec("off", kind="enum", choices=("on", "off")),
        "volume": AttributeSpec(30, kind="int", low=0, high=100),
        "playing": AttributeSpec(""),
    },
}

# must stay in sync with the API reference shown to the model
DEFAULT_ROSTER: Dict[str, str] = {
    "light_livingroom": "light",
    "light_bedroom": "light",
    "light_kitchen": "light",
    "light_bathroom": "light",
    "light_hallway": "light",
    "thermostat_livingroom": "thermostat",
    "thermostat_bedroom": "thermostat",
    "blinds_livingroom": "blinds",
    "blinds_bedroom": "blinds",
    "lock_frontdoor": "lock",
    "motion_livingroom": "motion_sensor",
    "motion_hallway": "motion_sensor",
    "speaker_livingroom": "speaker",
}


@dataclass(frozen=True)
class Event:
    timestamp: int
    device: str
    attribute: str
    old: Any
    new: Any

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "device": self.device,
            "attribute": self.attribute,
            "old": self.old,
            "new": self.new,
        }


@dataclass
class Device:
    kind: str
    attributes: Dict[str, Any] = field(default_factory=dict)


class DeviceState:
    """Mutable world state. All writes serialize through one lock."""

    def __init__(self, roster: Optional[Dict[str, str]] = None):
        self._lock = threading.RLock()
        self.devices: Dict[str, Device] = {}
        self.event_log: List[Event] = []
        self.clock: int = 0
        for device_id, kind in (roster if roster is not None else DEFAULT_ROSTER).items():
            if kind not in ATTRIBUTE_SPECS:
                raise ValueError(f"unknown device kind {kind!r}")
            attrs = {name: spec.default for name, spec in ATTRIBUTE_SPECS[kind].items()}
            self.devices[device_id] = Device(kind=kind, attributes=attrs)

    # --- lookup ---

    def _device(self, device_id: str) -> Device:
        try:
            return self.devices[device_id]
        except KeyError:
            raise UnknownDevice(f"no device {device_id!r}")

    def _spec(self, device: Device, attribute: str) -> AttributeSpec:
        try:
            return ATTRIBUTE_SPECS[device.kind][attribute]
        except KeyError:
            raise UnknownAttribute(f"{device.kind} has no attribute {attribute!r}")

    def get(self, device_id: str, attribute: str) -> Any:
        with self._lock:
            device = self._device(device_id)
            self._spec(device, attribute)
            return device.attributes[attribute]

    def set(self, device_id: str, attribute: str, value: Any, force: bool = False) -> Any:
        """Validated write; appends exactly one event. force bypasses read-only
        (sensor feeds and scenario stimuli use it, the guest API never does)."""
        with self._lock:
            device = self._device(device_id)
            spec = self._spec(device, attribute)
            if spec.read_only and not force:
                raise ReadOnlyAttribute(f"{device_id}.{attribute} is read-only")
            checked = spec.check(value)
            old = device.attributes[attribute]
            device.attributes[attribute] = checked
            self.event_log.append(
                Event(timestamp=self.clock, device=device_id, attribute=attribute,
                      old=old, new=checked)
            )
            return checked

    def advance(self, ticks: int) -> int:
        with self._lock:
            if ticks < 0:
                raise ValueError("clock cannot run backwards")
            self.clock += ticks
            return self.clock

    def set_clock(self, tick: int) -> int:
        with self._lock:
            if tick < self.clock:
                raise ValueError(f"clock cannot move back from {self.clock} to {tick}")
            self.clock = tick
            return self.clock

    # --- bulk views ---

    def snapshot(self) -> Dict[str, Dict[str, Any]]:
        """Flat {device: {attribute: value}} view (what guests see as home.state())."""
        with self._lock:
            return {did: dict(d.attributes) for did, d in self.devices.items()}

    def to_dict(self) -> dict:
        with self._lock:
            return {
                "clock": self.clock,
                "devices": {
                    did: {"kind": d.kind, "attributes": dict(d.attributes)}
                    for did, d in self.devices.items()
                },
                "event_log": [e.to_dict() for e in self.event_log],
            }

    @classmethod
    def from_dict(cls, doc: dict) -> "DeviceState":
        """Build a world from a JSON document. Devices may give only the
        attributes they override; the rest come from the kind's defaults."""
        raw_devices = doc.get("devices", {})
        roster = {}
        for device_id, entry in raw_devices.items():
            kind = entry.get("kind")
            if kind is None:
                raise ValueError(f"device {device_id!r} is missing its kind")
            roster[device_id] = kind
        state = cls(roster=roster if roster else None)
        for device_id, entry in raw_devices.items():
            for attribute, value in entry.get("attributes", {}).items():
                device = state._device(device_id)
                spec = state._spec(device, attribute)
                device.attributes[attribute] = spec.check(value)
        state.clock = int(doc.get("clock", 0))
        for raw in doc.get("event_log", []):
            state.event_log.append(
                Event(
                    timestamp=int(raw["timestamp"]),
                    device=raw["device"],
                    attribute=raw["attribute"],
                    old=raw.get("old"),
                    new=raw.get("new"),
                )
            )
        return state

    def reset(self, initial: "DeviceState") -> None:
        """Erase everything and copy the given world exactly."""
        with self._lock, initial._lock:
            self.devices = {
                did: Device(kind=d.kind, attributes=copy.deepcopy(d.attributes))
                for did, d in initial.devices.items()
            }
            self.event_log = list(initial.event_log)
            self.clock = initial.clock

    def copy(self) -> "DeviceState":
        fresh = DeviceState(roster={})
        fresh.reset(self)
        return fresh
