"""Simulated smart home: device world, scenario scripts, semantic test runner."""

from .http_api import device_routes, serve
from .scenario import (
    Assertion,
    FunctionUnreachable,
    Invoker,
    ScenarioScript,
    SemanticTestCase,
    Stimulus,
    TestResult,
    http_invoker,
    run_test,
)
from .state import (
    ATTRIBUTE_SPECS,
    DEFAULT_ROSTER,
    AttributeSpec,
    Device,
    DeviceState,
    Event,
    OutOfRange,
    ReadOnlyAttribute,
    SimError,
    UnknownAttribute,
    UnknownDevice,
)

__all__ = [
    "ATTRIBUTE_SPECS",
    "Assertion",
    "AttributeSpec",
    "DEFAULT_ROSTER",
    "Device",
    "DeviceState",
    "Event",
    "FunctionUnreachable",
    "Invoker",
    "OutOfRange",
    "ReadOnlyAttribute",
    "ScenarioScript",
    "SemanticTestCase",
    "SimError",
    "Stimulus",
    "TestResult",
    "UnknownAttribute",
    "UnknownDevice",
    "device_routes",
    "http_invoker",
    "run_test",
    "serve",
]
