"""Embedded lightweight function platform."""

from .adapters import (
    InvokeResult,
    NodeAdapter,
    PythonAdapter,
    RuntimeAdapter,
    SubprocessAdapter,
    default_adapters,
)
from .descriptors import (
    DeploymentRecord,
    DeployStatus,
    DuplicateName,
    FunctionDescriptor,
    GuestError,
    InvalidDescriptor,
    InvokeTimeout,
    NotFound,
    PlatformError,
    PrepareFailed,
    ResourceLimits,
    StartFailed,
    UnknownRuntime,
)
from .gateway import platform_routes
from .registry import LogEntry, Platform

__all__ = [
    "DeploymentRecord",
    "DeployStatus",
    "DuplicateName",
    "FunctionDescriptor",
    "GuestError",
    "InvalidDescriptor",
    "InvokeResult",
    "InvokeTimeout",
    "LogEntry",
    "NodeAdapter",
    "NotFound",
    "Platform",
    "PlatformError",
    "PrepareFailed",
    "PythonAdapter",
    "ResourceLimits",
    "RuntimeAdapter",
    "StartFailed",
    "SubprocessAdapter",
    "UnknownRuntime",
    "default_adapters",
    "platform_routes",
]
