"""Deployable-unit descriptors and deployment records for the function platform."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional

NAME_RE = re.compile(r"^[a-z0-9][a-z0-9-]{0,62}$")


class PlatformError(Exception):
    """Base class for platform-level failures."""


class DuplicateName(PlatformError):
    pass


class UnknownRuntime(PlatformError):
    pass


class PrepareFailed(PlatformError):
    pass


class StartFailed(PlatformError):
    pass


class NotFound(PlatformError):
    pass


class GuestError(PlatformError):
    """The guest handler raised or crashed while serving an invocation."""


class InvokeTimeout(PlatformError):
    pass


class InvalidDescriptor(PlatformError):
    pass


@dataclass(frozen=True)
class ResourceLimits:
    max_concurrency: int = 8
    invocation_timeout: float = 10.0

    def validate(self) -> None:
        if self.max_concurrency < 1:
            raise InvalidDescriptor("max_concurrency must be a positive integer")
        if self.invocation_timeout <= 0:
            raise InvalidDescriptor("invocation_timeout must be positive")


@dataclass(frozen=True)
class FunctionDescriptor:
    """A deployable unit: code bundle plus the contract needed to run it.

    ``source_bundle`` maps relative file paths to file bytes. ``entry_point``
    is the symbol the guest runtime looks up in the handler module.
    """

    name: str
    runtime: str
    source_bundle: Dict[str, bytes]
    entry_point: str = "fn"
    dependencies: List[str] = field(default_factory=list)
    env: Dict[str, str] = field(default_factory=dict)
    resource_limits: ResourceLimits = field(default_factory=ResourceLimits)

    def validate(self, known_runtimes: Optional[List[str]] = None) -> None:
        if not self.name or not NAME_RE.match(self.name):
            raise InvalidDescriptor(
                f"function name {self.name!r} must match {NAME_RE.pattern}"
            )
        if not self.source_bundle:
            raise InvalidDescriptor("source_bundle must contain at least one file")
        if not self.entry_point:
            raise InvalidDescriptor("entry_point must be non-empty")
        for path in self.source_bundle:
            if not path or path.startswith("/") or ".." in path.split("/"):
                raise InvalidDescriptor(f"source_bundle path {path!r} must be relative")
        if known_runtimes is not None and self.runtime not in known_runtimes:
            raise UnknownRuntime(
                f"runtime {self.runtime!r} is not registered "
                f"(known: {', '.join(sorted(known_runtimes))})"
            )

    def with_name(self, name: str) -> "FunctionDescriptor":
        return replace(self, name=name)


class DeployStatus(str, Enum):
    PENDING = "Pending"
    PREPARING = "Preparing"
    RUNNING = "Running"
    FAILED = "Failed"
    REMOVED = "Removed"


# Legal forward transitions; anything else is a programming error.
_TRANSITIONS = {
    DeployStatus.PENDING: {DeployStatus.PREPARING},
    DeployStatus.PREPARING: {DeployStatus.RUNNING, DeployStatus.FAILED},
    DeployStatus.RUNNING: {DeployStatus.REMOVED},
    DeployStatus.FAILED: {DeployStatus.REMOVED},
    DeployStatus.REMOVED: set(),
}


@dataclass
class DeploymentRecord:
    descriptor: FunctionDescriptor
    status: DeployStatus = DeployStatus.PENDING
    endpoint_path: Optional[str] = None
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)
    failure_detail: Optional[str] = None

    @property
    def name(self) -> str:
        return self.descriptor.name

    def transition(self, new_status: DeployStatus, *, failure_detail: Optional[str] = None) -> None:
        if new_status not in _TRANSITIONS[self.status]:
            raise PlatformError(
                f"illegal status transition {self.status.value} -> {new_status.value}"
            )
        self.status = new_status
        self.updated_at = time.time()
        if failure_detail is not None:
            self.failure_detail = failure_detail
        # endpoint_path is only meaningful while the function serves traffic
        if new_status is DeployStatus.RUNNING:
            self.endpoint_path = f"/fn/{self.name}"
        else:
            self.endpoint_path = None

    def summary(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "runtime": self.descriptor.runtime,
            "status": self.status.value,
            "endpoint_path": self.endpoint_path,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "failure_detail": self.failure_detail,
        }
