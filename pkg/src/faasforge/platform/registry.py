"""Function registry: deploy, invoke, remove, list, logs.

Safe for concurrent use from multiple request handlers. deploy/remove for
the same name serialize on a per-name lock; different names proceed in
parallel. Each running function owns a bounded invocation queue; waiters
past max_concurrency time out.
"""

from __future__ import annotations

import tempfile
import threading
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Deque, Dict, List, Optional

from .adapters import InvokeResult, RunningHandle, RuntimeAdapter, default_adapters
from .descriptors import (
    DeploymentRecord,
    DeployStatus,
    DuplicateName,
    FunctionDescriptor,
    InvokeTimeout,
    NotFound,
    PlatformError,
    PrepareFailed,
    StartFailed,
    UnknownRuntime,
)

_LOG_RING_SIZE = 500


@dataclass
class LogEntry:
    timestamp: float
    stream: str
    line: str

    def as_dict(self) -> Dict[str, object]:
        return {"timestamp": self.timestamp, "stream": self.stream, "line": self.line}


class _Deployment:
    """Registry-internal state for one function name."""

    def __init__(self, record: DeploymentRecord):
        self.record = record
        self.handle: Optional[RunningHandle] = None
        self.semaphore: Optional[threading.BoundedSemaphore] = None
        self.logs: Deque[LogEntry] = deque(maxlen=_LOG_RING_SIZE)

    def log_sink(self, stream: str, line: str) -> None:
        self.logs.append(LogEntry(timestamp=time.time(), stream=stream, line=line))


class Platform:
    """Embedded function platform with pluggable guest-runtime adapters."""

    def __init__(
        self,
        adapters: Optional[Dict[str, RuntimeAdapter]] = None,
        *,
        work_dir: Optional[str] = None,
        deploy_timeout: float = 30.0,
        invocation_timeout: float = 10.0,
    ):
        self.adapters = dict(adapters) if adapters is not None else default_adapters()
        self.deploy_timeout = deploy_timeout
        self.invocation_timeout = invocation_timeout
        if work_dir is None:
            self._tmp = tempfile.TemporaryDirectory(prefix="faasforge-")
            self.work_dir = Path(self._tmp.name)
        else:
            self._tmp = None
            self.work_dir = Path(work_dir)
            self.work_dir.mkdir(parents=True, exist_ok=True)
        self._registry: Dict[str, _Deployment] = {}
        self._registry_lock = threading.RLock()
        self._name_locks: Dict[str, threading.Lock] = {}

    def register_adapter(self, adapter: RuntimeAdapter) -> None:
        self.adapters[adapter.identifier] = adapter

    def _name_lock(self, name: str) -> threading.Lock:
        with self._registry_lock:
            return self._name_locks.setdefault(name, threading.Lock())

    # -- deploy ----------------------------------------------------------

    def deploy(self, descriptor: FunctionDescriptor) -> DeploymentRecord:
        descriptor.validate()
        adapter = self.adapters.get(descriptor.runtime)
        if adapter is None:
            raise UnknownRuntime(
                f"runtime {descriptor.runtime!r} is not registered "
                f"(known: {', '.join(sorted(self.adapters))})"
            )
        with self._name_lock(descriptor.name):
            with self._registry_lock:
                existing = self._registry.get(descriptor.name)
                if existing is not None and existing.record.status in (
                    DeployStatus.RUNNING,
                    DeployStatus.PREPARING,
                ):
                    raise DuplicateName(
                        f"function {descriptor.name!r} is already {existing.record.status.value}"
                    )
                record = DeploymentRecord(descriptor=descriptor)
                deployment = _Deployment(record)
                self._registry[descriptor.name] = deployment

            record.transition(DeployStatus.PREPARING)
            try:
                unit = adapter.prepare(descriptor, self.work_dir)
            except (PrepareFailed, PlatformError) as err:
                record.transition(DeployStatus.FAILED, failure_detail=str(err))
                return record

            try:
                handle = adapter.start(
                    unit,
                    deploy_timeout=self.deploy_timeout,
                    log_sink=deployment.log_sink,
                )
            except StartFailed as err:
                record.transition(DeployStatus.FAILED, failure_detail=str(err))
                return record

            deployment.handle = handle
            deployment.semaphore = threading.BoundedSemaphore(
                descriptor.resource_limits.max_concurrency
            )
            record.transition(DeployStatus.RUNNING)
            return record

    # -- invoke ----------------------------------------------------------

    def invoke(self, name: str, request: bytes, *, timeout: Optional[float] = None) -> InvokeResult:
        with self._registry_lock:
            deployment = self._registry.get(name)
            if deployment is None or deployment.record.status is not DeployStatus.RUNNING:
                raise NotFound(f"no running function named {name!r}")
            handle = deployment.handle
            semaphore = deployment.semaphore
            adapter = self.adapters[deployment.record.descriptor.runtime]
        limits = deployment.record.descriptor.resource_limits
        effective_timeout = timeout if timeout is not None else min(
            limits.invocation_timeout, self.invocation_timeout
        )
        if not semaphore.acquire(timeout=effective_timeout):
            raise InvokeTimeout(
                f"waited {effective_timeout:.1f}s for an invocation slot on {name!r}"
            )
        try:
            return adapter.invoke(handle, request, timeout=effective_timeout)
        finally:
            semaphore.release()

    # -- remove / list / logs -------------------------------------------

    def remove(self, name: str) -> DeploymentRecord:
        with self._name_lock(name):
            with self._registry_lock:
                deployment = self._registry.get(name)
                if deployment is None or deployment.record.status is DeployStatus.REMOVED:
                    raise NotFound(f"no function named {name!r}")
            record = deployment.record
            if deployment.handle is not None:
                adapter = self.adapters[record.descriptor.runtime]
                adapter.stop(deployment.handle)
            if record.status in (DeployStatus.RUNNING, DeployStatus.FAILED):
                record.transition(DeployStatus.REMOVED)
            else:
                # Pending/Preparing cannot occur here: deploy holds the name lock.
                record.status = DeployStatus.REMOVED
                record.endpoint_path = None
            return record

    def list(self) -> List[DeploymentRecord]:
        with self._registry_lock:
            return [d.record for d in self._registry.values()]

    def names(self) -> List[str]:
        with self._registry_lock:
            return list(self._registry)

    def get(self, name: str) -> DeploymentRecord:
        with self._registry_lock:
            deployment = self._registry.get(name)
        if deployment is None:
            raise NotFound(f"no function named {name!r}")
        return deployment.record

    def logs(self, name: str, *, limit: int = 100) -> List[LogEntry]:
        with self._registry_lock:
            deployment = self._registry.get(name)
        if deployment is None:
            raise NotFound(f"no function named {name!r}")
        entries = list(deployment.logs)
        return entries[-limit:]

    # -- teardown --------------------------------------------------------

    def shutdown(self) -> None:
        """Stop every running function and drop the registry."""
        for name in self.names():
            try:
                self.remove(name)
            except NotFound:
                pass
        if self._tmp is not None:
            self._tmp.cleanup()

    def __enter__(self) -> "Platform":
        return self

    def __exit__(self, *exc_info) -> None:
        self.shutdown()
