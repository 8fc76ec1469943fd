"""Guest-runtime adapters.

An adapter turns a source bundle into a running loopback HTTP server that
wraps the guest handler. The default adapters run each function as a
supervised subprocess; the adapter contract keeps the rest of the platform
ignorant of how the guest is hosted.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import sys
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

import requests

from ..resources import data_bytes
from .descriptors import (
    FunctionDescriptor,
    GuestError,
    InvokeTimeout,
    PlatformError,
    PrepareFailed,
    StartFailed,
)

LogSink = Callable[[str, str], None]

_PROBE_INTERVAL = 0.005
_STDERR_TAIL_LINES = 60


@dataclass
class PreparedUnit:
    descriptor: FunctionDescriptor
    work_dir: Path
    command: List[str]
    env: Dict[str, str]


@dataclass
class RunningHandle:
    unit: PreparedUnit
    process: subprocess.Popen
    port: int
    stopped: bool = False
    stderr_tail: List[str] = field(default_factory=list)
    _readers: List[threading.Thread] = field(default_factory=list)

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"


@dataclass
class InvokeResult:
    status: int
    body: bytes
    content_type: str = "application/octet-stream"


class RuntimeAdapter:
    """Behavioral contract every guest runtime implements."""

    identifier: str = ""

    def prepare(self, descriptor: FunctionDescriptor, base_dir: Path) -> PreparedUnit:
        raise NotImplementedError

    def start(
        self,
        unit: PreparedUnit,
        *,
        deploy_timeout: float,
        log_sink: Optional[LogSink] = None,
    ) -> RunningHandle:
        raise NotImplementedError

    def probe(self, handle: RunningHandle) -> bool:
        raise NotImplementedError

    def invoke(self, handle: RunningHandle, request: bytes, *, timeout: float) -> InvokeResult:
        raise NotImplementedError

    def stop(self, handle: RunningHandle) -> None:
        raise NotImplementedError


class SubprocessAdapter(RuntimeAdapter):
    """Shared machinery for subprocess-hosted guests.

    Subclasses provide the source extension, the shim file, the interpreter
    command, and dependency installation.
    """

    source_extension = ""
    shim_name = ""
    shim_data_file = ""

    def interpreter_command(self, unit_dir: Path) -> List[str]:
        raise NotImplementedError

    def install_dependencies(self, descriptor: FunctionDescriptor, work_dir: Path, timeout: float) -> None:
        raise NotImplementedError

    def runtime_env(self, work_dir: Path) -> Dict[str, str]:
        return {}

    # -- prepare ---------------------------------------------------------

    def prepare(self, descriptor: FunctionDescriptor, base_dir: Path) -> PreparedUnit:
        work_dir = Path(base_dir) / f"{descriptor.name}-{os.urandom(4).hex()}"
        work_dir.mkdir(parents=True, exist_ok=False)
        try:
            for rel_path, content in descriptor.source_bundle.items():
                target = work_dir / rel_path
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_bytes(content)
            handler_module = self._handler_module(descriptor)
            (work_dir / self.shim_name).write_bytes(data_bytes(self.shim_data_file))
            if descriptor.dependencies:
                self.install_dependencies(descriptor, work_dir, timeout=120.0)
            env = {
                "PATH": os.environ.get("PATH", "/usr/bin:/bin"),
                "LANG": "C.UTF-8",
                "GUEST_HANDLER_MODULE": handler_module,
                "GUEST_HANDLER_SYMBOL": descriptor.entry_point,
            }
            env.update(self.runtime_env(work_dir))
            env.update(descriptor.env)
            command = self.interpreter_command(work_dir) + [str(work_dir / self.shim_name)]
            return PreparedUnit(descriptor=descriptor, work_dir=work_dir, command=command, env=env)
        except PlatformError:
            shutil.rmtree(work_dir, ignore_errors=True)
            raise
        except OSError as err:
            shutil.rmtree(work_dir, ignore_errors=True)
            raise PrepareFailed(f"could not materialize bundle: {err}") from err

    def _handler_module(self, descriptor: FunctionDescriptor) -> str:
        preferred = f"fn{self.source_extension}"
        sources = [p for p in descriptor.source_bundle if p.endswith(self.source_extension)]
        if preferred in descriptor.source_bundle:
            return "fn"
        if len(sources) == 1:
            return Path(sources[0]).stem
        raise PrepareFailed(
            f"cannot determine handler module: expected {preferred} or exactly one "
            f"*{self.source_extension} file, bundle has {sorted(descriptor.source_bundle)}"
        )

    # -- lifecycle -------------------------------------------------------

    def start(
        self,
        unit: PreparedUnit,
        *,
        deploy_timeout: float,
        log_sink: Optional[LogSink] = None,
    ) -> RunningHandle:
        port_file = unit.work_dir / ".port"
        process = subprocess.Popen(
            unit.command,
            cwd=str(unit.work_dir),
            env=unit.env,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        handle = RunningHandle(unit=unit, process=process, port=0)
        self._attach_readers(handle, log_sink)

        deadline = time.monotonic() + deploy_timeout
        while time.monotonic() < deadline:
            if process.poll() is not None:
                self._drain(handle)
                raise StartFailed(self._exit_detail(handle))
            if port_file.is_file():
                text = port_file.read_text().strip()
                if text:
                    handle.port = int(text)
                    break
            time.sleep(_PROBE_INTERVAL)
        else:
            self.stop(handle)
            raise StartFailed(
                f"guest did not come up within {deploy_timeout:.1f}s\n" + self._stderr_text(handle)
            )

        while time.monotonic() < deadline:
            if process.poll() is not None:
                self._drain(handle)
                raise StartFailed(self._exit_detail(handle))
            if self.probe(handle):
                return handle
            time.sleep(_PROBE_INTERVAL)
        self.stop(handle)
        raise StartFailed(
            f"guest never became healthy within {deploy_timeout:.1f}s\n" + self._stderr_text(handle)
        )

    def probe(self, handle: RunningHandle) -> bool:
        if handle.stopped or handle.port == 0:
            return False
        try:
            resp = requests.get(f"{handle.base_url}/_health", timeout=1.0)
        except requests.RequestException:
            return False
        return resp.status_code == 200

    def invoke(self, handle: RunningHandle, request: bytes, *, timeout: float) -> InvokeResult:
        if handle.stopped:
            raise PlatformError("guest is not running (stopped handle)")
        try:
            resp = requests.post(handle.base_url + "/", data=request, timeout=timeout)
        except requests.Timeout as err:
            raise InvokeTimeout(f"invocation exceeded {timeout:.1f}s") from err
        except requests.RequestException as err:
            if handle.process.poll() is not None:
                raise GuestError(
                    "guest process exited during invocation\n" + self._stderr_text(handle)
                ) from err
            raise PlatformError(f"could not reach guest: {err}") from err
        if resp.headers.get("X-Guest-Error") == "1":
            raise GuestError(resp.content.decode("utf-8", errors="replace"))
        return InvokeResult(
            status=resp.status_code,
            body=resp.content,
            content_type=resp.headers.get("Content-Type", "application/octet-stream"),
        )

    def stop(self, handle: RunningHandle) -> None:
        if handle.stopped:
            return
        handle.stopped = True
        process = handle.process
        if process.poll() is None:
            process.terminate()
            try:
                process.wait(timeout=2.0)
            except subprocess.TimeoutExpired:
                process.kill()
                process.wait(timeout=2.0)
        self._drain(handle)
        shutil.rmtree(handle.unit.work_dir, ignore_errors=True)

    # -- plumbing --------------------------------------------------------

    def _attach_readers(self, handle: RunningHandle, log_sink: Optional[LogSink]) -> None:
        def pump(stream, stream_name: str) -> None:
            for raw in iter(stream.readline, b""):
                line = raw.decode("utf-8", errors="replace").rstrip("\n")
                if stream_name == "stderr":
                    handle.stderr_tail.append(line)
                    del handle.stderr_tail[:-_STDERR_TAIL_LINES]
                if log_sink is not None:
                    log_sink(stream_name, line)
            stream.close()

        for stream, name in ((handle.process.stdout, "stdout"), (handle.process.stderr, "stderr")):
            thread = threading.Thread(target=pump, args=(stream, name), daemon=True)
            thread.start()
            handle._readers.append(thread)

    def _drain(self, handle: RunningHandle) -> None:
        for thread in handle._readers:
            thread.join(timeout=1.0)

    def _stderr_text(self, handle: RunningHandle) -> str:
        return "\n".join(handle.stderr_tail)

    def _exit_detail(self, handle: RunningHandle) -> str:
        code = handle.process.returncode
        return f"guest exited with status {code} before becoming healthy\n" + self._stderr_text(handle)


class PythonAdapter(SubprocessAdapter):
    identifier = "python3"
    source_extension = ".py"
    shim_name = "_guest_server.py"
    shim_data_file = "shim_python.py"

    def interpreter_command(self, unit_dir: Path) -> List[str]:
        return [sys.executable, "-u"]

    def runtime_env(self, work_dir: Path) -> Dict[str, str]:
        lib_dir = work_dir / "_deps"
        parts = [str(work_dir)]
        if lib_dir.is_dir():
            parts.append(str(lib_dir))
        return {"PYTHONPATH": os.pathsep.join(parts), "PYTHONUNBUFFERED": "1"}

    def install_dependencies(self, descriptor: FunctionDescriptor, work_dir: Path, timeout: float) -> None:
        lib_dir = work_dir / "_deps"
        lib_dir.mkdir(exist_ok=True)
        cmd = [
            sys.executable,
            "-m",
            "pip",
            "install",
            "--quiet",
            "--no-cache-dir",
            "--disable-pip-version-check",
            "--target",
            str(lib_dir),
            *descriptor.dependencies,
        ]
        self._run_installer(cmd, work_dir, timeout)

    def _run_installer(self, cmd: List[str], work_dir: Path, timeout: float) -> None:
        try:
            proc = subprocess.run(
                cmd,
                cwd=str(work_dir),
                capture_output=True,
                timeout=timeout,
            )
        except subprocess.TimeoutExpired as err:
            raise PrepareFailed(f"dependency install timed out after {timeout:.0f}s") from err
        if proc.returncode != 0:
            detail = proc.stderr.decode("utf-8", errors="replace")
            raise PrepareFailed(f"dependency install failed:\n{detail}")


class NodeAdapter(SubprocessAdapter):
    identifier = "nodejs"
    source_extension = ".js"
    shim_name = "_guest_server.js"
    shim_data_file = "shim_node.js"

    def __init__(self, node_binary: str = "node", npm_binary: str = "npm"):
        self.node_binary = node_binary
        self.npm_binary = npm_binary

    def interpreter_command(self, unit_dir: Path) -> List[str]:
        return [self.node_binary]

    def runtime_env(self, work_dir: Path) -> Dict[str, str]:
        return {"NODE_PATH": str(work_dir / "node_modules")}

    def install_dependencies(self, descriptor: FunctionDescriptor, work_dir: Path, timeout: float) -> None:
        cmd = [
            self.npm_binary,
            "install",
            "--no-audit",
            "--no-fund",
            "--loglevel=error",
            *descriptor.dependencies,
        ]
        env = dict(os.environ)
        env["npm_config_cache"] = str(work_dir / ".npm-cache")
        try:
            proc = subprocess.run(
                cmd,
                cwd=str(work_dir),
                capture_output=True,
                timeout=timeout,
                env=env,
            )
        except subprocess.TimeoutExpired as err:
            raise PrepareFailed(f"dependency install timed out after {timeout:.0f}s") from err
        if proc.returncode != 0:
            detail = proc.stderr.decode("utf-8", errors="replace")
            raise PrepareFailed(f"dependency install failed:\n{detail}")


def default_adapters() -> Dict[str, RuntimeAdapter]:
    return {
        PythonAdapter.identifier: PythonAdapter(),
        NodeAdapter.identifier: NodeAdapter(),
    }
