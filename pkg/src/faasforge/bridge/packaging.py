"""Turning an extracted artifact into a deployable function bundle."""

from __future__ import annotations

import hashlib
import re
from typing import Dict, Iterable, Optional

from ..platform import FunctionDescriptor
from ..resources import data_text
from .types import GeneratedArtifact, NoCodeToPackage, UserDescription

_HANDLER_FILE = {"python3": "fn.py", "nodejs": "fn.js"}
_CLIENT_FILE = {"python3": ("home.py", "home_client.py"), "nodejs": ("home.js", "home_client.js")}


def derive_name(description: UserDescription, code: str) -> str:
    """Platform-safe name from the task id, or a content hash when there is none."""
    if description.task_id:
        slug = re.sub(r"[^a-z0-9-]+", "-", description.task_id.lower()).strip("-")
        slug = slug[:63]
        if slug and re.match(r"^[a-z0-9]", slug):
            return slug
    digest = hashlib.sha256(code.encode("utf-8")).hexdigest()[:10]
    return f"fn-{digest}"


def dedupe_name(name: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if name not in taken:
        return name
    counter = 2
    while True:
        # keep room for the suffix inside the 63-char limit
        candidate = f"{name[:63 - len(str(counter)) - 1]}-{counter}"
        if candidate not in taken:
            return candidate
        counter += 1


def package(
    artifact: GeneratedArtifact,
    description: UserDescription,
    taken_names: Iterable[str] = (),
    env: Optional[Dict[str, str]] = None,
) -> FunctionDescriptor:
    if artifact.selected_code is None:
        raise NoCodeToPackage(artifact.failure.evidence if artifact.failure else "no code selected")
    runtime = description.requested_runtime
    if runtime not in _HANDLER_FILE:
        raise NoCodeToPackage(f"no packaging recipe for runtime {runtime!r}")

    code = artifact.selected_code
    if not code.endswith("\n"):
        code += "\n"
    client_name, client_resource = _CLIENT_FILE[runtime]
    bundle = {
        _HANDLER_FILE[runtime]: code.encode("utf-8"),
        client_name: data_text(client_resource).encode("utf-8"),
    }
    name = dedupe_name(derive_name(description, code), taken_names)
    return FunctionDescriptor(
        name=name,
        runtime=runtime,
        source_bundle=bundle,
        dependencies=tuple(artifact.dependencies),
        env=dict(env or {}),
    )
