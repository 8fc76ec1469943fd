"""Pulling deployable code out of raw model output."""

from __future__ import annotations

import re
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path
from typing import List, Optional, Tuple

from ..resources import data_text
from .types import CodeBlock, FailureCategory, FailureKind, GeneratedArtifact

# language tags accepted as "this block is for that runtime"
TAG_SETS = {
    "python3": {"python", "python3", "py"},
    "nodejs": {"javascript", "js", "node", "nodejs"},
}

# modules never treated as third-party: injected client plus the handler itself
_LOCAL_MODULES = {"home", "fn"}

_FENCE_OPEN = re.compile(r"^ {0,3}(`{3,}|~{3,})([^`]*)$")

_PY_IMPORT = re.compile(r"^\s*import\s+(.+)$")
_PY_FROM = re.compile(r"^\s*from\s+([A-Za-z_][\w.]*)\s+import\b")
_JS_REQUIRE = re.compile(r"""require\s*\(\s*['"]([^'"]+)['"]\s*\)""")
_JS_IMPORT = re.compile(r"""^\s*import\s+(?:[^'"]*?\bfrom\s+)?['"]([^'"]+)['"]""")

_PY_HANDLER = re.compile(r"(?:^|\n)\s*(?:def\s+fn\s*\(|async\s+def\s+fn\s*\(|fn\s*=)")
_JS_HANDLER = re.compile(
    r"(?:function\s+fn\s*\(|(?:const|let|var)\s+fn\s*=|fn\s*[:=]|exports\.fn|module\.exports)"
)


def parse_code_blocks(raw_text: str) -> Tuple[CodeBlock, ...]:
    """Fenced blocks in document order; backtick and tilde fences both count."""
    blocks: List[CodeBlock] = []
    fence: Optional[str] = None
    tag = ""
    body: List[str] = []
    for line in raw_text.splitlines():
        if fence is None:
            m = _FENCE_OPEN.match(line)
            if m:
                info = m.group(2).strip().lower()
                fence, tag, body = m.group(1), info.split()[0] if info else "", []
            continue
        stripped = line.strip()
        if stripped and set(stripped) == {fence[0]} and len(stripped) >= len(fence):
            blocks.append(CodeBlock(language_tag=tag, body="\n".join(body)))
            fence = None
            continue
        body.append(line)
    if fence is not None and body:
        # unterminated fence: models sometimes stop mid-stream, keep what we got
        blocks.append(CodeBlock(language_tag=tag, body="\n".join(body)))
    return tuple(blocks)


def has_handler_symbol(code: str, runtime: str) -> bool:
    pattern = _PY_HANDLER if runtime == "python3" else _JS_HANDLER
    return bool(pattern.search(code))


def _python_parses(code: str) -> bool:
    try:
        compile(code, "<generated>", "exec")
        return True
    except (SyntaxError, ValueError):
        return False


def _node_parses(code: str) -> bool:
    node = shutil.which("node")
    if node is None:
        # no interpreter around: fall back to a shape check
        return bool(_JS_HANDLER.search(code))
    with tempfile.NamedTemporaryFile("w", suffix=".js", delete=False) as fh:
        fh.write(code)
        path = fh.name
    try:
        proc = subprocess.run(
            [node, "--check", path], capture_output=True, timeout=10
        )
        return proc.returncode == 0
    except (subprocess.TimeoutExpired, OSError):
        return False
    finally:
        Path(path).unlink(missing_ok=True)


def looks_like_code(text: str, runtime: str) -> bool:
    if not has_handler_symbol(text, runtime):
        return False
    return _python_parses(text) if runtime == "python3" else _node_parses(text)


def select_code(blocks: Tuple[CodeBlock, ...], raw_text: str, runtime: str) -> Optional[str]:
    tags = TAG_SETS.get(runtime, set())
    candidates = [b for b in blocks if b.body.strip()]
    for block in candidates:
        if block.language_tag in tags:
            return block.body
    for block in candidates:
        if block.language_tag == "":
            return block.body
    if not blocks and looks_like_code(raw_text, runtime):
        return raw_text
    return None


def detect_dependencies(code: str, runtime: str) -> List[str]:
    """Third-party package names the guest will need installed."""
    names: List[str] = []

    def add(name: str) -> None:
        if name and name not in names:
            names.append(name)

    if runtime == "python3":
        stdlib = set(sys.stdlib_module_names)
        for line in code.splitlines():
            m = _PY_FROM.match(line)
            if m:
                top = m.group(1).split(".")[0]
                if top not in stdlib and top not in _LOCAL_MODULES:
                    add(top)
                continue
            m = _PY_IMPORT.match(line)
            if m:
                for clause in m.group(1).split(","):
                    word = clause.strip().split(" as ")[0].strip()
                    if not re.fullmatch(r"[A-Za-z_][\w.]*", word):
                        continue  # not an import line we understand, skip
                    top = word.split(".")[0]
                    if top not in stdlib and top not in _LOCAL_MODULES:
                        add(top)
    else:
        builtins = set(data_text("node_builtins.txt").split())
        specs = _JS_REQUIRE.findall(code)
        for line in code.splitlines():
            m = _JS_IMPORT.match(line)
            if m:
                specs.append(m.group(1))
        for spec in specs:
            if spec.startswith(".") or spec.startswith("/"):
                continue
            bare = spec[5:] if spec.startswith("node:") else spec
            if spec.startswith("@"):
                parts = bare.split("/")
                top = "/".join(parts[:2]) if len(parts) >= 2 else bare
            else:
                top = bare.split("/")[0]
            if top in builtins or top in _LOCAL_MODULES:
                continue
            add(top)
    return names


def extract_function(raw_text: str, runtime: str) -> GeneratedArtifact:
    """Never raises: an unusable response comes back as a classified artifact."""
    blocks = parse_code_blocks(raw_text)
    code = select_code(blocks, raw_text, runtime)
    if code is None or not code.strip():
        if blocks:
            tags = ", ".join(repr(b.language_tag) for b in blocks)
            evidence = f"code blocks present but none usable for {runtime} (tags: {tags})"
        else:
            evidence = f"no code block in response: {raw_text.strip()[:160] or '(empty)'}"
        return GeneratedArtifact(
            raw_text=raw_text,
            code_blocks=blocks,
            failure=FailureKind(FailureCategory.NO_CODE, evidence),
        )
    return GeneratedArtifact(
        raw_text=raw_text,
        code_blocks=blocks,
        selected_code=code,
        dependencies=tuple(detect_dependencies(code, runtime)),
    )
