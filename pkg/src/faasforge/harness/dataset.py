"""Task corpus files: schema, loading, validation diagnostics.

A dataset is a UTF-8 JSON document:

    {
      "tasks": [
        {
          "task_id": "easy-01",
          "complexity": "easy",            // easy | medium | advanced | complex
          "subtask_count": 1,
          "description": "...",            // verbatim user text, any language
          "runtime": "python3",
          "semantic_suite": [
            {
              "name": "...",
              "scenario": {"initial_state": {...}, "stimuli": [...]},
              "assertions": [{"kind": "...", ...}]
            }
          ]
        }
      ]
    }

Description text is carried byte-for-byte; nothing is translated or trimmed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from ..homesim import SemanticTestCase

COMPLEXITY_TIERS = ("easy", "medium", "advanced", "complex")


class SchemaError(Exception):
    """A dataset file that does not match the documented shape."""

    def __init__(self, message: str, *, path: Optional[str] = None,
                 task: Optional[str] = None, field: Optional[str] = None):
        self.path = path
        self.task = task
        self.field = field
        where = []
        if path is not None:
            where.append(str(path))
        if task is not None:
            where.append(f"task {task}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    complexity: str
    description_text: str
    runtime: str
    semantic_suite: Tuple[SemanticTestCase, ...]
    subtask_count: int = 1

    def __post_init__(self):
        if not self.task_id:
            raise ValueError("task_id must be non-empty")
        if self.complexity not in COMPLEXITY_TIERS:
            raise ValueError(
                f"complexity must be one of {list(COMPLEXITY_TIERS)}, "
                f"got {self.complexity!r}"
            )
        if not self.description_text:
            raise ValueError("description_text must be non-empty")
        if not self.semantic_suite:
            raise ValueError("semantic_suite must contain at least one case")
        if self.subtask_count < 1:
            raise ValueError("subtask_count must be positive")

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "complexity": self.complexity,
            "subtask_count": self.subtask_count,
            "description": self.description_text,
            "runtime": self.runtime,
            "semantic_suite": [case.to_dict() for case in self.semantic_suite],
        }


def _parse_task(entry: object, index: int, path: str) -> TaskSpec:
    if not isinstance(entry, dict):
        raise SchemaError(f"entry #{index} is not an object", path=path)
    task_label = str(entry.get("task_id") or f"#{index}")

    def require(field: str) -> object:
        if field not in entry:
            raise SchemaError("missing", path=path, task=task_label, field=field)
        return entry[field]

    suite_doc = require("semantic_suite")
    if not isinstance(suite_doc, list) or not suite_doc:
        raise SchemaError(
            "must be a non-empty list", path=path, task=task_label,
            field="semantic_suite",
        )
    cases = []
    for case_index, case_doc in enumerate(suite_doc):
        try:
            cases.append(SemanticTestCase.from_dict(case_doc))
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(
                f"case #{case_index} is invalid: {exc}",
                path=path, task=task_label, field="semantic_suite",
            ) from exc

    try:
        return TaskSpec(
            task_id=str(require("task_id")),
            complexity=str(require("complexity")),
            description_text=str(require("description")),
            runtime=str(require("runtime")),
            semantic_suite=tuple(cases),
            subtask_count=int(entry.get("subtask_count", 1)),
        )
    except ValueError as exc:
        raise SchemaError(str(exc), path=path, task=task_label) from exc


def load_dataset(path: Union[str, Path]) -> List[TaskSpec]:
    """Parse a dataset file into task specs, with field-level diagnostics."""
    path = Path(path)
    raw = path.read_bytes()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise SchemaError(f"not valid UTF-8: {exc}", path=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"not valid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            path=str(path),
        ) from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("tasks"), list):
        raise SchemaError("top level must be {\"tasks\": [...]}", path=str(path))
    tasks = [
        _parse_task(entry, index, str(path))
        for index, entry in enumerate(doc["tasks"])
    ]
    seen = set()
    for task in tasks:
        if task.task_id in seen:
            raise SchemaError(
                "duplicate task_id", path=str(path), task=task.task_id,
                field="task_id",
            )
        seen.add(task.task_id)
    return tasks


def dump_dataset(tasks: Sequence[TaskSpec], path: Union[str, Path]) -> Path:
    """Write tasks in the format load_dataset reads. Deterministic byte output."""
    path = Path(path)
    doc = {"tasks": [task.to_dict() for task in tasks]}
    path.write_text(
        json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return path
