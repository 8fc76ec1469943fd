"""Mapping failure evidence to a single category.

The rules run in a fixed order so a stderr blob containing several
signatures always lands in the same bucket: NoCode, then ImportError, then
MissingCode, then DataHandling, then Timeout, then Other.
"""

from __future__ import annotations

from enum import Enum

from .types import FailureCategory, FailureKind


class Stage(str, Enum):
    LLM = "llm_generation"
    EXTRACTION = "extraction"
    PREPARATION = "function_preparation"
    DEPLOYMENT = "faas_deployment"
    INVOCATION = "invocation"


_IMPORT_SIGNATURES = (
    "ModuleNotFoundError",
    "No module named",
    "ImportError",
    "No matching distribution found",
    "Could not find a version that satisfies",
    "Cannot find module",
    "MODULE_NOT_FOUND",
    "ERR_MODULE_NOT_FOUND",
    "npm error 404",
    "npm ERR! 404",
)

_MISSING_CODE_SIGNATURES = (
    "not defined or not callable",
    "handler symbol",
)

_DATA_SIGNATURES = (
    "TypeError",
    "KeyError",
    "IndexError",
    "AttributeError",
    "RangeError",
    "Cannot read propert",
    "is not a function",
    "is not iterable",
    "JSONDecodeError",
)

_TIMEOUT_SIGNATURES = (
    "timed out",
    "TimeoutError",
    "ETIMEDOUT",
    "did not become healthy",
    "no invocation slot",
)


def classify_failure(stage: Stage, evidence: str) -> FailureKind:
    evidence = evidence.strip() or "(no output captured)"
    if stage is Stage.EXTRACTION:
        return FailureKind(FailureCategory.NO_CODE, evidence)

    def has(signatures) -> bool:
        return any(sig in evidence for sig in signatures)

    if has(_IMPORT_SIGNATURES):
        return FailureKind(FailureCategory.IMPORT_ERROR, evidence)
    if has(_MISSING_CODE_SIGNATURES):
        return FailureKind(FailureCategory.MISSING_CODE, evidence)
    if has(_DATA_SIGNATURES):
        return FailureKind(FailureCategory.DATA_HANDLING, evidence)
    if has(_TIMEOUT_SIGNATURES):
        return FailureKind(FailureCategory.TIMEOUT, evidence)
    return FailureKind(FailureCategory.OTHER, evidence)
