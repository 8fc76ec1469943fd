"""Description-to-deployment pipeline: prompts, extraction, packaging, classification."""

from .classify import Stage, classify_failure
from .extract import (
    TAG_SETS,
    detect_dependencies,
    extract_function,
    has_handler_symbol,
    parse_code_blocks,
)
from .packaging import dedupe_name, derive_name, package
from .pipeline import Bridge, BuildOutcome
from .prompts import construct_prompt, default_context
from .types import (
    BridgeError,
    CodeBlock,
    EnvironmentContext,
    FailureCategory,
    FailureKind,
    GeneratedArtifact,
    LatencyBreakdown,
    MissingApiReference,
    NoCodeToPackage,
    StructuredPrompt,
    UserDescription,
)

__all__ = [
    "Bridge",
    "BridgeError",
    "BuildOutcome",
    "CodeBlock",
    "EnvironmentContext",
    "FailureCategory",
    "FailureKind",
    "GeneratedArtifact",
    "LatencyBreakdown",
    "MissingApiReference",
    "NoCodeToPackage",
    "Stage",
    "StructuredPrompt",
    "TAG_SETS",
    "UserDescription",
    "classify_failure",
    "construct_prompt",
    "dedupe_name",
    "default_context",
    "derive_name",
    "detect_dependencies",
    "extract_function",
    "has_handler_symbol",
    "package",
    "parse_code_blocks",
]
