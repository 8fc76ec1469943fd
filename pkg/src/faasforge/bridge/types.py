"""Domain types for the description-to-deployment pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple


class BridgeError(Exception):
    pass


class MissingApiReference(BridgeError):
    pass


class NoCodeToPackage(BridgeError):
    pass


@dataclass(frozen=True)
class UserDescription:
    """What the end user asked for, in their own words and language."""

    text: str
    requested_runtime: str = "python3"
    task_id: Optional[str] = None

    def validate(self) -> None:
        if not self.text.strip():
            raise ValueError("description text is empty")


@dataclass(frozen=True)
class EnvironmentContext:
    api_reference: str
    runtime_constraints: str
    application_constraints: str = ""

    def validate(self) -> None:
        if not self.api_reference.strip():
            raise ValueError("api_reference is empty")


@dataclass(frozen=True)
class StructuredPrompt:
    system_message: str
    user_message: str
    runtime: str


@dataclass(frozen=True)
class CodeBlock:
    language_tag: str
    body: str


class FailureCategory(str, Enum):
    NO_CODE = "NoCode"
    IMPORT_ERROR = "ImportError"
    DATA_HANDLING = "DataHandling"
    MISSING_CODE = "MissingCode"
    TIMEOUT = "Timeout"
    OTHER = "Other"


@dataclass(frozen=True)
class FailureKind:
    category: FailureCategory
    evidence: str

    def __post_init__(self):
        if not self.evidence.strip():
            raise ValueError("a classified failure must carry evidence")


@dataclass(frozen=True)
class GeneratedArtifact:
    raw_text: str
    code_blocks: Tuple[CodeBlock, ...]
    selected_code: Optional[str] = None
    dependencies: Tuple[str, ...] = ()
    failure: Optional[FailureKind] = None

    def __post_init__(self):
        if (self.selected_code is None) == (self.failure is None):
            raise ValueError("exactly one of selected_code / failure must be set")

    @property
    def ok(self) -> bool:
        return self.failure is None


@dataclass(frozen=True)
class LatencyBreakdown:
    """Stage durations in seconds; a stage is None when the run never reached it."""

    llm_generation: Optional[float] = None
    function_preparation: Optional[float] = None
    faas_deployment: Optional[float] = None
    total: float = 0.0

    ADDITIVITY_TOLERANCE = 0.005

    @property
    def stage_sum(self) -> float:
        return sum(
            d for d in (self.llm_generation, self.function_preparation, self.faas_deployment)
            if d is not None
        )

    def is_additive(self, tolerance: float = ADDITIVITY_TOLERANCE) -> bool:
        return abs(self.total - self.stage_sum) <= tolerance

    def to_dict(self) -> dict:
        return {
            "llm_generation": self.llm_generation,
            "function_preparation": self.function_preparation,
            "faas_deployment": self.faas_deployment,
            "total": self.total,
        }
