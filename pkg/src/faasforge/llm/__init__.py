"""Chat-completion providers: a live OpenAI-compatible client and a seeded mock."""

from .live import LiveClient
from .mock import FixtureEntry, MockProvider
from .types import (
    ERROR_KINDS,
    LLMConfig,
    LLMResponse,
    PromptLike,
    Provider,
    ProviderError,
    TokenUsage,
)

__all__ = [
    "ERROR_KINDS",
    "FixtureEntry",
    "LLMConfig",
    "LLMResponse",
    "LiveClient",
    "MockProvider",
    "PromptLike",
    "Provider",
    "ProviderError",
    "TokenUsage",
]
