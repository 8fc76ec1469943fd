"""Provider-facing configuration and response types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Protocol

ERROR_KINDS = ("Transport", "RateLimit", "Timeout", "Malformed")


class PromptLike(Protocol):
    system_message: str
    user_message: str


@dataclass(frozen=True)
class LLMConfig:
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    model_id: str = "gpt-4o"
    temperature: float = 0.7
    max_tokens: int = 1500
    request_timeout: float = 60.0
    api_key_env_var: str = "OPENAI_API_KEY"

    def validate(self) -> None:
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be at least 1")
        if self.request_timeout <= 0:
            raise ValueError("request_timeout must be positive")


@dataclass(frozen=True)
class TokenUsage:
    prompt: int
    completion: int


@dataclass(frozen=True)
class ProviderError:
    kind: str
    detail: str

    def __post_init__(self):
        if self.kind not in ERROR_KINDS:
            raise ValueError(f"unknown provider error kind {self.kind!r}")


@dataclass(frozen=True)
class LLMResponse:
    text: str
    generation_duration: float
    token_usage: Optional[TokenUsage] = None
    provider_error: Optional[ProviderError] = None

    def __post_init__(self):
        # text carries content exactly when the call succeeded
        if (self.provider_error is None) == (self.text == ""):
            raise ValueError("exactly one of text / provider_error must be set")

    @property
    def ok(self) -> bool:
        return self.provider_error is None


class Provider(Protocol):
    def complete(self, prompt: PromptLike) -> LLMResponse: ...
