"""Client for any chat-completion endpoint speaking the OpenAI wire format."""

from __future__ import annotations

import os
import time
from typing import Optional

import requests

from .types import LLMConfig, LLMResponse, PromptLike, ProviderError, TokenUsage


class LiveClient:
    """Single-shot completion client. Errors come back on the response,
    never as exceptions, so callers always get timing and a classification."""

    def __init__(self, config: LLMConfig, session: Optional[requests.Session] = None):
        config.validate()
        self.config = config
        self._session = session or requests.Session()

    def _api_key(self) -> Optional[str]:
        return os.environ.get(self.config.api_key_env_var)

    def complete(self, prompt: PromptLike) -> LLMResponse:
        payload = {
            "model": self.config.model_id,
            "messages": [
                {"role": "system", "content": prompt.system_message},
                {"role": "user", "content": prompt.user_message},
            ],
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        key = self._api_key()
        if key:
            headers["Authorization"] = f"Bearer {key}"

        start = time.perf_counter()
        try:
            reply = self._session.post(
                self.config.endpoint_url,
                json=payload,
                headers=headers,
                timeout=self.config.request_timeout,
            )
        except requests.Timeout:
            duration = time.perf_counter() - start
            return _failed(duration, "Timeout", f"no response within {self.config.request_timeout}s")
        except requests.RequestException as err:
            duration = time.perf_counter() - start
            return _failed(duration, "Transport", str(err))
        duration = time.perf_counter() - start

        if reply.status_code == 429:
            retry_after = reply.headers.get("Retry-After", "")
            detail = f"rate limited (429){', retry after ' + retry_after if retry_after else ''}: {reply.text[:200]}"
            return _failed(duration, "RateLimit", detail)
        if not 200 <= reply.status_code < 300:
            return _failed(duration, "Transport", f"HTTP {reply.status_code}: {reply.text[:200]}")

        try:
            body = reply.json()
            text = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as err:
            return _failed(duration, "Malformed", f"unexpected response shape: {err}")
        if not isinstance(text, str) or not text:
            return _failed(duration, "Malformed", "empty completion content")

        usage = None
        raw_usage = body.get("usage")
        if isinstance(raw_usage, dict):
            try:
                usage = TokenUsage(
                    prompt=int(raw_usage["prompt_tokens"]),
                    completion=int(raw_usage["completion_tokens"]),
                )
            except (KeyError, TypeError, ValueError):
                usage = None
        return LLMResponse(text=text, generation_duration=duration, token_usage=usage)


def _failed(duration: float, kind: str, detail: str) -> LLMResponse:
    return LLMResponse(
        text="", generation_duration=duration, provider_error=ProviderError(kind, detail)
    )
