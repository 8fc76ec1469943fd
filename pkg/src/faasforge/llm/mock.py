"""Deterministic offline provider backed by a fixture table.

Fixtures map a task to a list of response variants. An entry matches when
its match string occurs in the prompt's user message; the longest match wins
so specific tasks shadow generic ones. Variant choice comes from a PRNG
seeded once per provider, so a given (fixtures, seed, call order) always
replays the same sequence.
"""

from __future__ import annotations

import json
import random
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import yaml

from .types import LLMResponse, PromptLike, ProviderError


@dataclass(frozen=True)
class FixtureEntry:
    key: str
    variants: Sequence[str]
    match: Optional[str] = None

    @property
    def needle(self) -> str:
        return self.match if self.match is not None else self.key


FixtureTable = Union[Dict[str, Sequence[str]], Sequence[FixtureEntry]]


class MockProvider:
    def __init__(
        self,
        fixtures: FixtureTable,
        seed: int = 0,
        synthetic_delay: float = 0.0,
        default: Optional[Sequence[str]] = None,
    ):
        if isinstance(fixtures, dict):
            entries = [FixtureEntry(key=k, variants=tuple(v)) for k, v in fixtures.items()]
        else:
            entries = list(fixtures)
        for entry in entries:
            if not entry.variants:
                raise ValueError(f"fixture {entry.key!r} has no variants")
        self._entries = entries
        self._default = tuple(default) if default else None
        self._rng = random.Random(seed)
        self._lock = threading.Lock()
        self.synthetic_delay = synthetic_delay
        self.calls = 0

    @classmethod
    def from_file(cls, path: Union[str, Path], seed: int = 0,
                  synthetic_delay: Optional[float] = None) -> "MockProvider":
        raw = Path(path).read_text(encoding="utf-8")
        doc = yaml.safe_load(raw) if str(path).endswith((".yaml", ".yml")) else json.loads(raw)
        entries = [
            FixtureEntry(key=t["key"], variants=tuple(t["variants"]), match=t.get("match"))
            for t in doc.get("tasks", [])
        ]
        delay = synthetic_delay if synthetic_delay is not None else float(doc.get("delay", 0.0))
        return cls(
            entries,
            seed=seed,
            synthetic_delay=delay,
            default=doc.get("default"),
        )

    def _resolve(self, user_message: str) -> Optional[Sequence[str]]:
        best: Optional[FixtureEntry] = None
        for entry in self._entries:
            if entry.needle in user_message:
                if best is None or len(entry.needle) > len(best.needle):
                    best = entry
        if best is not None:
            return best.variants
        return self._default

    def complete(self, prompt: PromptLike) -> LLMResponse:
        start = time.perf_counter()
        if self.synthetic_delay > 0:
            time.sleep(self.synthetic_delay)
        with self._lock:
            self.calls += 1
            variants = self._resolve(prompt.user_message)
            if variants is None:
                duration = time.perf_counter() - start
                return LLMResponse(
                    text="",
                    generation_duration=duration,
                    provider_error=ProviderError(
                        "Malformed", "no fixture matches the prompt and no default is set"
                    ),
                )
            # draw on every call so the stream position depends only on call order
            index = self._rng.randrange(len(variants))
            text = variants[index]
        duration = time.perf_counter() - start
        return LLMResponse(text=text, generation_duration=duration)
