"""Provider behavior: wire format, error surfacing, and mock determinism."""

import json
import time
from dataclasses import dataclass

import pytest

from faasforge.httpd import HttpService, Response, Router
from faasforge.llm import LiveClient, LLMConfig, MockProvider


@dataclass
class Prompt:
    system_message: str
    user_message: str


PROMPT = Prompt(system_message="you write functions", user_message="turn on the light")


def make_config(url, **kw):
    return LLMConfig(endpoint_url=url, model_id="test-model", api_key_env_var="FORGE_TEST_KEY", **kw)


def completion_body(text):
    return {
        "choices": [{"message": {"role": "assistant", "content": text}}],
        "usage": {"prompt_tokens": 12, "completion_tokens": 34},
    }


@pytest.fixture
def stub():
    """Chat-completion stub recording every request body and header set."""
    seen = []
    behavior = {"status": 200, "payload": completion_body("ok"), "sleep": 0.0}

    def handler(request):
        seen.append({"json": request.json(), "headers": request.headers})
        if behavior["sleep"]:
            time.sleep(behavior["sleep"])
        if isinstance(behavior["payload"], bytes):
            return Response.raw(behavior["payload"], status=behavior["status"], content_type="application/json")
        return Response.json(behavior["payload"], status=behavior["status"])

    service = HttpService(Router([("POST", "/v1/chat/completions", handler)]))
    with service:
        yield service.url + "/v1/chat/completions", seen, behavior


def test_defaults_match_reference_settings():
    config = LLMConfig()
    assert config.temperature == 0.7
    assert config.max_tokens == 1500
    assert config.request_timeout == 60.0


def test_config_validation():
    with pytest.raises(ValueError):
        LLMConfig(temperature=2.5).validate()
    with pytest.raises(ValueError):
        LLMConfig(max_tokens=0).validate()


def test_live_client_wire_format(stub, monkeypatch):
    url, seen, _ = stub
    monkeypatch.setenv("FORGE_TEST_KEY", "sk-secret")
    response = LiveClient(make_config(url)).complete(PROMPT)
    assert response.ok
    assert response.text == "ok"
    assert response.token_usage.prompt == 12
    assert response.token_usage.completion == 34
    assert response.generation_duration >= 0

    sent = seen[0]["json"]
    assert sent["model"] == "test-model"
    assert sent["temperature"] == 0.7
    assert sent["max_tokens"] == 1500
    assert sent["messages"] == [
        {"role": "system", "content": "you write functions"},
        {"role": "user", "content": "turn on the light"},
    ]
    assert seen[0]["headers"]["Authorization"] == "Bearer sk-secret"


def test_live_client_rate_limit_surfaced(stub):
    url, _, behavior = stub
    behavior["status"] = 429
    behavior["payload"] = {"error": {"message": "slow down"}}
    response = LiveClient(make_config(url)).complete(PROMPT)
    assert not response.ok
    assert response.provider_error.kind == "RateLimit"
    assert "slow down" in response.provider_error.detail


def test_live_client_malformed_body(stub):
    url, _, behavior = stub
    behavior["payload"] = b"this is not json"
    response = LiveClient(make_config(url)).complete(PROMPT)
    assert response.provider_error.kind == "Malformed"


def test_live_client_missing_choices(stub):
    url, _, behavior = stub
    behavior["payload"] = {"choices": []}
    response = LiveClient(make_config(url)).complete(PROMPT)
    assert response.provider_error.kind == "Malformed"


def test_live_client_timeout(stub):
    url, _, behavior = stub
    behavior["sleep"] = 0.5
    response = LiveClient(make_config(url, request_timeout=0.1)).complete(PROMPT)
    assert response.provider_error.kind == "Timeout"
    assert response.generation_duration < 0.5


def test_live_client_connection_refused():
    config = make_config("http://127.0.0.1:1/v1/chat/completions", request_timeout=2.0)
    response = LiveClient(config).complete(PROMPT)
    assert response.provider_error.kind == "Transport"


def test_mock_resolves_by_longest_match():
    provider = MockProvider(
        {
            "light": ["generic light answer"],
            "turn on the light": ["specific answer"],
        }
    )
    assert provider.complete(PROMPT).text == "specific answer"


def test_mock_unmatched_without_default_is_an_error():
    provider = MockProvider({"nope": ["x"]})
    response = provider.complete(PROMPT)
    assert not response.ok
    assert response.provider_error.kind == "Malformed"


def test_mock_unmatched_falls_back_to_default():
    provider = MockProvider({"nope": ["x"]}, default=["fallback text"])
    assert provider.complete(PROMPT).text == "fallback text"


def test_mock_same_seed_same_sequence():
    fixtures = {"turn on the light": [f"variant-{i}" for i in range(8)]}
    a = MockProvider(fixtures, seed=1234)
    b = MockProvider(fixtures, seed=1234)
    sequence_a = [a.complete(PROMPT).text for _ in range(20)]
    sequence_b = [b.complete(PROMPT).text for _ in range(20)]
    assert sequence_a == sequence_b
    assert len(set(sequence_a)) > 1


def test_mock_different_seed_diverges():
    fixtures = {"turn on the light": [f"variant-{i}" for i in range(8)]}
    sequences = {
        tuple(MockProvider(fixtures, seed=s).complete(PROMPT).text for _ in range(6))
        for s in range(4)
    }
    assert len(sequences) > 1


def test_mock_synthetic_delay_shows_up_in_duration():
    provider = MockProvider({"turn on the light": ["x"]}, synthetic_delay=0.05)
    response = provider.complete(PROMPT)
    assert response.generation_duration >= 0.05


def test_mock_from_file(tmp_path):
    doc = {
        "delay": 0.0,
        "default": ["nothing matched"],
        "tasks": [
            {"key": "t1", "match": "turn on the light", "variants": ["from file"]},
        ],
    }
    path = tmp_path / "fixtures.json"
    path.write_text(json.dumps(doc))
    provider = MockProvider.from_file(path, seed=7)
    assert provider.complete(PROMPT).text == "from file"
    assert provider.complete(Prompt("s", "other task")).text == "nothing matched"
