"""Console backend: build endpoint, progress stream, mounted route families."""

import json
import threading

import pytest
import requests

from faasforge.llm import MockProvider
from faasforge.service import BuildSession, ConsoleService

LIGHT_ON = (
    "Sure.\n\n```python\nimport home\n\ndef fn(data):\n"
    "    home.set('light_livingroom', 'power', 'on')\n    return 'lit'\n```\n"
)
PROSE = "You could simply flip the wall switch when you walk in."

FIXTURES = {
    "turn on the living room light": [LIGHT_ON],
    "write me a poem about lights": [PROSE],
}


@pytest.fixture
def console(platform):
    provider = MockProvider(FIXTURES, seed=1)
    with ConsoleService(platform, provider, subscribe_timeout=1.0) as svc:
        yield svc


def _post_build(console, description, **extra):
    return requests.post(
        f"{console.url}/build",
        json={"description": description, "runtime": "python3", **extra},
        timeout=30,
    )


def _sse_events(response):
    events = []
    for line in response.iter_lines():
        if line.startswith(b"data: "):
            events.append(json.loads(line[len(b"data: "):]))
    return events


def test_build_deploy_invoke_and_observe_state(console):
    reply = _post_build(console, "turn on the living room light", task_id="lit")
    assert reply.status_code == 200
    doc = reply.json()
    assert doc["ok"] is True
    assert doc["record"]["status"] == "Running"
    assert "home.set" in doc["artifact"]["selected_code"]
    assert doc["breakdown"]["total"] >= doc["breakdown"]["llm_generation"]

    name = doc["record"]["name"]
    invoked = requests.post(f"{console.url}/fn/{name}", data=b"go", timeout=30)
    assert invoked.status_code == 200
    assert invoked.content == b"lit"

    # the function wrote through HOME_API_URL back into this same service
    value = requests.get(
        f"{console.url}/devices/light_livingroom/power", timeout=5
    ).json()
    assert value["value"] == "on"

    removed = requests.delete(f"{console.url}/functions/{name}", timeout=5)
    assert removed.status_code == 200
    again = requests.post(f"{console.url}/fn/{name}", data=b"go", timeout=5)
    assert again.status_code == 404


def test_stream_replays_and_follows_to_result(console):
    session = "stream-1"
    collected = []

    def subscribe():
        with requests.get(
            f"{console.url}/build/{session}/events", stream=True, timeout=30
        ) as resp:
            collected.extend(_sse_events(resp))

    watcher = threading.Thread(target=subscribe)
    watcher.start()
    reply = _post_build(console, "turn on the living room light", session=session)
    assert reply.json()["session"] == session
    watcher.join(timeout=10)
    assert not watcher.is_alive()

    stages = [(e["stage"], e["state"]) for e in collected if e["event"] == "stage"]
    assert stages == [
        ("llm_generation", "running"), ("llm_generation", "ok"),
        ("function_preparation", "running"), ("function_preparation", "ok"),
        ("faas_deployment", "running"), ("faas_deployment", "ok"),
    ]
    assert collected[-1]["event"] == "result"
    assert collected[-1]["ok"] is True

    # late subscriber gets the full history replayed
    with requests.get(
        f"{console.url}/build/{session}/events", stream=True, timeout=30
    ) as resp:
        replay = _sse_events(resp)
    assert replay == collected


def test_prose_build_reports_no_code(console):
    reply = _post_build(console, "write me a poem about lights", session="s-prose")
    doc = reply.json()
    assert doc["ok"] is False
    assert doc["failure"]["category"] == "NoCode"
    assert doc["stage_error"] == "ExtractionFailure"
    assert doc["record"] is None

    with requests.get(
        f"{console.url}/build/s-prose/events", stream=True, timeout=30
    ) as resp:
        events = _sse_events(resp)
    stages = [(e["stage"], e["state"]) for e in events if e["event"] == "stage"]
    assert stages[-1] == ("function_preparation", "failed")
    assert events[-1]["event"] == "result"
    assert events[-1]["ok"] is False


def test_build_input_validation(console):
    reply = requests.post(f"{console.url}/build", json={"runtime": "python3"},
                          timeout=5)
    assert reply.status_code == 400
    reply = requests.post(
        f"{console.url}/build",
        json={"description": "x", "runtime": "cobol"}, timeout=5,
    )
    assert reply.status_code == 400
    assert "runtime" in reply.json()["detail"]


def test_duplicate_session_rejected(console):
    first = _post_build(console, "turn on the living room light", session="dup")
    assert first.status_code == 200
    second = _post_build(console, "turn on the living room light", session="dup")
    assert second.status_code == 400


def test_unknown_session_stream_is_404(console):
    reply = requests.get(f"{console.url}/build/nobody/events", timeout=10)
    assert reply.status_code == 404


def test_device_routes_are_mounted(console):
    listing = requests.get(f"{console.url}/devices", timeout=5).json()
    assert "light_livingroom" in listing


def test_static_assets(platform, tmp_path):
    (tmp_path / "index.html").write_text("<h1>console</h1>", encoding="utf-8")
    (tmp_path / "app.js").write_text("console.log('hi');", encoding="utf-8")
    provider = MockProvider(FIXTURES, seed=1)
    with ConsoleService(platform, provider, static_dir=tmp_path) as svc:
        root = requests.get(f"{svc.url}/", timeout=5)
        assert root.status_code == 200
        assert "text/html" in root.headers["Content-Type"]
        assert root.text == "<h1>console</h1>"
        js = requests.get(f"{svc.url}/app.js", timeout=5)
        assert "javascript" in js.headers["Content-Type"]
        missing = requests.get(f"{svc.url}/nope.css", timeout=5)
        assert missing.status_code == 404
        escape = requests.get(f"{svc.url}/%2e%2e/secret", timeout=5)
        assert escape.status_code == 404


def test_session_follow_stops_when_idle():
    session = BuildSession("idle")
    session.append({"event": "stage", "stage": "llm_generation", "state": "running"})
    events = list(session.follow(idle_timeout=0.2))
    assert len(events) == 1
