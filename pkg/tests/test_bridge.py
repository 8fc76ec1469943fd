"""Prompt construction, code extraction, packaging, classification, and the full pipeline."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faasforge.bridge import (
    Bridge,
    FailureCategory,
    MissingApiReference,
    NoCodeToPackage,
    Stage,
    UserDescription,
    classify_failure,
    construct_prompt,
    dedupe_name,
    detect_dependencies,
    extract_function,
    package,
    parse_code_blocks,
)
from faasforge.llm import MockProvider
from faasforge.platform import DeployStatus
from faasforge.resources import data_text


def desc(text="turn on the living room light", runtime="python3", task_id=None):
    return UserDescription(text=text, requested_runtime=runtime, task_id=task_id)


# --- prompts ---


def test_prompt_embeds_api_reference_and_description_verbatim():
    prompt = construct_prompt(desc())
    assert data_text("api_python3.md") in prompt.system_message
    assert "turn on the living room light" in prompt.user_message
    assert prompt.runtime == "python3"


def test_prompt_is_deterministic():
    a = construct_prompt(desc())
    b = construct_prompt(desc())
    assert a == b


def test_prompt_selects_runtime_specific_doc():
    prompt = construct_prompt(desc(runtime="nodejs"))
    assert data_text("api_nodejs.md") in prompt.system_message
    assert "require('./home')" in prompt.system_message


def test_prompt_unknown_runtime():
    with pytest.raises(MissingApiReference):
        construct_prompt(desc(runtime="cobol"))


def test_prompt_rejects_blank_description():
    with pytest.raises(ValueError):
        construct_prompt(desc(text="   \n"))


def test_prompt_keeps_non_english_text_untranslated():
    text = "把客厅的灯打开"
    prompt = construct_prompt(desc(text=text))
    assert prompt.user_message == text


# --- fence parsing and selection ---


def test_parse_backtick_and_tilde_blocks():
    raw = (
        "Intro.\n```python\na = 1\n```\nmiddle\n~~~js\nb = 2\n~~~\n"
    )
    blocks = parse_code_blocks(raw)
    assert [(b.language_tag, b.body) for b in blocks] == [("python", "a = 1"), ("js", "b = 2")]


def test_parse_unterminated_block_keeps_content():
    blocks = parse_code_blocks("```python\nx = 1\n")
    assert blocks[0].body == "x = 1"


def test_extract_prefers_runtime_tagged_block():
    raw = "```\npseudo code here\n```\n```python\ndef fn(data):\n    return data\n```\n"
    artifact = extract_function(raw, "python3")
    assert artifact.ok
    assert artifact.selected_code.startswith("def fn")


def test_extract_falls_back_to_untagged_block():
    raw = "```\ndef fn(data):\n    return data\n```\n"
    artifact = extract_function(raw, "python3")
    assert artifact.ok


def test_extract_prose_only_is_no_code():
    artifact = extract_function("I cannot help with that.", "python3")
    assert not artifact.ok
    assert artifact.failure.category is FailureCategory.NO_CODE
    assert artifact.failure.evidence


def test_extract_bare_code_accepted_when_it_parses():
    raw = "def fn(data):\n    return data.upper()\n"
    artifact = extract_function(raw, "python3")
    assert artifact.ok
    assert artifact.selected_code == raw


def test_extract_bare_nonparsing_text_rejected():
    artifact = extract_function("def fn(data) return data", "python3")
    assert not artifact.ok


def test_extract_wrong_tag_only_is_no_code():
    raw = "```java\nclass A {}\n```\n"
    artifact = extract_function(raw, "python3")
    assert not artifact.ok
    assert "java" in artifact.failure.evidence


def test_extract_nodejs_tag_set():
    raw = "```javascript\nfunction fn(d) { return d; }\nmodule.exports = { fn };\n```\n"
    artifact = extract_function(raw, "nodejs")
    assert artifact.ok


@settings(max_examples=50, deadline=None)
@given(st.text(alphabet=st.characters(blacklist_characters="`~"), max_size=200))
def test_extract_idempotence(code_like):
    first = extract_function(f"```python\n{code_like}\n```", "python3")
    if not first.ok:
        return
    again = extract_function(f"```python\n{first.selected_code}\n```", "python3")
    assert again.ok
    assert again.selected_code == first.selected_code


# --- dependency detection ---


@pytest.mark.parametrize(
    "code,expected",
    [
        ("import requests\nimport json", ["requests"]),
        ("import os, sys\nimport numpy as np", ["numpy"]),
        ("from collections import Counter", []),
        ("from dateutil.parser import parse", ["dateutil"]),
        ("import home\n\ndef fn(d):\n    return d", []),
        ("def fn(d):\n    return d", []),
    ],
)
def test_python_dependency_detection(code, expected):
    assert detect_dependencies(code, "python3") == expected


@pytest.mark.parametrize(
    "code,expected",
    [
        ("const mqtt = require('mqtt');", ["mqtt"]),
        ("const fs = require('fs');\nconst path = require('node:path');", []),
        ("const home = require('./home');", []),
        ("const x = require('@scope/pkg/sub');", ["@scope/pkg"]),
        ("import axios from 'axios';", ["axios"]),
        ("const a = require('lodash/get');", ["lodash"]),
    ],
)
def test_node_dependency_detection(code, expected):
    assert detect_dependencies(code, "nodejs") == expected


def test_dependency_detection_is_idempotent_with_extraction():
    raw = "```python\nimport requests\n\ndef fn(d):\n    return d\n```"
    artifact = extract_function(raw, "python3")
    assert list(artifact.dependencies) == detect_dependencies(artifact.selected_code, "python3")


# --- packaging ---


def test_package_bundles_code_and_client():
    artifact = extract_function("```python\ndef fn(d):\n    return d\n```", "python3")
    descriptor = package(artifact, desc(task_id="T1_easy-01"))
    assert descriptor.name == "t1-easy-01"
    assert set(descriptor.source_bundle) == {"fn.py", "home.py"}
    assert b"def fn" in descriptor.source_bundle["fn.py"]
    assert b"HOME_API_URL" in descriptor.source_bundle["home.py"]


def test_package_name_from_content_hash_without_task_id():
    artifact = extract_function("```python\ndef fn(d):\n    return d\n```", "python3")
    a = package(artifact, desc())
    b = package(artifact, desc())
    assert a.name == b.name
    assert a.name.startswith("fn-")


def test_package_dedupes_against_taken_names():
    artifact = extract_function("```python\ndef fn(d):\n    return d\n```", "python3")
    taken = {"t1", "t1-2"}
    descriptor = package(artifact, desc(task_id="t1"), taken_names=taken)
    assert descriptor.name == "t1-3"


def test_dedupe_respects_name_length_limit():
    base = "x" * 63
    assert len(dedupe_name(base, {base})) <= 63


def test_package_without_code_raises():
    artifact = extract_function("no code here", "python3")
    with pytest.raises(NoCodeToPackage):
        package(artifact, desc())


def test_package_node_bundle():
    raw = "```js\nfunction fn(d) { return d; }\nmodule.exports = { fn };\n```"
    artifact = extract_function(raw, "nodejs")
    descriptor = package(artifact, desc(runtime="nodejs"))
    assert set(descriptor.source_bundle) == {"fn.js", "home.js"}


# --- classification ---


@pytest.mark.parametrize(
    "stage,evidence,expected",
    [
        (Stage.EXTRACTION, "no code block in response", FailureCategory.NO_CODE),
        (Stage.DEPLOYMENT, "ModuleNotFoundError: No module named 'x'", FailureCategory.IMPORT_ERROR),
        (Stage.DEPLOYMENT, "Error: Cannot find module './missing'", FailureCategory.IMPORT_ERROR),
        (Stage.DEPLOYMENT, "handler symbol 'fn' is not defined or not callable", FailureCategory.MISSING_CODE),
        (Stage.INVOCATION, "KeyError: 'temperature'", FailureCategory.DATA_HANDLING),
        (Stage.INVOCATION, "TypeError: cannot concatenate", FailureCategory.DATA_HANDLING),
        (Stage.INVOCATION, "invocation timed out after 10.0s", FailureCategory.TIMEOUT),
        (Stage.INVOCATION, "something inexplicable", FailureCategory.OTHER),
    ],
)
def test_classification_table(stage, evidence, expected):
    kind = classify_failure(stage, evidence)
    assert kind.category is expected
    assert kind.evidence


def test_classification_rule_order_import_beats_data():
    # module-level KeyError inside an import traceback must still read as import trouble
    evidence = "ImportError: cannot import name 'x'\n  raised from KeyError: 'y'"
    assert classify_failure(Stage.DEPLOYMENT, evidence).category is FailureCategory.IMPORT_ERROR


def test_classifier_matches_real_python_import_signature(platform):
    code = b"import home.extras\n\ndef fn(d):\n    return d\n"
    from faasforge.platform import FunctionDescriptor

    record = platform.deploy(
        FunctionDescriptor(name="sig", runtime="python3",
                           source_bundle={"fn.py": code, "home.py": b"VALUE = 1\n"})
    )
    assert record.status is DeployStatus.FAILED
    kind = classify_failure(Stage.DEPLOYMENT, record.failure_detail)
    assert kind.category is FailureCategory.IMPORT_ERROR


# --- pipeline ---

GOOD_PY = "Here you go.\n```python\ndef fn(data):\n    return 'ok:' + data\n```\nEnjoy."
BROKEN_IMPORT_PY = "```python\nimport home.extras\n\ndef fn(data):\n    return data\n```"
NO_SYMBOL_PY = "```python\ndef run(data):\n    return data\n```"
PROSE_ONLY = "Sorry, I can only describe the steps in words."


@pytest.fixture
def bridge(platform):
    provider = MockProvider(
        {
            "turn on the living room light": [GOOD_PY],
            "broken import task": [BROKEN_IMPORT_PY],
            "missing symbol task": [NO_SYMBOL_PY],
            "prose task": [PROSE_ONLY],
        },
        seed=7,
    )
    return Bridge(platform, provider)


def test_pipeline_golden_path(bridge, platform):
    outcome = bridge.build_and_deploy(desc(task_id="golden"))
    assert outcome.ok
    assert outcome.record.status is DeployStatus.RUNNING
    assert platform.invoke(outcome.record.descriptor.name, b"x").body == b"ok:x"
    b = outcome.breakdown
    assert b.llm_generation is not None
    assert b.function_preparation is not None
    assert b.faas_deployment is not None
    assert b.is_additive()


def test_pipeline_prose_short_circuits(bridge):
    outcome = bridge.build_and_deploy(desc(text="prose task"))
    assert not outcome.ok
    assert outcome.stage_error == "ExtractionFailure"
    assert outcome.failure.category is FailureCategory.NO_CODE
    assert outcome.breakdown.faas_deployment is None
    assert outcome.breakdown.llm_generation is not None


def test_pipeline_broken_import_classified(bridge):
    outcome = bridge.build_and_deploy(desc(text="broken import task", task_id="bad-import"))
    assert outcome.stage_error == "DeployFailure"
    assert outcome.failure.category is FailureCategory.IMPORT_ERROR
    assert outcome.record.status is DeployStatus.FAILED
    assert outcome.breakdown.faas_deployment is not None


def test_pipeline_missing_symbol_classified(bridge):
    outcome = bridge.build_and_deploy(desc(text="missing symbol task", task_id="no-sym"))
    assert outcome.stage_error == "DeployFailure"
    assert outcome.failure.category is FailureCategory.MISSING_CODE


def test_pipeline_provider_error_is_llm_error(platform):
    provider = MockProvider({"unmatched": ["x"]})  # nothing matches, no default
    outcome = Bridge(platform, provider).build_and_deploy(desc(text="some task"))
    assert outcome.stage_error == "LlmError"
    assert not outcome.ok
    assert outcome.breakdown.function_preparation is None


def test_pipeline_name_collision_suffixes(bridge, platform):
    first = bridge.build_and_deploy(desc(task_id="rep"))
    second = bridge.build_and_deploy(desc(task_id="rep"))
    assert first.record.descriptor.name == "rep"
    assert second.record.descriptor.name == "rep-2"
    assert {r.descriptor.name for r in platform.list()} == {"rep", "rep-2"}


def test_pipeline_observer_sees_stage_progression(bridge):
    events = []
    bridge.build_and_deploy(desc(task_id="obs"), observer=events.append)
    stages = [(e["stage"], e["state"]) for e in events if e["event"] == "stage"]
    assert stages == [
        ("llm_generation", "running"),
        ("llm_generation", "ok"),
        ("function_preparation", "running"),
        ("function_preparation", "ok"),
        ("faas_deployment", "running"),
        ("faas_deployment", "ok"),
    ]
    results = [e for e in events if e["event"] == "result"]
    assert len(results) == 1
    assert results[0]["ok"] is True


def test_pipeline_synthetic_delay_lands_in_llm_stage(platform):
    provider = MockProvider({"turn on the living room light": [GOOD_PY]}, synthetic_delay=0.1)
    outcome = Bridge(platform, provider).build_and_deploy(desc(task_id="delayed"))
    assert 0.08 <= outcome.breakdown.llm_generation <= 0.2
