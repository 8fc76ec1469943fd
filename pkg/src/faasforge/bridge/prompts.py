"""Prompt assembly: environment context per runtime plus the user's words."""

from __future__ import annotations

from ..resources import data_text
from .types import EnvironmentContext, MissingApiReference, StructuredPrompt, UserDescription

_API_DOCS = {"python3": "api_python3.md", "nodejs": "api_nodejs.md"}
_RULES = {"python3": "rules_python3.txt", "nodejs": "rules_nodejs.txt"}
_RUNTIME_LABEL = {"python3": "Python 3", "nodejs": "NodeJS"}


def default_context(runtime: str) -> EnvironmentContext:
    """Environment context built from the data files shipped for the runtime."""
    if runtime not in _API_DOCS:
        raise MissingApiReference(f"no API reference registered for runtime {runtime!r}")
    return EnvironmentContext(
        api_reference=data_text(_API_DOCS[runtime]),
        runtime_constraints=data_text(_RULES[runtime]),
    )


def construct_prompt(
    description: UserDescription,
    context: EnvironmentContext = None,
    template_text: str = None,
) -> StructuredPrompt:
    description.validate()
    if context is None:
        context = default_context(description.requested_runtime)
    context.validate()

    rules = context.runtime_constraints
    if context.application_constraints.strip():
        rules = rules.rstrip("\n") + "\n\n" + context.application_constraints

    template = template_text if template_text is not None else data_text("prompt_template.txt")
    system_message = template.format(
        runtime=_RUNTIME_LABEL.get(description.requested_runtime, description.requested_runtime),
        api_reference=context.api_reference,
        output_rules=rules,
    )
    return StructuredPrompt(
        system_message=system_message,
        user_message=description.text,
        runtime=description.requested_runtime,
    )
