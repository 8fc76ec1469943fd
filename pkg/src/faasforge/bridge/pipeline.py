"""End-to-end orchestration: description in, running function (or classified failure) out."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from ..llm import LLMResponse, Provider
from ..platform import (
    DeploymentRecord,
    DeployStatus,
    FunctionDescriptor,
    Platform,
    PlatformError,
)
from .classify import Stage, classify_failure
from .extract import extract_function
from .packaging import package
from .prompts import construct_prompt, default_context
from .types import (
    EnvironmentContext,
    FailureCategory,
    FailureKind,
    GeneratedArtifact,
    LatencyBreakdown,
    UserDescription,
)

Observer = Callable[[dict], None]


@dataclass
class BuildOutcome:
    description: UserDescription
    breakdown: LatencyBreakdown
    record: Optional[DeploymentRecord] = None
    artifact: Optional[GeneratedArtifact] = None
    descriptor: Optional[FunctionDescriptor] = None
    response: Optional[LLMResponse] = None
    failure: Optional[FailureKind] = None
    stage_error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def summary(self) -> dict:
        return {
            "ok": self.ok,
            "function": self.record.descriptor.name if self.record else None,
            "status": self.record.status.value if self.record else None,
            "stage_error": self.stage_error,
            "failure": (
                {"category": self.failure.category.value, "evidence": self.failure.evidence}
                if self.failure
                else None
            ),
            "dependencies": list(self.artifact.dependencies) if self.artifact else [],
            "breakdown": self.breakdown.to_dict(),
        }


class Bridge:
    """Wires a prompt builder, an LLM provider, and the platform together.

    Holds no mutable state of its own, so one instance can serve concurrent
    builds for distinct descriptions.
    """

    def __init__(
        self,
        platform: Platform,
        provider: Provider,
        context_factory: Callable[[str], EnvironmentContext] = default_context,
        function_env: Optional[Dict[str, str]] = None,
        observer: Optional[Observer] = None,
        attempts: int = 1,
        prompt_template: Optional[str] = None,
    ):
        if attempts < 1:
            raise ValueError("attempts must be at least 1")
        self.platform = platform
        self.provider = provider
        self.context_factory = context_factory
        self.function_env = dict(function_env or {})
        self.observer = observer
        self.attempts = attempts
        self.prompt_template = prompt_template

    def _notify(self, observer: Optional[Observer], event: dict) -> None:
        target = observer or self.observer
        if target is None:
            return
        try:
            target(event)
        except Exception:
            pass  # a broken observer must not fail the build

    def build_and_deploy(
        self, description: UserDescription, observer: Optional[Observer] = None
    ) -> BuildOutcome:
        outcome = None
        for attempt in range(1, self.attempts + 1):
            outcome = self._run_once(description, attempt, observer)
            if outcome.ok:
                break
        self._notify(observer, {"event": "result", **outcome.summary()})
        return outcome

    def _run_once(
        self, description: UserDescription, attempt: int, observer: Optional[Observer]
    ) -> BuildOutcome:
        description.validate()
        context = self.context_factory(description.requested_runtime)

        def stage_event(stage: str, state: str, **extra) -> None:
            self._notify(
                observer, {"event": "stage", "stage": stage, "state": state,
                           "attempt": attempt, **extra}
            )

        t_start = time.perf_counter()

        stage_event(Stage.LLM.value, "running")
        prompt = construct_prompt(description, context, template_text=self.prompt_template)
        response = self.provider.complete(prompt)
        llm_duration = response.generation_duration
        if not response.ok:
            err = response.provider_error
            category = (
                FailureCategory.TIMEOUT if err.kind == "Timeout" else FailureCategory.OTHER
            )
            stage_event(Stage.LLM.value, "failed", duration=llm_duration, detail=err.detail)
            return BuildOutcome(
                description=description,
                response=response,
                stage_error="LlmError",
                failure=FailureKind(category, f"{err.kind}: {err.detail}"),
                breakdown=LatencyBreakdown(
                    llm_generation=llm_duration, total=time.perf_counter() - t_start
                ),
            )
        stage_event(Stage.LLM.value, "ok", duration=llm_duration)

        stage_event(Stage.PREPARATION.value, "running")
        t_prep = time.perf_counter()
        artifact = extract_function(response.text, description.requested_runtime)
        if not artifact.ok:
            prep_duration = time.perf_counter() - t_prep
            stage_event(
                Stage.PREPARATION.value, "failed",
                duration=prep_duration, detail=artifact.failure.evidence,
            )
            return BuildOutcome(
                description=description,
                response=response,
                artifact=artifact,
                stage_error="ExtractionFailure",
                failure=artifact.failure,
                breakdown=LatencyBreakdown(
                    llm_generation=llm_duration,
                    function_preparation=prep_duration,
                    total=time.perf_counter() - t_start,
                ),
            )
        taken = {
            r.descriptor.name
            for r in self.platform.list()
            if r.status in (DeployStatus.PENDING, DeployStatus.PREPARING, DeployStatus.RUNNING)
        }
        descriptor = package(artifact, description, taken_names=taken, env=self.function_env)
        prep_duration = time.perf_counter() - t_prep
        stage_event(Stage.PREPARATION.value, "ok", duration=prep_duration)

        stage_event(Stage.DEPLOYMENT.value, "running")
        t_deploy = time.perf_counter()
        record = None
        failure = None
        stage_error = None
        try:
            record = self.platform.deploy(descriptor)
        except PlatformError as err:
            failure = classify_failure(Stage.DEPLOYMENT, f"{type(err).__name__}: {err}")
            stage_error = "DeployFailure"
        deploy_duration = time.perf_counter() - t_deploy
        if record is not None and record.status is not DeployStatus.RUNNING:
            failure = classify_failure(Stage.DEPLOYMENT, record.failure_detail or "deploy failed")
            stage_error = "DeployFailure"
        if failure is not None:
            stage_event(
                Stage.DEPLOYMENT.value, "failed",
                duration=deploy_duration, detail=failure.evidence[:400],
            )
        else:
            stage_event(Stage.DEPLOYMENT.value, "ok", duration=deploy_duration)

        return BuildOutcome(
            description=description,
            response=response,
            artifact=artifact,
            descriptor=descriptor,
            record=record,
            stage_error=stage_error,
            failure=failure,
            breakdown=LatencyBreakdown(
                llm_generation=llm_duration,
                function_preparation=prep_duration,
                faas_deployment=deploy_duration,
                total=time.perf_counter() - t_start,
            ),
        )
