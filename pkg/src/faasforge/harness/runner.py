"""Trial execution: one build per task, semantic suite, cleanup, repeats."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from ..bridge import Bridge, BuildOutcome, FailureKind, Stage, classify_failure
from ..bridge.types import LatencyBreakdown, UserDescription
from ..codemetrics import LexError, MetricReport, analyze
from ..homesim import DeviceState, FunctionUnreachable, run_test, serve
from ..llm import Provider
from ..platform import GuestError, InvokeTimeout, NotFound, Platform, PlatformError
from .dataset import TaskSpec
from .report import AggregateReport


@dataclass(frozen=True)
class EvalOutcome:
    """Result of one trial. A failure kind is present exactly when the trial
    did not pass syntactically, so histogram totals always reconcile."""

    task_id: str
    trial_index: int
    syntactic_pass: bool
    semantic_pass: bool
    breakdown: LatencyBreakdown
    failure: Optional[FailureKind] = None
    metrics: Optional[MetricReport] = None

    def __post_init__(self):
        if self.semantic_pass and not self.syntactic_pass:
            raise ValueError("a semantic pass requires a syntactic pass")
        if self.syntactic_pass and self.failure is not None:
            raise ValueError("passing trials carry no failure kind")
        if not self.syntactic_pass and self.failure is None:
            raise ValueError("failing trials must carry a failure kind")

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "trial_index": self.trial_index,
            "syntactic_pass": self.syntactic_pass,
            "semantic_pass": self.semantic_pass,
            "failure": (
                {"category": self.failure.category.value,
                 "evidence": self.failure.evidence}
                if self.failure else None
            ),
            "breakdown": self.breakdown.to_dict(),
            "metrics": self.metrics.to_dict() if self.metrics else None,
        }


@dataclass(frozen=True)
class RepeatSummary:
    """Stability digest for n repetitions of the same description.

    pattern holds one letter per repetition: P = semantic pass,
    p = syntactic-only pass, f = fail.
    """

    task_id: str
    repetitions: int
    syntactic_passes: int
    semantic_passes: int
    pattern: str

    @classmethod
    def from_outcomes(cls, task_id: str,
                      outcomes: Sequence[EvalOutcome]) -> "RepeatSummary":
        pattern = "".join(
            "P" if o.semantic_pass else "p" if o.syntactic_pass else "f"
            for o in outcomes
        )
        return cls(
            task_id=task_id,
            repetitions=len(outcomes),
            syntactic_passes=sum(o.syntactic_pass for o in outcomes),
            semantic_passes=sum(o.semantic_pass for o in outcomes),
            pattern=pattern,
        )

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "repetitions": self.repetitions,
            "syntactic_passes": self.syntactic_passes,
            "semantic_passes": self.semantic_passes,
            "pattern": self.pattern,
        }


class EvalRunner:
    """Runs tasks against a platform and provider it holds exclusively.

    Each trial gets its own simulated home served on a loopback port; the
    deployed function reaches it through HOME_API_URL. A run lock keeps
    dataset and repeat runs from interleaving on the shared platform.
    """

    def __init__(self, platform: Platform, provider: Provider, *,
                 collect_metrics: bool = True):
        self._platform = platform
        self._provider = provider
        self._collect_metrics = collect_metrics
        self._run_lock = threading.Lock()

    # --- single trial ---

    def run_trial(self, task: TaskSpec, trial_index: int = 0) -> EvalOutcome:
        state = DeviceState()
        service = serve(state, "127.0.0.1", 0)
        try:
            bridge = Bridge(
                self._platform,
                self._provider,
                function_env={"HOME_API_URL": service.url},
            )
            built = bridge.build_and_deploy(
                UserDescription(
                    text=task.description_text,
                    requested_runtime=task.runtime,
                    task_id=task.task_id,
                )
            )
            metrics = self._metrics_for(built, task.runtime)
            if not built.ok:
                self._cleanup(built)
                return EvalOutcome(
                    task_id=task.task_id,
                    trial_index=trial_index,
                    syntactic_pass=False,
                    semantic_pass=False,
                    failure=built.failure,
                    breakdown=built.breakdown,
                    metrics=metrics,
                )
            name = built.record.descriptor.name
            try:
                syntactic, failure, all_hold = True, None, True
                for case in task.semantic_suite:
                    try:
                        result = run_test(case, self._invoker(name), state=state)
                    except (GuestError, InvokeTimeout, FunctionUnreachable) as exc:
                        syntactic = False
                        failure = classify_failure(
                            Stage.INVOCATION, str(exc) or type(exc).__name__
                        )
                        break
                    if not result.passed:
                        all_hold = False
                return EvalOutcome(
                    task_id=task.task_id,
                    trial_index=trial_index,
                    syntactic_pass=syntactic,
                    semantic_pass=syntactic and all_hold,
                    failure=failure,
                    breakdown=built.breakdown,
                    metrics=metrics,
                )
            finally:
                self._remove_quietly(name)
        finally:
            service.stop()

    # --- batch operations ---

    def run_dataset(
        self, tasks: Sequence[TaskSpec], trials_per_task: int = 1,
        parallel: int = 0,
    ) -> Tuple[List[EvalOutcome], AggregateReport]:
        """Run every task sequentially (the timing-faithful default).

        parallel > 0 fans trials out over a thread pool; stage-latency
        aggregation is dropped from the report because concurrent trials
        contend for the machine and distort the timings.
        """
        with self._run_lock:
            jobs = [
                (task, index)
                for task in tasks
                for index in range(trials_per_task)
            ]
            if parallel > 0:
                with ThreadPoolExecutor(max_workers=parallel) as pool:
                    outcomes = list(
                        pool.map(lambda job: self.run_trial(*job), jobs)
                    )
            else:
                outcomes = [self.run_trial(task, index) for task, index in jobs]
        report = AggregateReport.from_outcomes(
            outcomes, tasks, include_latency=parallel == 0
        )
        return outcomes, report

    def run_repeats(self, task: TaskSpec,
                    n: int = 10) -> Tuple[List[EvalOutcome], RepeatSummary]:
        """Build and test the same description n times in sequence."""
        with self._run_lock:
            outcomes = [self.run_trial(task, index) for index in range(n)]
        return outcomes, RepeatSummary.from_outcomes(task.task_id, outcomes)

    # --- helpers ---

    def _invoker(self, name: str) -> Callable[[bytes], bytes]:
        def invoke(payload: bytes) -> bytes:
            try:
                return self._platform.invoke(name, payload).body
            except NotFound as exc:
                raise FunctionUnreachable(str(exc)) from exc

        return invoke

    def _metrics_for(self, built: BuildOutcome,
                     runtime: str) -> Optional[MetricReport]:
        if not self._collect_metrics or built.artifact is None:
            return None
        code = built.artifact.selected_code
        if not code:
            return None
        try:
            return analyze(code, runtime)
        except (LexError, ValueError):
            return None

    def _cleanup(self, built: BuildOutcome) -> None:
        # failed deploys leave a Failed record behind; drop it
        if built.record is not None:
            self._remove_quietly(built.record.descriptor.name)

    def _remove_quietly(self, name: str) -> None:
        try:
            self._platform.remove(name)
        except PlatformError:
            pass
