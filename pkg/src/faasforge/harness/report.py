"""Aggregation over trial outcomes and report file emission."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean, pstdev
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Union

from ..bridge.types import FailureCategory
from ..codemetrics import AggregateMetrics, aggregate
from .dataset import COMPLEXITY_TIERS, TaskSpec

if TYPE_CHECKING:
    from .runner import EvalOutcome

STAGES = ("llm_generation", "function_preparation", "faas_deployment", "total")


@dataclass(frozen=True)
class TierStats:
    count: int
    syntactic_rate: float
    semantic_rate: float
    latency: Optional[Dict[str, Dict[str, float]]] = None

    def __post_init__(self):
        if not (0.0 <= self.semantic_rate <= self.syntactic_rate <= 1.0):
            raise ValueError(
                f"rates out of order: semantic {self.semantic_rate} "
                f"syntactic {self.syntactic_rate}"
            )

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "syntactic_rate": self.syntactic_rate,
            "semantic_rate": self.semantic_rate,
            "latency": self.latency,
        }


def _tier_stats(outcomes: Sequence["EvalOutcome"],
                include_latency: bool) -> TierStats:
    count = len(outcomes)
    latency = None
    if include_latency:
        latency = {}
        for stage in STAGES:
            values = [
                getattr(o.breakdown, stage)
                for o in outcomes
                if getattr(o.breakdown, stage) is not None
            ]
            if values:
                latency[stage] = {"mean": fmean(values), "std": pstdev(values)}
    return TierStats(
        count=count,
        syntactic_rate=sum(o.syntactic_pass for o in outcomes) / count,
        semantic_rate=sum(o.semantic_pass for o in outcomes) / count,
        latency=latency,
    )


@dataclass(frozen=True)
class AggregateReport:
    """Per-tier and overall pass rates, timing, failures, code metrics."""

    tiers: Dict[str, TierStats]
    overall: TierStats
    failures: Dict[str, int]
    metrics: Optional[AggregateMetrics]

    @classmethod
    def from_outcomes(cls, outcomes: Sequence["EvalOutcome"],
                      tasks: Sequence[TaskSpec],
                      include_latency: bool = True) -> "AggregateReport":
        if not outcomes:
            raise ValueError("no outcomes to aggregate")
        tier_of = {task.task_id: task.complexity for task in tasks}
        grouped: Dict[str, List["EvalOutcome"]] = {
            tier: [] for tier in COMPLEXITY_TIERS
        }
        for outcome in outcomes:
            grouped[tier_of[outcome.task_id]].append(outcome)

        failures = {category.value: 0 for category in FailureCategory}
        for outcome in outcomes:
            if outcome.failure is not None:
                failures[outcome.failure.category.value] += 1

        reports = [o.metrics for o in outcomes if o.metrics is not None]
        return cls(
            tiers={
                tier: _tier_stats(members, include_latency)
                for tier, members in grouped.items()
                if members
            },
            overall=_tier_stats(outcomes, include_latency),
            failures=failures,
            metrics=aggregate(reports) if reports else None,
        )

    def to_dict(self) -> dict:
        return {
            "trials": self.overall.count,
            "overall": self.overall.to_dict(),
            "tiers": {tier: stats.to_dict() for tier, stats in self.tiers.items()},
            "failures": self.failures,
            "metrics": self.metrics.to_dict() if self.metrics else None,
        }


_CSV_COLUMNS = ["tier", "count", "syntactic_rate", "semantic_rate"] + [
    f"{stage}_{part}" for stage in STAGES for part in ("mean", "std")
]


def _csv_row(tier: str, stats: TierStats) -> List[str]:
    row = [tier, str(stats.count), str(stats.syntactic_rate),
           str(stats.semantic_rate)]
    for stage in STAGES:
        cell = (stats.latency or {}).get(stage)
        row.append(str(cell["mean"]) if cell else "")
        row.append(str(cell["std"]) if cell else "")
    return row


def emit_report(report: AggregateReport, out_dir: Union[str, Path],
                formats: Sequence[str] = ("json", "csv")) -> List[Path]:
    """Write the report under out_dir. Field order is fixed, so emitting the
    same report twice yields byte-identical files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for fmt in formats:
        if fmt == "json":
            path = out_dir / "report.json"
            path.write_text(
                json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
            written.append(path)
        elif fmt == "csv":
            rates = out_dir / "report.csv"
            with rates.open("w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle)
                writer.writerow(_CSV_COLUMNS)
                for tier, stats in report.tiers.items():
                    writer.writerow(_csv_row(tier, stats))
                writer.writerow(_csv_row("overall", report.overall))
            written.append(rates)

            kinds = out_dir / "failures.csv"
            with kinds.open("w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle)
                writer.writerow(["kind", "count"])
                for kind, count in report.failures.items():
                    writer.writerow([kind, str(count)])
            written.append(kinds)
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    return written
