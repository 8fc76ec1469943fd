"""Batch evaluation: task corpora, trial execution, aggregation, reports."""

from .corpus import (
    DEFECT_HISTOGRAM,
    build_corpus,
    build_defect_corpus,
    build_repeat_bundle,
    write_corpus,
)
from .dataset import (
    COMPLEXITY_TIERS,
    SchemaError,
    TaskSpec,
    dump_dataset,
    load_dataset,
)
from .figures import render_figures, render_repeat_pattern
from .report import AggregateReport, TierStats, emit_report
from .runner import EvalOutcome, EvalRunner, RepeatSummary

__all__ = [
    "AggregateReport",
    "COMPLEXITY_TIERS",
    "DEFECT_HISTOGRAM",
    "EvalOutcome",
    "EvalRunner",
    "RepeatSummary",
    "SchemaError",
    "TaskSpec",
    "TierStats",
    "build_corpus",
    "build_defect_corpus",
    "build_repeat_bundle",
    "dump_dataset",
    "emit_report",
    "load_dataset",
    "render_figures",
    "render_repeat_pattern",
    "write_corpus",
]
