"""Figure rendering for report directories.

Uses the Agg backend only; nothing here opens a window. Reports stay fully
machine-readable without these files, the figures are a convenience layer
for humans skimming a run directory.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .report import STAGES, AggregateReport  # noqa: E402
from .runner import RepeatSummary  # noqa: E402

_STAGE_COLORS = {
    "llm_generation": "#4c72b0",
    "function_preparation": "#dd8452",
    "faas_deployment": "#55a868",
}


def render_figures(report: AggregateReport,
                   out_dir: Union[str, Path]) -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [_pass_rates(report, out_dir), _failure_kinds(report, out_dir)]
    if report.overall.latency is not None:
        written.append(_latency_stages(report, out_dir))
    return written


def _pass_rates(report: AggregateReport, out_dir: Path) -> Path:
    tiers = list(report.tiers)
    x = range(len(tiers))
    width = 0.38
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(
        [i - width / 2 for i in x],
        [report.tiers[t].syntactic_rate for t in tiers],
        width, label="syntactic", color="#4c72b0",
    )
    ax.bar(
        [i + width / 2 for i in x],
        [report.tiers[t].semantic_rate for t in tiers],
        width, label="semantic", color="#55a868",
    )
    ax.set_xticks(list(x), tiers)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("pass rate")
    ax.set_title("Pass rates by task complexity")
    ax.legend()
    path = out_dir / "pass_rates.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def _latency_stages(report: AggregateReport, out_dir: Path) -> Path:
    tiers = list(report.tiers)
    fig, ax = plt.subplots(figsize=(7, 4))
    bottoms = [0.0] * len(tiers)
    for stage in STAGES[:-1]:  # total is the sum, not a bar segment
        heights = [
            (report.tiers[t].latency or {}).get(stage, {}).get("mean", 0.0)
            for t in tiers
        ]
        ax.bar(tiers, heights, bottom=bottoms, label=stage,
               color=_STAGE_COLORS[stage])
        bottoms = [b + h for b, h in zip(bottoms, heights)]
    ax.set_ylabel("seconds")
    ax.set_title("Mean stage latency by task complexity")
    ax.legend()
    path = out_dir / "latency_stages.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def _failure_kinds(report: AggregateReport, out_dir: Path) -> Path:
    kinds = list(report.failures)
    counts = [report.failures[k] for k in kinds]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(kinds, counts, color="#c44e52")
    ax.set_ylabel("failed trials")
    ax.set_title("Failure kinds")
    if not any(counts):
        ax.text(0.5, 0.5, "no failures", transform=ax.transAxes,
                ha="center", va="center", fontsize=14, color="gray")
    plt.setp(ax.get_xticklabels(), rotation=20, ha="right")
    path = out_dir / "failure_kinds.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def render_repeat_pattern(summary: RepeatSummary,
                          out_dir: Union[str, Path]) -> Path:
    """One colored cell per repetition: pass, syntactic-only, or fail."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    colors = {"P": "#55a868", "p": "#dd8452", "f": "#c44e52"}
    fig, ax = plt.subplots(figsize=(max(4, summary.repetitions * 0.6), 1.6))
    for index, mark in enumerate(summary.pattern):
        ax.add_patch(plt.Rectangle((index, 0), 0.9, 0.9,
                                   color=colors.get(mark, "gray")))
        ax.text(index + 0.45, 0.45, mark, ha="center", va="center",
                color="white", fontsize=11)
    ax.set_xlim(-0.1, summary.repetitions)
    ax.set_ylim(-0.1, 1.0)
    ax.set_axis_off()
    ax.set_title(f"{summary.task_id}: {summary.semantic_passes}/"
                 f"{summary.repetitions} semantic")
    path = out_dir / "repeat_pattern.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path
