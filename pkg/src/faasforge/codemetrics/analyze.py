"""Module-level complexity metrics over the token stream."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import List, Optional

from .lexer import LexError, Token, branch_count, tokenize


@dataclass(frozen=True)
class HalsteadMetrics:
    n1: int  # distinct operators
    n2: int  # distinct operands
    N1: int  # total operators
    N2: int  # total operands

    @property
    def vocabulary(self) -> int:
        return self.n1 + self.n2

    @property
    def length(self) -> int:
        return self.N1 + self.N2

    @property
    def volume(self) -> float:
        if self.vocabulary == 0:
            return 0.0
        return self.length * math.log2(self.vocabulary)

    @property
    def difficulty(self) -> float:
        # undefined for n2 == 0; callers gate on DegenerateOperands
        return (self.n1 / 2.0) * (self.N2 / self.n2)

    @property
    def effort(self) -> float:
        return self.difficulty * self.volume

    def to_dict(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "N1": self.N1,
            "N2": self.N2,
            "vocabulary": self.vocabulary,
            "length": self.length,
            "volume": self.volume,
            "difficulty": self.difficulty,
            "effort": self.effort,
        }


@dataclass(frozen=True)
class MetricReport:
    cc: int
    sloc: int
    halstead: Optional[HalsteadMetrics]
    mi: Optional[float]
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "cc": self.cc,
            "sloc": self.sloc,
            "halstead": self.halstead.to_dict() if self.halstead else None,
            "mi": self.mi,
            "degenerate": self.degenerate,
        }


def maintainability_index(volume: float, cc: int, sloc: int) -> float:
    """Clamped 0-100 variant; volume and sloc are floored at 1 inside the logs."""
    raw = (
        171.0
        - 5.2 * math.log(max(volume, 1.0))
        - 0.23 * cc
        - 16.2 * math.log(max(sloc, 1))
    )
    return max(0.0, 100.0 * raw / 171.0)


def analyze(code: str, runtime: str) -> MetricReport:
    """Metric report for one module of guest code.

    Raises LexError when the code cannot be tokenized (including empty
    input). A token stream with no operands yields a degenerate report:
    cc and sloc only, Halstead and MI unavailable.
    """
    tokens = tokenize(code, runtime)
    if not tokens:
        raise LexError("no tokens found", 1, 1)

    cc = 1 + branch_count(tokens, runtime)
    sloc = len({t.line for t in tokens})

    operators = [t.text for t in tokens if t.kind == "operator"]
    operands = [t.text for t in tokens if t.kind == "operand"]
    halstead = HalsteadMetrics(
        n1=len(set(operators)),
        n2=len(set(operands)),
        N1=len(operators),
        N2=len(operands),
    )
    if halstead.n2 == 0:
        return MetricReport(cc=cc, sloc=sloc, halstead=None, mi=None, degenerate=True)

    mi = maintainability_index(halstead.volume, cc, sloc)
    return MetricReport(cc=cc, sloc=sloc, halstead=halstead, mi=mi)


@dataclass(frozen=True)
class AggregateMetrics:
    count: int
    cc_mean: float
    cc_std: float
    mi_mean: Optional[float]
    mi_std: Optional[float]
    effort_median: Optional[float]

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "cc": {"mean": self.cc_mean, "std": self.cc_std},
            "mi": (
                {"mean": self.mi_mean, "std": self.mi_std}
                if self.mi_mean is not None
                else None
            ),
            "effort": (
                {"median": self.effort_median} if self.effort_median is not None else None
            ),
        }


def aggregate(reports: List[MetricReport]) -> AggregateMetrics:
    """Mean and population std for cc and MI, median for effort.

    Effort is aggregated by median because its distribution is heavily
    skewed; degenerate reports contribute to cc only.
    """
    if not reports:
        raise ValueError("nothing to aggregate")
    ccs = [float(r.cc) for r in reports]
    mis = [r.mi for r in reports if r.mi is not None]
    efforts = [r.halstead.effort for r in reports if r.halstead is not None]
    return AggregateMetrics(
        count=len(reports),
        cc_mean=statistics.fmean(ccs),
        cc_std=statistics.pstdev(ccs),
        mi_mean=statistics.fmean(mis) if mis else None,
        mi_std=statistics.pstdev(mis) if mis else None,
        effort_median=statistics.median(efforts) if efforts else None,
    )
