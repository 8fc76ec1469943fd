"""Lexical code-quality metrics for generated guest code."""

from .analyze import (
    AggregateMetrics,
    HalsteadMetrics,
    MetricReport,
    aggregate,
    analyze,
    maintainability_index,
)
from .lexer import LexError, Token, TokenTable, branch_count, load_table, tokenize

__all__ = [
    "AggregateMetrics",
    "HalsteadMetrics",
    "LexError",
    "MetricReport",
    "Token",
    "TokenTable",
    "aggregate",
    "analyze",
    "branch_count",
    "load_table",
    "maintainability_index",
    "tokenize",
]
