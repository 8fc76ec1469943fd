"""faasforge: natural-language descriptions to deployed functions, plus the machinery to measure how well that works."""

__version__ = "0.1.0"
