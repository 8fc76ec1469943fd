"""Per-runtime lexical scanning for the complexity metrics.

Comments vanish, every string/number literal becomes one operand token,
identifiers are operands unless the runtime's keyword table says otherwise,
and punctuation comes from the operator table (longest match first). This is
deliberately not a full parser: both guest languages get the same treatment
so reports are comparable across runtimes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from ..resources import data_text


class LexError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "operator" or "operand"
    text: str
    line: int


@dataclass(frozen=True)
class TokenTable:
    keywords: frozenset
    operators: Tuple[str, ...]
    branch_keywords: frozenset
    branch_operators: frozenset


@lru_cache(maxsize=None)
def load_table(runtime: str) -> TokenTable:
    try:
        doc = json.loads(data_text(f"metrics_{runtime}.json"))
    except FileNotFoundError:
        raise ValueError(f"no token table for runtime {runtime!r}")
    return TokenTable(
        keywords=frozenset(doc["keywords"]),
        operators=tuple(sorted(doc["operators"], key=len, reverse=True)),
        branch_keywords=frozenset(doc["branch_keywords"]),
        branch_operators=frozenset(doc["branch_operators"]),
    )


def _operator_pattern(table: TokenTable) -> str:
    return "|".join(re.escape(op) for op in table.operators)


@lru_cache(maxsize=None)
def _python_master(runtime: str) -> re.Pattern:
    table = load_table(runtime)
    return re.compile(
        r"""
        (?P<ws>[ \t\f]+)
      | (?P<cont>\\\r?\n)
      | (?P<nl>\r?\n)
      | (?P<comment>\#[^\n]*)
      | (?P<string>
            [rRbBuUfF]{0,2}
            (?: '''(?:\\.|[^\\])*?'''
              | \"\"\"(?:\\.|[^\\])*?\"\"\"
              | '(?:\\.|[^'\\\n])*'
              | \"(?:\\.|[^\"\\\n])*\"
            )
        )
      | (?P<number>
            0[xXoObB][0-9a-fA-F_]+
          | (?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[jJ]?
        )
      | (?P<name>[A-Za-z_]\w*)
      | (?P<op>%s)
        """ % _operator_pattern(table),
        re.VERBOSE | re.DOTALL,
    )


@lru_cache(maxsize=None)
def _js_master(runtime: str) -> re.Pattern:
    table = load_table(runtime)
    return re.compile(
        r"""
        (?P<ws>[ \t\f]+)
      | (?P<nl>\r?\n)
      | (?P<comment>//[^\n]*|/\*.*?\*/)
      | (?P<string>
            `(?:\\.|[^`\\])*`
          | '(?:\\.|[^'\\\n])*'
          | \"(?:\\.|[^\"\\\n])*\"
        )
      | (?P<number>
            0[xXoObB][0-9a-fA-F]+
          | (?:\d[\d_]*\.?\d*|\.\d+)(?:[eE][+-]?\d+)?n?
        )
      | (?P<name>[A-Za-z_$][\w$]*)
      | (?P<op>%s)
        """ % _operator_pattern(table),
        re.VERBOSE | re.DOTALL,
    )


_JS_REGEX_LITERAL = re.compile(
    r"/(?:\\.|\[(?:\\.|[^\]\\\n])*\]|[^/\\\n])+/[a-z]*"
)

# after these a slash starts a division, not a regex literal
_NO_REGEX_AFTER = {")", "]", "}", "++", "--"}


def tokenize(code: str, runtime: str) -> List[Token]:
    """Token stream for metric counting. Raises LexError on input the
    runtime's rules cannot account for."""
    table = load_table(runtime)
    if runtime == "python3":
        master = _python_master(runtime)
        is_js = False
    elif runtime == "nodejs":
        master = _js_master(runtime)
        is_js = True
    else:
        raise ValueError(f"no lexer for runtime {runtime!r}")

    tokens: List[Token] = []
    line = 1
    pos = 0
    length = len(code)
    while pos < length:
        if is_js and code[pos] == "/" and not code.startswith(("//", "/*"), pos):
            prev = tokens[-1] if tokens else None
            allow_regex = prev is None or (
                prev.kind == "operator" and prev.text not in _NO_REGEX_AFTER
            )
            if allow_regex:
                m = _JS_REGEX_LITERAL.match(code, pos)
                if m:
                    tokens.append(Token("operand", m.group(0), line))
                    pos = m.end()
                    continue
        m = master.match(code, pos)
        if m is None:
            column = pos - code.rfind("\n", 0, pos)
            raise LexError(f"cannot lex {code[pos:pos + 10]!r}", line, column)
        text = m.group(0)
        group = m.lastgroup
        if group == "name":
            kind = "operator" if text in table.keywords else "operand"
            tokens.append(Token(kind, text, line))
        elif group in ("string", "number"):
            tokens.append(Token("operand", text, line))
        elif group == "op":
            tokens.append(Token("operator", text, line))
        # ws / nl / cont / comment produce nothing
        line += text.count("\n")
        pos = m.end()
    return tokens


def branch_count(tokens: List[Token], runtime: str) -> int:
    table = load_table(runtime)
    count = 0
    for token in tokens:
        if token.kind != "operator":
            continue
        if token.text in table.branch_keywords or token.text in table.branch_operators:
            count += 1
    return count
