"""Token counting, complexity formulas, and aggregation rules.

The five tally fixtures were counted by hand, token by token; the expected
Halstead numbers are rebuilt in-test from those frozen counts so any drift
in the lexer's classification shows up as a hard failure.
"""

import math
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faasforge.codemetrics import (
    LexError,
    aggregate,
    analyze,
    maintainability_index,
    tokenize,
)

P1 = "def fn(data):\n    return 'ok'\n"

P2 = "def fn(i):\n  if i:\n    return 1\n  return 0\n"

P3 = (
    "def fn(data):\n"
    "    total = 0\n"
    "    for item in data.split(','):\n"
    "        if item and item != 'x':\n"
    "            total += int(item)\n"
    "    return str(total)\n"
)

J1 = (
    "function fn(data) {\n"
    "  const parts = data.split(',');\n"
    "  return parts.length > 2 ? 'big' : 'small';\n"
    "}\n"
)

J2 = (
    "async function fn(data) {\n"
    "  if (data && data.length) {\n"
    "    return 'yes';\n"
    "  }\n"
    "  return 'no';\n"
    "}\n"
)

# (code, runtime, n1, n2, N1, N2, cc, sloc) frozen by hand tally
TALLIES = [
    (P1, "python3", 5, 3, 5, 3, 1, 2),
    (P2, "python3", 6, 4, 8, 5, 2, 4),
    (P3, "python3", 13, 10, 21, 16, 4, 6),
    (J1, "nodejs", 13, 9, 17, 11, 2, 4),
    (J2, "nodejs", 11, 5, 17, 7, 3, 6),
]


@pytest.mark.parametrize("code,runtime,n1,n2,N1,N2,cc,sloc", TALLIES)
def test_hand_tallied_counts(code, runtime, n1, n2, N1, N2, cc, sloc):
    report = analyze(code, runtime)
    h = report.halstead
    assert (h.n1, h.n2, h.N1, h.N2) == (n1, n2, N1, N2)
    assert report.cc == cc
    assert report.sloc == sloc


@pytest.mark.parametrize("code,runtime,n1,n2,N1,N2,cc,sloc", TALLIES)
def test_hand_tallied_effort(code, runtime, n1, n2, N1, N2, cc, sloc):
    report = analyze(code, runtime)
    volume = (N1 + N2) * math.log2(n1 + n2)
    effort = (n1 / 2) * (N2 / n2) * volume
    assert report.halstead.effort == pytest.approx(effort, rel=1e-9)
    assert report.halstead.volume == pytest.approx(volume, rel=1e-9)


def test_straight_line_code_has_cc_one():
    assert analyze("def fn(d):\n    x = 1\n    return x\n", "python3").cc == 1


def test_single_if_gives_cc_two():
    assert analyze(P2, "python3").cc == 2


def test_mi_within_bounds_on_tallies():
    for code, runtime, *_ in TALLIES:
        report = analyze(code, runtime)
        assert 0.0 <= report.mi <= 100.0


def test_mi_formula_on_known_values():
    # V=24, cc=1, sloc=2 (the P1 tally)
    expected = 100 * (171 - 5.2 * math.log(24.0) - 0.23 * 1 - 16.2 * math.log(2)) / 171
    assert analyze(P1, "python3").mi == pytest.approx(expected, rel=1e-9)
    assert maintainability_index(0.0, 1, 0) == pytest.approx(
        100 * (171 - 0.23) / 171
    )  # volume and sloc floored at 1


# --- lexer behavior ---


def test_comments_and_strings_stripped():
    code = "x = 'a # not a comment'  # real comment\n"
    tokens = tokenize(code, "python3")
    assert [t.text for t in tokens] == ["x", "=", "'a # not a comment'"]


def test_python_triple_quoted_string_is_one_operand():
    code = 'def fn(d):\n    """doc\n    lines"""\n    return d\n'
    tokens = tokenize(code, "python3")
    strings = [t for t in tokens if t.text.startswith('"""')]
    assert len(strings) == 1
    assert strings[0].kind == "operand"


def test_js_comments_and_template_literals():
    code = "// lead\nconst x = `a ${b} c`; /* block\ncomment */ let y = 2;\n"
    tokens = tokenize(code, "nodejs")
    texts = [t.text for t in tokens]
    assert "`a ${b} c`" in texts
    assert not any("comment" in t for t in texts)


def test_js_regex_literal_vs_division():
    regex_tokens = tokenize("const re = /ab+c/g;", "nodejs")
    assert any(t.text == "/ab+c/g" and t.kind == "operand" for t in regex_tokens)
    div_tokens = tokenize("const x = a / b;", "nodejs")
    assert any(t.text == "/" and t.kind == "operator" for t in div_tokens)


def test_keywords_are_operators_literal_words_are_operands():
    tokens = {t.text: t.kind for t in tokenize("if x:\n    y = True\n", "python3")}
    assert tokens["if"] == "operator"
    assert tokens["x"] == "operand"
    assert tokens["True"] == "operand"


def test_unlexable_input_raises():
    with pytest.raises(LexError):
        analyze("def fn(d):\n    return d ¶\n", "python3")


def test_empty_input_raises():
    with pytest.raises(LexError):
        analyze("   \n\n", "python3")


def test_unknown_runtime_rejected():
    with pytest.raises(ValueError):
        analyze("x = 1", "ruby")


def test_degenerate_operands_reported_not_raised():
    report = analyze("pass\n", "python3")
    assert report.degenerate
    assert report.cc == 1
    assert report.sloc == 1
    assert report.halstead is None
    assert report.mi is None


# --- invariants ---

PY_SNIPPETS = [P1, P2, P3, "x = 1\n", "def fn(d):\n    return d.upper()\n"]
JS_SNIPPETS = [J1, J2, "let x = 1;\n"]


@pytest.mark.parametrize("code", PY_SNIPPETS)
def test_appending_if_bumps_cc_by_one_python(code):
    before = analyze(code, "python3").cc
    after = analyze(code + "\nif extra_flag:\n    pass\n", "python3").cc
    assert after == before + 1


@pytest.mark.parametrize("code", JS_SNIPPETS)
def test_appending_if_bumps_cc_by_one_js(code):
    before = analyze(code, "nodejs").cc
    after = analyze(code + "\nif (extraFlag) { }\n", "nodejs").cc
    assert after == before + 1


@pytest.mark.parametrize("code,runtime", [(P2, "python3"), (J2, "nodejs")])
def test_comments_and_blanks_leave_cc_unchanged(code, runtime):
    comment = "# note\n" if runtime == "python3" else "// note\n"
    noisy = comment + code.replace("\n", "\n\n", 1) + "\n\n" + comment
    assert analyze(noisy, runtime).cc == analyze(code, runtime).cc


@pytest.mark.parametrize("code,runtime", [(P2, "python3"), (P3, "python3"), (J1, "nodejs")])
def test_duplicating_module_doubles_totals(code, runtime):
    single = analyze(code, runtime)
    double = analyze(code + "\n" + code, runtime)
    assert double.halstead.N1 == 2 * single.halstead.N1
    assert double.halstead.N2 == 2 * single.halstead.N2
    assert abs(double.sloc - 2 * single.sloc) <= 1
    assert double.halstead.effort >= single.halstead.effort


_PY_STATEMENTS = st.sampled_from(
    [
        "x = {n}",
        "y = x + {n}",
        "if x > {n}:\n    x = x - 1",
        "for i in range({n}):\n    y = y + i",
        "names = ['a', 'b']",
        "z = str(x) + 'label'",
        "while x < {n}:\n    x = x + 2",
    ]
)


@settings(max_examples=100, deadline=None)
@given(st.lists(_PY_STATEMENTS, min_size=1, max_size=8), st.integers(0, 99))
def test_mi_bounds_on_generated_modules(statements, n):
    code = "\n".join(s.format(n=n) for s in statements) + "\n"
    report = analyze(code, "python3")
    assert 0.0 <= report.mi <= 100.0


# --- aggregation ---


def test_aggregate_single_report():
    report = analyze(P2, "python3")
    agg = aggregate([report])
    assert agg.cc_mean == report.cc
    assert agg.cc_std == 0.0
    assert agg.mi_mean == pytest.approx(report.mi)
    assert agg.mi_std == 0.0
    assert agg.effort_median == pytest.approx(report.halstead.effort)


def test_aggregate_effort_uses_median():
    reports = [
        SimpleNamespace(cc=1, mi=50.0, halstead=SimpleNamespace(effort=e))
        for e in (10.0, 20.0, 1000.0)
    ]
    assert aggregate(reports).effort_median == 20.0


def test_aggregate_uses_population_std():
    reports = [
        SimpleNamespace(cc=c, mi=None, halstead=None) for c in (1, 2, 3)
    ]
    agg = aggregate(reports)
    assert agg.cc_mean == 2.0
    assert agg.cc_std == pytest.approx(math.sqrt(2.0 / 3.0))
    assert agg.mi_mean is None
    assert agg.effort_median is None


def test_aggregate_shape_matches_report_columns():
    doc = aggregate([analyze(P3, "python3")]).to_dict()
    assert set(doc) == {"count", "cc", "mi", "effort"}
    assert set(doc["cc"]) == {"mean", "std"}
    assert set(doc["mi"]) == {"mean", "std"}
    assert set(doc["effort"]) == {"median"}


def test_aggregate_empty_rejected():
    with pytest.raises(ValueError):
        aggregate([])
