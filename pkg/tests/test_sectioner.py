import pytest
from hypothesis import given, strategies as st

from areatech import lingo
from areatech.sectioner import (
    SectionSpan,
    contains,
    find_abstract_span,
    find_method_span,
    find_method_spans,
)
from conftest import FIXTURE


def _cut(text, span):
    return text[span.start : span.end]


def test_abstract_examples():
    text = "abstract\nwe present x.\n1 introduction\nmore"
    assert _cut(text, find_abstract_span(text)) == "we present x."
    assert find_abstract_span("title\n1 introduction\nbody") is None
    numbered = "title\n1 abstract\nshort summary here\n2 introduction\nbody"
    assert _cut(numbered, find_abstract_span(numbered)) == "short summary here"


def test_abstract_needs_both_anchors():
    assert find_abstract_span("abstract\nsome text with no intro") is None


def test_abstract_ignores_prose_mention_of_introduction():
    text = "abstract\nthis introduction of a new idea is long and goes on for many words\n1 introduction\nx"
    span = find_abstract_span(text)
    assert _cut(text, span).startswith("this introduction")


def test_method_examples():
    text = "1 introduction\nhi\n3 methodology\nwe do things.\n4 experiments\nresults"
    span = find_method_span(text)
    assert span.heading_text == "3 methodology"
    assert _cut(text, span) == "3 methodology\nwe do things."
    text = "1 introduction\nhi\n2 our approach\nstuff"
    assert find_method_span(text).heading_text == "2 our approach"
    assert find_method_span("1 introduction\nx\n2 experiments\ny\n3 results\nz") is None


def test_method_subsections_stay_inside():
    text = "2 approach\na\n2.1 features\nb\n2.2 training\nc\n3 results\nd"
    assert _cut(text, find_method_span(text)).endswith("2.2 training\nc")


def test_method_stops_at_back_matter():
    text = "3 method\nwe cite (smith, 2004).\nreferences\nsmith. 2004. a paper."
    assert _cut(text, find_method_span(text)) == "3 method\nwe cite (smith, 2004)."


def test_multiple_method_sections():
    text = "2 approach\na\n3 model\nb\n4 a second method\nc\n5 results\nd"
    assert [s.heading_text for s in find_method_spans(text)] == ["2 approach", "4 a second method"]


def test_prose_is_not_a_heading():
    text = "1 introduction\n2 we describe our method in a long sentence that runs on past eight tokens\nx"
    assert find_method_span(text) is None


def test_custom_keywords():
    text = "1 introduction\nx\n2 system architecture\ny"
    assert find_method_span(text) is None
    assert find_method_span(text, ["architecture"]).heading_text == "2 system architecture"


def test_contains_half_open():
    span = SectionSpan("method", 10, 20, "h")
    assert contains(span, 15)
    assert not contains(span, 20)
    assert not contains(span, 9)
    assert contains(span, 10)


def test_span_invariant():
    with pytest.raises(ValueError):
        SectionSpan("abstract", 5, 5, "")


def test_fixture_abstract_precedes_method():
    seen = 0
    for path in sorted((FIXTURE / "texts").glob("*.txt")):
        text = lingo.normalize_ocr(path.read_text())
        a = find_abstract_span(text)
        for m in find_method_spans(text):
            seen += 1
            assert a is None or a.end <= m.start
            assert 0 <= m.start < m.end <= len(text)
    assert seen > 5


lines = st.lists(
    st.sampled_from(["abstract", "1 introduction", "2 approach", "2.1 details", "3 results",
                     "references", "we use a method here.", "text", "", "4 our methods"]),
    max_size=12,
)


@given(lines)
def test_spans_total_and_ordered(ls):
    text = "\n".join(ls)
    a = find_abstract_span(text)
    ms = find_method_spans(text)
    assert ms == find_method_spans(text)
    for m in ms:
        assert 0 <= m.start < m.end <= len(text)
        assert a is None or a.end <= m.start
    for x, y in zip(ms, ms[1:]):
        assert x.end <= y.start
