"""Abstract and method-section detection over normalized full text.

Headings are found line by line; a heading line carries at most eight tokens
so prose that merely mentions "our method" is never taken for one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_METHOD_KEYWORDS = ("method", "methods", "methodology", "approach", "approaches")
MAX_HEADING_TOKENS = 8

_ABSTRACT_RE = re.compile(r"^[ \t]*(?:\d+[.\s]*)?abstract\b[ \t.:]*", re.MULTILINE)
_INTRO_RE = re.compile(r"^[ \t]*(?:\d+[.\s]*)?introduction\b", re.MULTILINE)
_NUMBERED_RE = re.compile(r"^\s*(\d+(?:\.\d+)*)[.\s]")
_BACKMATTER_RE = re.compile(r"^\s*(?:references|bibliography|acknowledge?ments?)\s*$")


@dataclass(frozen=True)
class SectionSpan:
    kind: str
    start: int
    end: int
    heading_text: str

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span [{self.start}, {self.end})")


def contains(span: SectionSpan, offset: int) -> bool:
    return span.start <= offset < span.end


def contains_any(spans: Iterable[SectionSpan], offset: int) -> bool:
    return any(contains(s, offset) for s in spans)


def _lines(text: str):
    offset = 0
    for line in text.split("\n"):
        yield offset, line
        offset += len(line) + 1


def _is_heading(line: str) -> bool:
    return 0 < len(line.split()) <= MAX_HEADING_TOKENS


def find_abstract_span(full_text: str) -> SectionSpan | None:
    """Text between an "abstract" heading and the following "introduction"
    heading; both may carry a section number."""
    head = _ABSTRACT_RE.search(full_text)
    if head is None:
        return None
    for intro in _INTRO_RE.finditer(full_text, head.end()):
        line_end = full_text.find("\n", intro.start())
        line = full_text[intro.start() : line_end if line_end >= 0 else len(full_text)]
        if _is_heading(line):
            break
    else:
        return None
    start, end = head.end(), intro.start()
    while start < end and full_text[start].isspace():
        start += 1
    while end > start and full_text[end - 1].isspace():
        end -= 1
    if start >= end:
        return None
    return SectionSpan("abstract", start, end, head.group().strip())


def _method_heading_re(keywords: Sequence[str]):
    alternation = "|".join(re.escape(k) for k in sorted(keywords, key=len, reverse=True))
    return re.compile(rf"^\s*\d+(?:\.\d+)*[.\s]+.*\b(?:{alternation})\b")


def find_method_spans(
    full_text: str, keywords: Sequence[str] = DEFAULT_METHOD_KEYWORDS
) -> list[SectionSpan]:
    """Every numbered section whose heading names a method keyword.

    A section runs until the next numbered heading of the same or a higher
    level (so "3.1 features" stays inside "3 approach"), a back-matter
    heading such as "references", or the end of the text.
    """
    heading_re = _method_heading_re(keywords)
    abstract = find_abstract_span(full_text)
    floor = abstract.end if abstract else 0
    lines = [(off, line) for off, line in _lines(full_text)]
    spans = []
    i = 0
    while i < len(lines):
        off, line = lines[i]
        if off < floor or not _is_heading(line) or not heading_re.match(line):
            i += 1
            continue
        level = _NUMBERED_RE.match(line).group(1).count(".") + 1
        end = len(full_text)
        j = i + 1
        while j < len(lines):
            o2, l2 = lines[j]
            if _is_heading(l2):
                if _BACKMATTER_RE.match(l2):
                    end = o2
                    break
                m = _NUMBERED_RE.match(l2)
                if m and m.group(1).count(".") + 1 <= level:
                    end = o2
                    break
            j += 1
        while end > off and full_text[end - 1].isspace():
            end -= 1
        if end > off:
            spans.append(SectionSpan("method", off, end, line.strip()))
        i = j
    return spans


def find_method_span(
    full_text: str, keywords: Sequence[str] = DEFAULT_METHOD_KEYWORDS
) -> SectionSpan | None:
    spans = find_method_spans(full_text, keywords)
    return spans[0] if spans else None
