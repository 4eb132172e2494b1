"""In-text citation mining: mentions, resolution against the citation graph,
sentence-level citation contexts and per-paper citation statistics."""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import lingo, sectioner
from .corpus import Corpus
from .parallel import parallel_map

log = logging.getLogger(__name__)

_NAME = r"[^\W\d_][\w'\-]*"
_AUTH = rf"(?P<surname>{_NAME})(?:\s+et\.?\s+al\b\.?|\s+(?:and|&)\s+{_NAME})?"
_AUTH_NC = rf"{_NAME}(?:\s+et\.?\s+al\b\.?|\s+(?:and|&)\s+{_NAME})?"
_YEAR = r"(?<!\d)(?P<year>(?:19|20)?\d\d)(?P<suffix>[a-d])?(?![\w])"
_YEAR_NC = r"(?<!\d)(?:19|20)?\d\d[a-d]?(?![\w])"
_PREFIX = r"(?:(?:e\.g\.|i\.e\.|see|cf\.)\s*,?\s*)?"

DEFAULT_PATTERNS = {
    # one "surname [et al. | and surname], year" citation
    "item": rf"{_AUTH}\s*,?\s*{_YEAR}",
    # a ;-separated group of items; at least one bracket must be present
    "group": rf"(?P<open>\()?\s*{_PREFIX}(?P<items>{_AUTH_NC}\s*,?\s*{_YEAR_NC}"
    rf"(?:\s*;\s*{_PREFIX}{_AUTH_NC}\s*,?\s*{_YEAR_NC})*)\s*(?P<close>\))?",
    # "surname et al. (year)"
    "narrative": rf"{_AUTH}\s*\(\s*{_YEAR}\s*\)",
}

_NOT_SURNAMES = frozenset({"et", "al", "and", "section", "table", "figure", "fig", "eq", "chapter", "page", "pp", "vol"})


@dataclass(frozen=True)
class CitationMention:
    citing_id: str
    offset: int
    surface: str
    surname: str
    year: int
    year_text: str
    in_method_section: bool = False
    group_start: int = -1
    group_end: int = -1

    @property
    def end(self) -> int:
        return self.offset + len(self.surface)

    def year_matches(self, year: int) -> bool:
        if len(self.year_text) == 2:
            return year % 100 == int(self.year_text)
        return year == self.year


@dataclass(frozen=True)
class CitationContext:
    citing_id: str
    cited_id: str
    sentence: str
    in_method_section: bool
    offset: int = 0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: Mapping) -> "CitationContext":
        return cls(d["citing_id"], d["cited_id"], d["sentence"], d["in_method_section"], d.get("offset", 0))


@dataclass
class CitationPatterns:
    item: re.Pattern
    group: re.Pattern
    narrative: re.Pattern

    @classmethod
    def compile(cls, patterns: Mapping[str, str] | None = None) -> "CitationPatterns":
        merged = dict(DEFAULT_PATTERNS)
        merged.update(patterns or {})
        return cls(**{k: re.compile(merged[k]) for k in ("item", "group", "narrative")})

    @classmethod
    def from_file(cls, path: str | Path) -> "CitationPatterns":
        """Read ``name<TAB>regex`` lines overriding the item/group/narrative patterns."""
        patterns = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            name, _, rx = line.partition("\t")
            if name.strip() not in DEFAULT_PATTERNS:
                raise ValueError(f"unknown citation pattern name {name!r}")
            patterns[name.strip()] = rx.strip()
        return cls.compile(patterns)


_DEFAULT_PATTERNS: CitationPatterns | None = None


def default_patterns() -> CitationPatterns:
    global _DEFAULT_PATTERNS
    if _DEFAULT_PATTERNS is None:
        _DEFAULT_PATTERNS = CitationPatterns.compile()
    return _DEFAULT_PATTERNS


def expand_year(text: str) -> int:
    y = int(text)
    if len(text) == 2:
        return 2000 + y if y < 50 else 1900 + y
    return y


def _mention(citing_id, m: re.Match, base: int, gs: int, ge: int, stop) -> CitationMention | None:
    surname = m.group("surname")
    if surname in stop or surname in _NOT_SURNAMES or len(surname) < 2:
        return None
    year_text = m.group("year")
    return CitationMention(
        citing_id=citing_id,
        offset=base + m.start(),
        surface=m.group(),
        surname=surname,
        year=expand_year(year_text),
        year_text=year_text,
        group_start=gs,
        group_end=ge,
    )


def find_citation_mentions(
    full_text: str,
    citing_id: str = "",
    patterns: CitationPatterns | None = None,
    res: lingo.TextResources | None = None,
) -> list[CitationMention]:
    """Parenthetical and narrative author-year citations, one mention per
    cited work; returned mentions never overlap and are sorted by offset."""
    patterns = patterns or default_patterns()
    stop = (res or lingo.default_resources()).stopwords
    found = []
    for g in patterns.group.finditer(full_text):
        if not (g.group("open") or g.group("close")):
            continue
        items = g.group("items")
        base = g.start("items")
        for m in patterns.item.finditer(items):
            mention = _mention(citing_id, m, base, g.start(), g.end(), stop)
            if mention:
                found.append(mention)
    for m in patterns.narrative.finditer(full_text):
        mention = _mention(citing_id, m, 0, m.start(), m.end(), stop)
        if mention:
            found.append(mention)
    found.sort(key=lambda x: (x.offset, -len(x.surface)))
    out = []
    last_end = -1
    for mention in found:
        if mention.offset >= last_end:
            out.append(mention)
            last_end = mention.end
    return out


def _surname_key(name: str) -> str:
    return lingo.normalize_ocr(name).strip()


@dataclass
class ResolutionStats:
    resolved: int = 0
    unresolved: int = 0
    ambiguous: int = 0

    def merge(self, other: "ResolutionStats"):
        self.resolved += other.resolved
        self.unresolved += other.unresolved
        self.ambiguous += other.ambiguous


def candidates(mention: CitationMention, corpus: Corpus) -> list[str]:
    out = []
    for cited in corpus.out_edges(mention.citing_id):
        paper = corpus.papers[cited]
        author = paper.first_author
        if author and _surname_key(author) == mention.surname and mention.year_matches(paper.year):
            out.append(cited)
    return out


def resolve_mention(mention: CitationMention, corpus: Corpus, stats: ResolutionStats | None = None) -> str | None:
    """The single out-edge of the citing paper matching surname and year."""
    found = candidates(mention, corpus)
    if len(found) == 1:
        if stats:
            stats.resolved += 1
        return found[0]
    if stats:
        if found:
            stats.ambiguous += 1
        else:
            stats.unresolved += 1
    if found:
        log.debug("%s: ambiguous citation %r -> %s", mention.citing_id, mention.surface, found)
    return None


def _strip_citations(text: str, lo: int, hi: int, mentions: Sequence[CitationMention]) -> str:
    pieces = []
    pos = lo
    for m in mentions:
        gs, ge = max(m.group_start, lo), min(m.group_end, hi)
        if ge <= pos or gs >= hi:
            continue
        if gs > pos:
            pieces.append(text[pos:gs])
        pos = max(pos, ge)
    pieces.append(text[pos:hi])
    return " ".join(" ".join(pieces).split())


@dataclass
class PaperCitations:
    contexts: list[CitationContext]
    stats: ResolutionStats


def paper_contexts(
    paper_id: str,
    corpus: Corpus,
    method_keywords: Sequence[str] = sectioner.DEFAULT_METHOD_KEYWORDS,
    patterns: CitationPatterns | None = None,
    res: lingo.TextResources | None = None,
) -> PaperCitations:
    paper = corpus.papers[paper_id]
    text = paper.full_text
    stats = ResolutionStats()
    if not text or not corpus.out_edges(paper_id):
        return PaperCitations([], stats)
    mentions = find_citation_mentions(text, paper_id, patterns, res)
    if not mentions:
        return PaperCitations([], stats)
    method_spans = sectioner.find_method_spans(text, method_keywords)
    sentences = lingo.split_sentences(text)
    contexts = []
    si = 0
    for mention in mentions:
        cited = resolve_mention(mention, corpus, stats)
        if cited is None:
            continue
        while si < len(sentences) and sentences[si][1] <= mention.offset:
            si += 1
        if si == len(sentences) or sentences[si][0] > mention.offset:
            continue
        lo, hi = sentences[si]
        sentence = _strip_citations(text, lo, hi, mentions)
        if not sentence:
            continue
        contexts.append(
            CitationContext(
                citing_id=paper_id,
                cited_id=cited,
                sentence=sentence,
                in_method_section=sectioner.contains_any(method_spans, mention.offset),
                offset=mention.offset,
            )
        )
    return PaperCitations(contexts, stats)


@dataclass
class ContextExtraction:
    contexts: list[CitationContext]
    stats: ResolutionStats = field(default_factory=ResolutionStats)


def _paper_contexts_job(args):
    return paper_contexts(*args)


def extract_contexts(
    corpus: Corpus,
    method_keywords: Sequence[str] = sectioner.DEFAULT_METHOD_KEYWORDS,
    patterns: CitationPatterns | None = None,
    res: lingo.TextResources | None = None,
    jobs: int = 1,
) -> ContextExtraction:
    """Citation contexts of every resolved mention in the corpus, grouped by
    citing paper in paper-id order and by offset within a paper."""
    ids = list(corpus.papers)
    results = parallel_map(
        _paper_contexts_job,
        [(pid, corpus, tuple(method_keywords), patterns, res) for pid in ids],
        jobs,
    )
    out = ContextExtraction([])
    for r in results:
        out.contexts.extend(r.contexts)
        out.stats.merge(r.stats)
    if out.stats.ambiguous or out.stats.unresolved:
        log.info(
            "citation mentions: %d resolved, %d unresolved, %d ambiguous",
            out.stats.resolved, out.stats.unresolved, out.stats.ambiguous,
        )
    return out


@dataclass(frozen=True)
class CitationStats:
    total_citations: int
    method_citations: int

    @property
    def method_fraction(self) -> float:
        return self.method_citations / self.total_citations if self.total_citations else 0.0


def citation_stats(paper_id: str, contexts: Iterable[CitationContext]) -> tuple[int, float]:
    total = method = 0
    for c in contexts:
        if c.cited_id == paper_id:
            total += 1
            method += c.in_method_section
    return total, (method / total if total else 0.0)


def all_citation_stats(contexts: Iterable[CitationContext]) -> dict[str, CitationStats]:
    total: Counter[str] = Counter()
    method: Counter[str] = Counter()
    for c in contexts:
        total[c.cited_id] += 1
        if c.in_method_section:
            method[c.cited_id] += 1
    return {pid: CitationStats(total[pid], method[pid]) for pid in sorted(total)}
