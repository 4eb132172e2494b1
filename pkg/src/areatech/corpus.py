"""Corpus ingestion: metadata TSV, one text file per paper, citation TSV.

On-disk layout of a corpus directory::

    metadata.tsv    id<TAB>year<TAB>venue<TAB>title<TAB>surname1;surname2;...
    texts/<id>.txt  UTF-8 plain text, one file per paper
    citations.tsv   citing_id<TAB>cited_id
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from . import lingo, sectioner

log = logging.getLogger(__name__)

MIN_YEAR, MAX_YEAR = 1900, 2100


class CorpusError(Exception):
    """Fatal problem with corpus input files."""


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int | None = None

    def __str__(self):
        where = f"line {self.line}: " if self.line is not None else ""
        return f"[{self.code}] {where}{self.message}"


@dataclass(frozen=True)
class PaperMeta:
    title: str
    year: int
    venue: str
    authors: tuple[str, ...]


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    title: str
    year: int
    venue: str
    authors: tuple[str, ...]
    full_text: str = ""
    abstract_span: tuple[int, int] | None = None
    has_text: bool = True

    def __post_init__(self):
        if not MIN_YEAR <= self.year <= MAX_YEAR:
            raise ValueError(f"{self.paper_id}: year {self.year} out of range")
        if self.abstract_span is not None:
            start, end = self.abstract_span
            if not 0 <= start < end <= len(self.full_text):
                raise ValueError(f"{self.paper_id}: abstract span {self.abstract_span} out of bounds")

    @property
    def title_norm(self) -> str:
        return lingo.normalize_ocr(self.title)

    @property
    def abstract(self) -> str:
        if self.abstract_span is None:
            return ""
        start, end = self.abstract_span
        return self.full_text[start:end]

    @property
    def first_author(self) -> str | None:
        return self.authors[0] if self.authors else None

    def to_json(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "title": self.title,
            "year": self.year,
            "venue": self.venue,
            "authors": list(self.authors),
            "full_text": self.full_text,
            "abstract_span": list(self.abstract_span) if self.abstract_span else None,
            "has_text": self.has_text,
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "PaperRecord":
        span = d.get("abstract_span")
        return cls(
            paper_id=d["paper_id"],
            title=d["title"],
            year=int(d["year"]),
            venue=d["venue"],
            authors=tuple(d["authors"]),
            full_text=d["full_text"],
            abstract_span=tuple(span) if span else None,
            has_text=d["has_text"],
        )


@dataclass(frozen=True, order=True)
class CitationEdge:
    from_id: str
    to_id: str


@dataclass
class Corpus:
    papers: dict[str, PaperRecord]
    edges: list[CitationEdge]
    venues: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        self.papers = {pid: self.papers[pid] for pid in sorted(self.papers)}
        self.edges = sorted(set(self.edges))
        for e in self.edges:
            if e.from_id not in self.papers or e.to_id not in self.papers:
                raise ValueError(f"dangling edge {e}")
        self.venues = frozenset(p.venue for p in self.papers.values())
        self._out = {}
        self._in = {}
        for e in self.edges:
            self._out.setdefault(e.from_id, []).append(e.to_id)
            self._in.setdefault(e.to_id, []).append(e.from_id)

    def __iter__(self):
        return iter(self.papers.values())

    def __len__(self):
        return len(self.papers)

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.papers == other.papers and self.edges == other.edges

    def out_edges(self, paper_id: str) -> list[str]:
        return self._out.get(paper_id, [])

    def in_edges(self, paper_id: str) -> list[str]:
        return self._in.get(paper_id, [])


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc


def load_metadata(path: str | Path) -> tuple[dict[str, PaperMeta], list[Diagnostic]]:
    """Parse ``metadata.tsv``; malformed rows become diagnostics.

    Raises CorpusError for an unreadable file or a duplicated paper id.
    """
    path = Path(path)
    text = _read(path)
    out: dict[str, PaperMeta] = {}
    first_row: dict[str, int] = {}
    diags = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            diags.append(Diagnostic("bad-row", f"expected 5 fields, got {len(fields)}", lineno))
            continue
        pid, year_s, venue, title, authors_s = (f.strip() for f in fields)
        if not pid:
            diags.append(Diagnostic("bad-row", "empty paper id", lineno))
            continue
        if pid in first_row:
            raise CorpusError(
                f"{path}: duplicate paper id {pid!r} on lines {first_row[pid]} and {lineno}"
            )
        first_row[pid] = lineno
        try:
            year = int(year_s)
        except ValueError:
            diags.append(Diagnostic("bad-year", f"{pid}: year {year_s!r} is not an integer", lineno))
            continue
        if not MIN_YEAR <= year <= MAX_YEAR:
            diags.append(Diagnostic("bad-year", f"{pid}: year {year} outside [{MIN_YEAR}, {MAX_YEAR}]", lineno))
            continue
        authors = tuple(a.strip() for a in authors_s.split(";") if a.strip())
        out[pid] = PaperMeta(title, year, venue, authors)
    for d in diags:
        log.warning("%s: %s", path.name, d)
    return out, diags


def load_fulltext(
    directory: str | Path, ids: Iterable[str]
) -> tuple[dict[str, str], list[str], list[Diagnostic]]:
    """Raw texts for ``ids`` read from ``<directory>/<id>.txt``.

    Returns (texts, missing ids, diagnostics). Raises CorpusError when no
    file at all is found.
    """
    directory = Path(directory)
    texts: dict[str, str] = {}
    missing = []
    diags = []
    for pid in sorted(ids):
        path = directory / f"{pid}.txt"
        if not path.is_file():
            missing.append(pid)
            diags.append(Diagnostic("missing-text", f"{pid}: no file {path.name}"))
            continue
        text = _read(path)
        if not text.strip():
            diags.append(Diagnostic("empty-text", f"{pid}: text file is empty"))
        texts[pid] = text
    if not texts:
        raise CorpusError(f"no full-text files found in {directory}")
    for d in diags:
        log.warning("%s", d)
    return texts, missing, diags


def load_citations(
    path: str | Path, known_ids: Iterable[str]
) -> tuple[list[CitationEdge], list[Diagnostic]]:
    path = Path(path)
    known = set(known_ids)
    text = _read(path)
    edges = []
    seen = set()
    diags = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != 2 or not all(fields):
            diags.append(Diagnostic("bad-row", "expected citing<TAB>cited", lineno))
            continue
        src, dst = fields
        if src == dst:
            diags.append(Diagnostic("self-edge", f"{src} cites itself", lineno))
            continue
        unknown = [x for x in (src, dst) if x not in known]
        if unknown:
            diags.append(Diagnostic("dangling", f"unknown paper id(s) {', '.join(unknown)}", lineno))
            continue
        edge = CitationEdge(src, dst)
        if edge in seen:
            diags.append(Diagnostic("duplicate-edge", f"{src} -> {dst} repeated", lineno))
            continue
        seen.add(edge)
        edges.append(edge)
    for d in diags:
        log.warning("%s: %s", path.name, d)
    return edges, diags


def build_corpus(
    metadata: Mapping[str, PaperMeta],
    fulltexts: Mapping[str, str],
    edges: Iterable[CitationEdge],
) -> Corpus:
    papers = {}
    for pid in sorted(metadata):
        meta = metadata[pid]
        has_text = pid in fulltexts
        text = lingo.normalize_ocr(fulltexts.get(pid, ""))
        if not has_text:
            log.warning("%s has metadata but no full text; title-only processing", pid)
        span = sectioner.find_abstract_span(text)
        papers[pid] = PaperRecord(
            paper_id=pid,
            title=meta.title,
            year=meta.year,
            venue=meta.venue,
            authors=meta.authors,
            full_text=text,
            abstract_span=(span.start, span.end) if span else None,
            has_text=has_text,
        )
    kept = [e for e in edges if e.from_id in papers and e.to_id in papers]
    return Corpus(papers, kept)


@dataclass
class IngestReport:
    corpus: Corpus
    missing_text: list[str]
    diagnostics: list[Diagnostic]


def load_corpus_dir(directory: str | Path) -> IngestReport:
    """Load ``metadata.tsv``, ``texts/`` and ``citations.tsv`` from ``directory``."""
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"corpus directory {directory} does not exist")
    meta, d1 = load_metadata(directory / "metadata.tsv")
    texts, missing, d2 = load_fulltext(directory / "texts", meta.keys())
    edges, d3 = load_citations(directory / "citations.tsv", meta.keys())
    return IngestReport(build_corpus(meta, texts, edges), missing, d1 + d2 + d3)


def corpus_records(corpus: Corpus):
    return [p.to_json() for p in corpus]


def edge_records(corpus: Corpus):
    return [{"from_id": e.from_id, "to_id": e.to_id} for e in corpus.edges]


def corpus_from_records(papers: Iterable[Mapping], edges: Iterable[Mapping]) -> Corpus:
    recs = [PaperRecord.from_json(p) for p in papers]
    return Corpus({p.paper_id: p for p in recs}, [CitationEdge(e["from_id"], e["to_id"]) for e in edges])
