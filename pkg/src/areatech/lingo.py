"""Deterministic text utilities shared by every pipeline stage.

Normalization, tokenization, Porter stemming, stopwords, k-gram enumeration,
sentence splitting and a lexicon-driven noun-phrase chunker.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .porter import stem

__all__ = [
    "Token",
    "NounPhrase",
    "TextResources",
    "default_resources",
    "normalize_ocr",
    "tokenize",
    "words",
    "stem",
    "kgrams",
    "split_sentences",
    "extract_noun_phrases",
    "contains_phrase",
]

MAX_PHRASE_LEN = 5
# shorter sub-runs would let "treebank" outrank "penn treebank"
MIN_SUBPHRASE_LEN = 2

_TOKEN_RE = re.compile(r"\w+(?:[-+]+\w+)*\+*")
_HSPACE_RE = re.compile(r"[^\S\n]+")
_NEWLINE_RUN_RE = re.compile(r" ?\n(?: ?\n)+ ?")
_EDGE_SPACE_RE = re.compile(r" ?\n ?")
_HYPHEN_BREAK_RE = re.compile(r"(?<=\w)-\n(?=\w)")
# punctuation that ends a noun-phrase run
_CLAUSE_BREAK_RE = re.compile(r"[,;:()\[\]{}\"!?]|\.(?:\s|$)|\s[-–—]+\s")

NOMINAL_TAGS = frozenset({"NOUN", "ADJ"})


@dataclass(frozen=True)
class Token:
    surface: str
    position: int


@dataclass(frozen=True)
class NounPhrase:
    text: str
    length: int


def _read_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def _data_text(name: str) -> str:
    return resources.files("areatech").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def load_word_list(path: str | Path | None, default_name: str) -> frozenset[str]:
    text = Path(path).read_text(encoding="utf-8") if path else _data_text(default_name)
    return frozenset(w.lower() for w in _read_lines(text))


def load_pos_lexicon(path: str | Path | None = None) -> dict[str, str]:
    text = Path(path).read_text(encoding="utf-8") if path else _data_text("pos_lexicon.tsv")
    lexicon = {}
    for line in _read_lines(text):
        word, _, tag = line.partition("\t")
        if not tag:
            raise ValueError(f"pos lexicon line without tag: {line!r}")
        lexicon[word.strip().lower()] = tag.strip().upper()
    return lexicon


@dataclass(frozen=True)
class TextResources:
    """Stopword list and POS lexicon used by the chunker and bag-of-words code."""

    stopwords: frozenset[str]
    pos: dict[str, str] = field(hash=False)

    @classmethod
    def load(cls, stopwords: str | Path | None = None, pos_lexicon: str | Path | None = None):
        return cls(load_word_list(stopwords, "stopwords.txt"), load_pos_lexicon(pos_lexicon))

    def tag(self, token: str) -> str:
        if token in self.stopwords:
            return "STOP"
        tag = self.pos.get(token)
        if tag is not None:
            return tag
        if token.isdigit():
            return "NUM"
        if len(token) == 1:
            return "SYM"
        if token.endswith(("ing", "ed")):
            return "VERB"
        if token.endswith("s") and "VERB" in (self.pos.get(token[:-1]), self.pos.get(token[:-2])):
            return "VERB"
        return "NOUN"


_DEFAULT: TextResources | None = None


def default_resources() -> TextResources:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = TextResources.load()
    return _DEFAULT


def normalize_ocr(raw: str) -> str:
    """Lowercase, strip control characters, collapse whitespace, join
    words hyphenated across a line break.

    Line breaks survive (as single ``\\n``) because section headings are
    detected line by line; blank-line runs collapse to one paragraph break.
    """
    text = raw.replace("\r\n", "\n").replace("\r", "\n")
    text = "".join(
        ch
        for ch in text
        if ch in "\n\t" or not unicodedata.category(ch).startswith("C")
    )
    text = text.lower()
    text = _HSPACE_RE.sub(" ", text)
    text = _NEWLINE_RUN_RE.sub("\n\n", text)
    text = _EDGE_SPACE_RE.sub("\n", text)
    text = text.strip()
    # a hyphen at a paragraph break is not a line-wrap artefact
    text = _HYPHEN_BREAK_RE.sub("", text)
    return text


def tokenize(text: str) -> list[Token]:
    return [Token(m.group(), i) for i, m in enumerate(_TOKEN_RE.finditer(text))]


def words(text: str) -> list[str]:
    """Token surfaces of ``text``."""
    return _TOKEN_RE.findall(text)


def kgrams(tokens: Sequence[str], k: int) -> list[str]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return [" ".join(tokens[i : i + k]) for i in range(len(tokens) - k + 1)]


def contains_phrase(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    """True when ``needle`` occurs as a contiguous token run of ``haystack``."""
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    needle = list(needle)
    return any(list(haystack[i : i + n]) == needle for i in range(len(haystack) - n + 1))


_ABBREVIATIONS = frozenset(
    {"al", "e.g", "i.e", "fig", "figs", "cf", "vs", "eq", "eqs", "sec", "no",
     "et", "etc", "resp", "approx", "dr", "mr", "ms", "prof", "tab"}
)
_SENT_END_RE = re.compile(r"[.?!]+(?=\s)|\n\n")
_HEADING_LINE_RE = re.compile(r"^(?:\d+(?:\.\d+)*\.?\s+\S.*|abstract|introduction|references)$")


def _is_abbreviation(text: str, dot: int) -> bool:
    start = dot
    while start > 0 and (text[start - 1].isalnum() or text[start - 1] == "."):
        start -= 1
    word = text[start:dot].rstrip(".")
    return word in _ABBREVIATIONS or (len(word) == 1 and word.isalpha())


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Half-open character spans of the sentences in normalized ``text``.

    A sentence ends at ``.``, ``?`` or ``!`` followed by whitespace, unless
    the period closes an abbreviation ("et al.", "e.g.", "fig.") or a single
    letter initial. Paragraph breaks and short heading lines also end a
    sentence, so headings never leak into the following sentence.
    """
    cuts = set()
    for m in _SENT_END_RE.finditer(text):
        if m.group() == "\n\n":
            cuts.add(m.start())
            continue
        if m.group() == "." and _is_abbreviation(text, m.start()):
            continue
        cuts.add(m.end())
    offset = 0
    for line in text.split("\n"):
        end = offset + len(line)
        stripped = line.strip()
        if stripped and len(stripped.split()) <= 8 and _HEADING_LINE_RE.match(stripped):
            cuts.add(offset)
            cuts.add(end)
        offset = end + 1
    spans = []
    start = 0
    for cut in sorted(cuts) + [len(text)]:
        if cut <= start:
            continue
        lo, hi = start, cut
        while lo < hi and text[lo].isspace():
            lo += 1
        while hi > lo and text[hi - 1].isspace():
            hi -= 1
        if lo < hi:
            spans.append((lo, hi))
        start = cut
    return spans


def _runs(tags: Sequence[str]) -> Iterable[tuple[int, int]]:
    i, n = 0, len(tags)
    while i < n:
        if tags[i] not in NOMINAL_TAGS:
            i += 1
            continue
        j = i
        while j < n and tags[j] in NOMINAL_TAGS:
            j += 1
        end = j
        while end > i and tags[end - 1] != "NOUN":
            end -= 1
        if end > i:
            yield i, end
        i = j


def extract_noun_phrases(sentence: str, res: TextResources | None = None) -> list[NounPhrase]:
    """Noun phrases of one normalized sentence, as (ADJ|NOUN)*NOUN runs.

    Each maximal run of up to five tokens is emitted, together with every
    contiguous sub-run of two or more tokens whose first and last tokens are
    nouns. Each distinct token span is emitted once, in order of appearance.
    """
    res = res or default_resources()
    phrases = []
    for piece in _CLAUSE_BREAK_RE.split(sentence):
        toks = words(piece)
        if not toks:
            continue
        tags = [res.tag(t) for t in toks]
        for start, end in _runs(tags):
            spans = set()
            if end - start <= MAX_PHRASE_LEN:
                spans.add((start, end))
            for i in range(start, end):
                if tags[i] != "NOUN":
                    continue
                for j in range(i + MIN_SUBPHRASE_LEN, min(end, i + MAX_PHRASE_LEN) + 1):
                    if tags[j - 1] == "NOUN":
                        spans.add((i, j))
            for i, j in sorted(spans):
                phrases.append(NounPhrase(" ".join(toks[i:j]), j - i))
    return phrases
