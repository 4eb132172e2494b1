"""Application-area lexicon built from paper titles.

Functional keywords ("for", "via", "using", ...) delimit candidate phrases in
titles; bootstrapping grows the keyword set from phrases already harvested;
three k-gram ranking schemes turn candidates into a ranked area list.

Each keyword records on which side of it the area phrase sits: ``after``
("toolkit for statistical machine translation") or ``before``
("sentence alignment via semisupervised learning").
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import lingo

AFTER, BEFORE = "after", "before"
MAX_K = 5

DEFAULT_THRESHOLD_COUNTS = {2: 8, 3: 5, 4: 4, 5: 4}

# title punctuation that bounds a candidate span
_TITLE_BREAK_RE = re.compile(r"[:;,?!()\[\]\"]|\.(?:\s|$)|\s[-–—]+\s")


class ConfigurationError(ValueError):
    pass


@dataclass
class FunctionalKeywordSet:
    """Ordered keywords with the area side and how each was obtained."""

    sides: dict[str, str] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.sides:
            raise ConfigurationError("functional keyword set must not be empty")
        for kw, side in self.sides.items():
            if side not in (AFTER, BEFORE):
                raise ConfigurationError(f"keyword {kw!r}: side must be 'after' or 'before'")
        for kw in self.sides:
            self.provenance.setdefault(kw, "seed")

    @classmethod
    def seed(cls, sides: Mapping[str, str]) -> "FunctionalKeywordSet":
        return cls(dict(sides), {k: "seed" for k in sides})

    @classmethod
    def from_file(cls, path: str | Path | None = None) -> "FunctionalKeywordSet":
        """``keyword<TAB>after|before`` lines; the packaged defaults when no path."""
        if path is None:
            text = lingo._data_text("seed_keywords.txt")
        else:
            text = Path(path).read_text(encoding="utf-8")
        sides = {}
        for line in lingo._read_lines(text):
            kw, _, side = line.partition("\t")
            sides[kw.strip().lower()] = (side.strip() or AFTER).lower()
        return cls.seed(sides)

    @property
    def keywords(self) -> list[str]:
        return list(self.sides)

    def __contains__(self, kw):
        return kw in self.sides

    def __len__(self):
        return len(self.sides)

    def add(self, kw: str, side: str) -> None:
        if kw not in self.sides:
            self.sides[kw] = side
            self.provenance[kw] = "bootstrapped"

    def copy(self) -> "FunctionalKeywordSet":
        return FunctionalKeywordSet(dict(self.sides), dict(self.provenance))


def default_keywords() -> FunctionalKeywordSet:
    return FunctionalKeywordSet.from_file()


def title_segments(title: str) -> list[list[str]]:
    """Token lists of the punctuation-free pieces of a title."""
    title = lingo.normalize_ocr(title).replace("\n", " ")
    return [toks for toks in (lingo.words(p) for p in _TITLE_BREAK_RE.split(title)) if toks]


def _keyword_hits(tokens: Sequence[str], keywords: FunctionalKeywordSet):
    """(start, end, keyword) of keyword occurrences, longest keyword first."""
    multi = sorted(keywords.keywords, key=lambda k: -len(k.split()))
    hits = []
    i = 0
    while i < len(tokens):
        for kw in multi:
            kt = kw.split()
            if list(tokens[i : i + len(kt)]) == kt:
                hits.append((i, i + len(kt), kw))
                i += len(kt)
                break
        else:
            i += 1
    return hits


def _trim(tokens: Sequence[str], stopwords) -> list[str]:
    lo, hi = 0, len(tokens)
    while lo < hi and tokens[lo] in stopwords:
        lo += 1
    while hi > lo and tokens[hi - 1] in stopwords:
        hi -= 1
    return list(tokens[lo:hi])


def extract_candidate_phrases(
    title: str | Sequence[str],
    keywords: FunctionalKeywordSet,
    res: lingo.TextResources | None = None,
) -> list[str]:
    """Candidate area phrases delimited by functional keywords.

    An ``after`` keyword yields the span up to the next keyword or the end of
    the title piece; a ``before`` keyword yields the span back to the
    previous keyword or the start. Spans are trimmed of edge stopwords and
    each distinct span is emitted once.
    """
    stop = (res or lingo.default_resources()).stopwords
    segments = [list(title)] if not isinstance(title, str) else title_segments(title)
    out = []
    for tokens in segments:
        hits = _keyword_hits(tokens, keywords)
        spans = []
        for idx, (s, e, kw) in enumerate(hits):
            if keywords.sides[kw] == AFTER:
                stop_at = hits[idx + 1][0] if idx + 1 < len(hits) else len(tokens)
                span = (e, stop_at)
            else:
                start_at = hits[idx - 1][1] if idx > 0 else 0
                span = (start_at, s)
            if span[0] < span[1] and span not in spans:
                spans.append(span)
        for s, e in spans:
            phrase = _trim(tokens[s:e], stop)
            if phrase:
                out.append(" ".join(phrase))
    return out


def harvest(titles: Iterable[str], keywords: FunctionalKeywordSet, res=None) -> list[str]:
    out = []
    for t in titles:
        out.extend(extract_candidate_phrases(t, keywords, res))
    return out


def enumerate_kgrams(phrase_tokens: Sequence[str], max_k: int, stopwords=frozenset()) -> Iterable[str]:
    for k in range(1, min(max_k, len(phrase_tokens)) + 1):
        for i in range(len(phrase_tokens) - k + 1):
            gram = phrase_tokens[i : i + k]
            if gram[0] in stopwords or gram[-1] in stopwords:
                continue
            yield " ".join(gram)


def count_kgrams(candidates: Iterable[str], max_k: int = MAX_K, stopwords=frozenset()) -> Counter:
    counts: Counter[str] = Counter()
    for c in candidates:
        counts.update(enumerate_kgrams(c.split(), max_k, stopwords))
    return counts


def _closed_class(path=None) -> frozenset[str]:
    return lingo.load_word_list(path, "closed_class.txt")


def bootstrap_keywords(
    titles: Sequence[str],
    seed: FunctionalKeywordSet,
    rounds: int = 3,
    min_support: int = 5,
    min_kw_support: int = 3,
    closed_class: Iterable[str] | None = None,
    res: lingo.TextResources | None = None,
) -> FunctionalKeywordSet:
    """Grow ``seed`` by alternating phrase harvesting and delimiter discovery.

    A token adjacent to a frequent harvested k-gram (count >= min_support)
    in at least ``min_kw_support`` distinct titles, and listed as a closed
    class word, becomes a keyword. A token that follows the k-gram marks the
    area as sitting ``before`` it, one that precedes marks ``after``.
    """
    if rounds < 1:
        raise ConfigurationError("rounds must be >= 1")
    res = res or lingo.default_resources()
    closed = frozenset(closed_class) if closed_class is not None else _closed_class()
    keywords = seed.copy()
    segmented = [title_segments(t) for t in titles]
    for _ in range(rounds):
        candidates = []
        for segs in segmented:
            for toks in segs:
                candidates.extend(extract_candidate_phrases(toks, keywords, res))
        counts = count_kgrams(candidates, MAX_K, res.stopwords)
        frequent = {g for g, c in counts.items() if c >= min_support}
        if not frequent:
            break
        by_len = defaultdict(set)
        for g in frequent:
            by_len[len(g.split())].add(g)
        support: dict[str, set[int]] = defaultdict(set)
        side_votes: dict[str, Counter] = defaultdict(Counter)
        for ti, segs in enumerate(segmented):
            for toks in segs:
                for k, grams in by_len.items():
                    for i in range(len(toks) - k + 1):
                        if " ".join(toks[i : i + k]) not in grams:
                            continue
                        if i > 0:
                            w = toks[i - 1]
                            support[w].add(ti)
                            side_votes[w][AFTER] += 1
                        if i + k < len(toks):
                            w = toks[i + k]
                            support[w].add(ti)
                            side_votes[w][BEFORE] += 1
        learned = sorted(
            w for w, tis in support.items()
            if len(tis) >= min_kw_support and w in closed and w not in keywords
        )
        for w in learned:
            votes = side_votes[w]
            keywords.add(w, BEFORE if votes[BEFORE] > votes[AFTER] else AFTER)
        if not learned:
            break
    return keywords


@dataclass(frozen=True)
class KGramStat:
    phrase: str
    k: int
    count: int
    score: float

    def to_json(self, rank: int | None = None) -> dict:
        d = {"phrase": self.phrase, "k": self.k, "count": self.count, "score": self.score}
        if rank is not None:
            d["rank"] = rank
        return d


def rank_key(stat: KGramStat):
    return (-stat.score, stat.phrase)


def score_scheme1(
    candidates: Iterable[str],
    max_k: int = MAX_K,
    per_k: bool = False,
    stopwords: Iterable[str] = (),
) -> list[KGramStat]:
    """Every k-gram (k <= max_k) inside the candidates, scored by its share
    of all k-gram occurrences; ``per_k`` normalizes within each order.

    K-grams starting or ending with one of ``stopwords`` are not counted.
    """
    counts = count_kgrams(candidates, max_k, frozenset(stopwords))
    if not counts:
        return []
    if per_k:
        totals: Counter[int] = Counter()
        for g, c in counts.items():
            totals[len(g.split())] += c
        stats = [KGramStat(g, len(g.split()), c, c / totals[len(g.split())]) for g, c in counts.items()]
    else:
        total = sum(counts.values())
        stats = [KGramStat(g, len(g.split()), c, c / total) for g, c in counts.items()]
    return sorted(stats, key=rank_key)


def score_scheme2(stats: Sequence[KGramStat]) -> list[KGramStat]:
    """Drop both border (k-1)-grams of any k-gram that outscores them both.

    Borders absent from ``stats`` count as score zero.
    """
    score = {s.phrase: s.score for s in stats}
    removed = set()
    for s in stats:
        if s.k < 2:
            continue
        toks = s.phrase.split()
        left, right = " ".join(toks[:-1]), " ".join(toks[1:])
        if s.score > score.get(left, 0.0) and s.score > score.get(right, 0.0):
            removed.add(left)
            removed.add(right)
    return sorted((s for s in stats if s.phrase not in removed), key=rank_key)


@dataclass
class AreaLexicon:
    areas: list[KGramStat]
    scheme: int
    thresholds: dict[int, float] = field(default_factory=dict)

    def phrases(self) -> list[str]:
        return [a.phrase for a in self.areas]

    def top(self, n: int) -> list[KGramStat]:
        return self.areas[:n]

    def to_records(self) -> list[dict]:
        return [a.to_json(rank) for rank, a in enumerate(self.areas, start=1)]

    @classmethod
    def from_records(cls, records: Iterable[Mapping], scheme: int = 3) -> "AreaLexicon":
        areas = [KGramStat(r["phrase"], int(r["k"]), int(r["count"]), float(r["score"])) for r in records]
        return cls(sorted(areas, key=rank_key), scheme)


def thresholds_from_counts(counts: Mapping[int, int], total: int) -> dict[int, float]:
    """Convert minimum occurrence counts per k into k-gram score thresholds."""
    if total <= 0:
        raise ConfigurationError("total k-gram count must be positive")
    return {k: c / total for k, c in counts.items()}


def score_scheme3(stats: Sequence[KGramStat], thresholds: Mapping[int, float]) -> AreaLexicon:
    """Keep 2- to 5-grams scoring at least ``thresholds[k]``."""
    missing = [k for k in range(2, MAX_K + 1) if k not in thresholds]
    if missing:
        raise ConfigurationError(f"missing scheme-3 threshold for k = {missing}")
    kept = [s for s in stats if 2 <= s.k <= MAX_K and s.score >= thresholds[s.k]]
    return AreaLexicon(sorted(kept, key=rank_key), 3, {k: thresholds[k] for k in range(2, MAX_K + 1)})


def build_lexicon(
    titles: Sequence[str],
    keywords: FunctionalKeywordSet,
    scheme: int = 3,
    threshold_counts: Mapping[int, int] | None = None,
    thresholds: Mapping[int, float] | None = None,
    per_k: bool = False,
    res: lingo.TextResources | None = None,
) -> AreaLexicon:
    """Harvest candidates from ``titles`` and rank them with one scheme.

    Scheme-3 thresholds come from ``thresholds`` (scores) or, failing that,
    ``threshold_counts`` (occurrence counts, divided by the k-gram total).
    """
    res = res or lingo.default_resources()
    candidates = harvest(titles, keywords, res)
    s1 = score_scheme1(candidates, per_k=per_k, stopwords=res.stopwords)
    if scheme == 1:
        return AreaLexicon(s1, 1)
    s2 = score_scheme2(s1)
    if scheme == 2:
        return AreaLexicon(s2, 2)
    if scheme != 3:
        raise ConfigurationError(f"unknown scheme {scheme}")
    if thresholds is None:
        counts = dict(DEFAULT_THRESHOLD_COUNTS)
        counts.update(threshold_counts or {})
        if per_k:
            totals: Counter[int] = Counter()
            for s in s1:
                totals[s.k] += s.count
            thresholds = {k: counts[k] / totals[k] if totals[k] else 0.0 for k in counts}
        else:
            thresholds = thresholds_from_counts(counts, sum(s.count for s in s1) or 1)
    return score_scheme3(s2, thresholds)


def calibration_table(stats: Sequence[KGramStat], n: int = 30) -> dict[int, list[KGramStat]]:
    """Top ``n`` k-grams for each order k = 2..5, for choosing thresholds by eye."""
    table = {k: [] for k in range(2, MAX_K + 1)}
    for s in sorted(stats, key=rank_key):
        if s.k in table and len(table[s.k]) < n:
            table[s.k].append(s)
    return table
