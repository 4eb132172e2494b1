"""Method papers and the techniques they are cited for.

A method paper is cited at least ``k1`` times, at least a ``k2`` fraction of
them from method sections. Noun phrases of those method-section citation
contexts form a corpus-wide (global) count vector; each method paper's own
(local) counts, multiplied element-wise with the global ones, rank its
techniques.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import lingo
from .citegraph import CitationContext, CitationStats


@dataclass(frozen=True)
class MethodMinerConfig:
    k1: int = 15
    k2: float = 0.50
    top_k: int = 5

    def __post_init__(self):
        if self.k1 < 1:
            raise ValueError("k1 must be >= 1")
        if not 0.0 < self.k2 <= 1.0:
            raise ValueError("k2 must lie in (0, 1]")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


def load_stop_phrases(path: str | Path | None = None) -> frozenset[str]:
    return lingo.load_word_list(path, "stop_phrases.txt")


def identify_method_papers(
    stats: Mapping[str, CitationStats | tuple[int, float]], config: MethodMinerConfig
) -> set[str]:
    out = set()
    for pid, st in stats.items():
        total, frac = (st.total_citations, st.method_fraction) if isinstance(st, CitationStats) else st
        if total >= config.k1 and frac >= config.k2:
            out.add(pid)
    return out


def context_phrases(ctx: CitationContext, res: lingo.TextResources | None = None) -> list[str]:
    return [np.text for np in lingo.extract_noun_phrases(ctx.sentence, res)]


@dataclass
class GlobalTechniqueVector:
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.counts = {p: self.counts[p] for p in sorted(self.counts)}

    @property
    def entries(self) -> list[tuple[str, int]]:
        return list(self.counts.items())

    def __getitem__(self, phrase):
        return self.counts.get(phrase, 0)

    def __contains__(self, phrase):
        return phrase in self.counts

    def __len__(self):
        return len(self.counts)

    def ranked(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def to_records(self) -> list[dict]:
        return [{"phrase": p, "count": c} for p, c in self.counts.items()]

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "GlobalTechniqueVector":
        return cls({r["phrase"]: int(r["count"]) for r in records})


def _selected(contexts, method_papers, all_method_contexts):
    for c in contexts:
        if not c.in_method_section:
            continue
        if all_method_contexts or c.cited_id in method_papers:
            yield c


def build_global_vector(
    contexts: Iterable[CitationContext],
    method_papers: Iterable[str],
    stop_phrases: Iterable[str] = (),
    res: lingo.TextResources | None = None,
    all_method_contexts: bool = False,
) -> GlobalTechniqueVector:
    """Raw noun-phrase counts over method-section contexts citing method papers."""
    method_papers = set(method_papers)
    stop = set(stop_phrases)
    counts: Counter[str] = Counter()
    for c in _selected(contexts, method_papers, all_method_contexts):
        counts.update(p for p in context_phrases(c, res) if p not in stop)
    return GlobalTechniqueVector(dict(counts))


def build_local_vector(
    paper_id: str,
    contexts: Iterable[CitationContext],
    global_vector: GlobalTechniqueVector,
    res: lingo.TextResources | None = None,
) -> dict[str, int]:
    counts: Counter[str] = Counter()
    for c in contexts:
        if c.cited_id != paper_id or not c.in_method_section:
            continue
        counts.update(p for p in context_phrases(c, res) if p in global_vector)
    return dict(sorted(counts.items()))


def overlaps_area(phrase: str, area: str) -> bool:
    """Equal to, contained in, or containing ``area`` as a token run."""
    p, a = phrase.split(), area.split()
    return lingo.contains_phrase(a, p) or lingo.contains_phrase(p, a)


def rank_techniques(
    local: Mapping[str, int],
    global_vector: GlobalTechniqueVector | Mapping[str, float],
    area: str | None,
    top_k: int,
) -> list[tuple[str, float]]:
    """Top ``top_k`` phrases by local x global count, skipping any phrase that
    overlaps the paper's own area. Ties go to the higher local count, then
    to the longer phrase, then to the lexicographically smaller one."""
    g = global_vector.counts if isinstance(global_vector, GlobalTechniqueVector) else global_vector
    scored = []
    for phrase, n in local.items():
        if n <= 0 or phrase not in g:
            continue
        if area and overlaps_area(phrase, area):
            continue
        scored.append((n * g[phrase], n, len(phrase.split()), phrase))
    scored.sort(key=lambda t: (-t[0], -t[1], -t[2], t[3]))
    return [(phrase, score) for score, _, _, phrase in scored[:top_k]]


@dataclass
class MethodPaperProfile:
    paper_id: str
    total_citations: int
    method_fraction: float
    local_counts: dict[str, int]
    techniques: list[tuple[str, float]]

    @property
    def technique_names(self) -> list[str]:
        return [t for t, _ in self.techniques]

    def to_json(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "total_citations": self.total_citations,
            "method_fraction": self.method_fraction,
            "local_counts": self.local_counts,
            "techniques": [{"phrase": p, "score": s} for p, s in self.techniques],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "MethodPaperProfile":
        return cls(
            d["paper_id"],
            int(d["total_citations"]),
            float(d["method_fraction"]),
            {k: int(v) for k, v in d["local_counts"].items()},
            [(t["phrase"], t["score"]) for t in d["techniques"]],
        )


def build_profiles(
    contexts: Sequence[CitationContext],
    stats: Mapping[str, CitationStats],
    method_papers: Iterable[str],
    global_vector: GlobalTechniqueVector,
    area_of: Mapping[str, str],
    config: MethodMinerConfig,
    res: lingo.TextResources | None = None,
) -> dict[str, MethodPaperProfile]:
    """Profiles of every method paper, keyed and ordered by paper id."""
    by_cited: dict[str, list[CitationContext]] = {}
    for c in contexts:
        by_cited.setdefault(c.cited_id, []).append(c)
    out = {}
    for pid in sorted(method_papers):
        local = build_local_vector(pid, by_cited.get(pid, []), global_vector, res)
        st = stats[pid]
        out[pid] = MethodPaperProfile(
            pid,
            st.total_citations,
            st.method_fraction,
            local,
            rank_techniques(local, global_vector, area_of.get(pid), config.top_k),
        )
    return out
