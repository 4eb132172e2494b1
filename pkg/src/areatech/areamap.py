"""Area -> technique mapping table and its forward/inverse queries.

For each paper P with area A, every technique of every method paper that P
cites from its method section is added to A's entry. The counted table
tracks how often a technique features in an area.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .citegraph import CitationContext

log = logging.getLogger(__name__)

# count once per (citing paper, technique)
PAPER = "paper"
# count once per method-section citation mention carrying the technique
MENTION = "mention"
# experimental: a (paper, technique) pair weighs 1/rank of the technique in
# the best-ranking cited method paper's list
RANK = "rank"
MODES = (PAPER, MENTION, RANK)


@dataclass(frozen=True)
class Witness:
    """A method paper's technique reaching an area through one citing paper."""

    citing_id: str
    method_id: str
    technique: str
    area: str
    year: int
    mentions: int

    def to_json(self) -> dict:
        return {
            "citing_id": self.citing_id,
            "method_id": self.method_id,
            "technique": self.technique,
            "area": self.area,
            "year": self.year,
            "mentions": self.mentions,
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "Witness":
        return cls(d["citing_id"], d["method_id"], d["technique"], d["area"], int(d["year"]), int(d["mentions"]))


@dataclass
class AreaTechniqueMap:
    table: dict[str, dict[str, float]] = field(default_factory=dict)
    witnesses: list[Witness] = field(default_factory=list)
    mode: str = PAPER

    def techniques(self, area: str) -> set[str]:
        return set(self.table.get(area, {}))

    def as_sets(self) -> dict[str, set[str]]:
        return {a: set(ts) for a, ts in self.table.items()}

    def to_records(self) -> list[dict]:
        return [
            {"area": a, "technique": t, "count": c}
            for a in sorted(self.table)
            for t, c in sorted(self.table[a].items())
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping], witnesses: Iterable[Mapping] = ()) -> "AreaTechniqueMap":
        table: dict[str, dict[str, float]] = {}
        for r in records:
            table.setdefault(r["area"], {})[r["technique"]] = r["count"]
        return cls(table, [Witness.from_json(w) for w in witnesses])


def method_citations(
    contexts: Iterable[CitationContext], method_papers: Iterable[str]
) -> dict[str, dict[str, int]]:
    """citing paper -> {method paper: number of method-section mentions}."""
    method_papers = set(method_papers)
    out: dict[str, dict[str, int]] = defaultdict(dict)
    for c in contexts:
        if c.in_method_section and c.cited_id in method_papers:
            row = out[c.citing_id]
            row[c.cited_id] = row.get(c.cited_id, 0) + 1
    return out


def build_map(
    assignments: Mapping[str, str],
    techniques: Mapping[str, Sequence[str]],
    contexts: Iterable[CitationContext],
    years: Mapping[str, int] | None = None,
    mode: str = PAPER,
) -> AreaTechniqueMap:
    """``assignments``: paper -> area; ``techniques``: method paper -> ranked
    technique list; ``years``: paper -> year, recorded on the witnesses."""
    if mode not in MODES:
        raise ValueError(f"unknown map mode {mode!r}")
    cited = method_citations(contexts, techniques)
    years = years or {}
    table: dict[str, dict[str, float]] = {}
    witnesses = []
    skipped = 0
    for pid in sorted(cited):
        area = assignments.get(pid)
        if area is None:
            skipped += 1
            continue
        weights: dict[str, float] = {}
        for mid in sorted(cited[pid]):
            n = cited[pid][mid]
            for rank, t in enumerate(techniques[mid], start=1):
                witnesses.append(Witness(pid, mid, t, area, years.get(pid, 0), n))
                if mode == PAPER:
                    weights[t] = 1
                elif mode == MENTION:
                    weights[t] = weights.get(t, 0) + n
                else:
                    weights[t] = max(weights.get(t, 0.0), 1.0 / rank)
        if not weights:
            continue
        row = table.setdefault(area, {})
        for t, w in weights.items():
            row[t] = row.get(t, 0) + w
    if skipped:
        log.info("area map: %d citing papers without an area were skipped", skipped)
    table = {a: dict(sorted(table[a].items())) for a in sorted(table)}
    return AreaTechniqueMap(table, witnesses, mode)


def techniques_for_area(m: AreaTechniqueMap, area: str, n: int) -> list[tuple[str, float]]:
    if area not in m.table:
        log.warning("area %r not in mapping table", area)
        return []
    ranked = sorted(m.table[area].items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[: max(n, 0)]


def areas_for_technique(m: AreaTechniqueMap, technique: str) -> list[tuple[str, float]]:
    hits = [(a, ts[technique]) for a, ts in m.table.items() if technique in ts]
    return sorted(hits, key=lambda kv: (-kv[1], kv[0]))
