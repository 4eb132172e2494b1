"""Time-bucketed analytics over assignments and the area-technique map."""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .areamap import Witness
from .corpus import Corpus

UNASSIGNED = "unassigned"
PAPERS, CITATIONS = "papers", "citations"


@dataclass(frozen=True)
class TimeBucketing:
    """Consecutive ``width``-year buckets tiling [start_year, end_year];
    the last bucket is cut short at ``end_year``."""

    start_year: int
    end_year: int
    width_years: int

    def __post_init__(self):
        if self.width_years < 1:
            raise ValueError("bucket width must be >= 1")
        if self.end_year < self.start_year:
            raise ValueError("end year precedes start year")

    @property
    def buckets(self) -> list[tuple[int, int]]:
        return [
            (lo, min(lo + self.width_years - 1, self.end_year))
            for lo in range(self.start_year, self.end_year + 1, self.width_years)
        ]

    def __len__(self):
        return len(self.buckets)

    def index(self, year: int) -> int | None:
        if not self.start_year <= year <= self.end_year:
            return None
        return (year - self.start_year) // self.width_years

    def label(self, i: int) -> str:
        lo, hi = self.buckets[i]
        return f"{lo}-{hi}"

    def labels(self) -> list[str]:
        return [self.label(i) for i in range(len(self))]


def area_share_series(
    assignments: Mapping[str, str | None],
    corpus: Corpus,
    bucketing: TimeBucketing,
    areas: Sequence[str] | None = None,
    include_unassigned: bool = False,
) -> dict[str, list[tuple[str, float]]]:
    """Per area, (bucket label, fraction of that bucket's papers in the area).

    Buckets without papers produce no point. ``areas=None`` reports every
    assigned area; ``include_unassigned`` adds papers with no area.
    """
    totals: Counter[int] = Counter()
    per_area: dict[str, Counter] = defaultdict(Counter)
    for p in corpus:
        b = bucketing.index(p.year)
        if b is None:
            continue
        totals[b] += 1
        area = assignments.get(p.paper_id) or UNASSIGNED
        per_area[area][b] += 1
    if areas is None:
        areas = sorted(a for a in per_area if a != UNASSIGNED)
    areas = list(areas)
    if include_unassigned and UNASSIGNED not in areas:
        areas.append(UNASSIGNED)
    out = {}
    for a in areas:
        out[a] = [
            (bucketing.label(b), per_area[a][b] / totals[b])
            for b in range(len(bucketing))
            if totals[b]
        ]
    return out


def shares_csv(series: Mapping[str, Sequence[tuple[str, float]]]) -> str:
    """Long-format CSV (bucket, area, share) for line charts."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bucket", "area", "share"])
    rows = [(bucket, area, share) for area, pts in series.items() for bucket, share in pts]
    for bucket, area, share in sorted(rows):
        w.writerow([bucket, area, repr(share)])
    return buf.getvalue()


def technique_evolution(
    area: str,
    bucketing: TimeBucketing,
    witnesses: Iterable[Witness],
    top_n: int | None = None,
) -> list[tuple[str, list[tuple[str, int]]]]:
    """Per bucket, the area's techniques ranked by citation mentions from
    papers published in that bucket."""
    per_bucket: dict[int, Counter] = defaultdict(Counter)
    known = False
    for w in witnesses:
        if w.area != area:
            continue
        known = True
        b = bucketing.index(w.year)
        if b is not None:
            per_bucket[b][w.technique] += w.mentions
    if not known:
        return []
    out = []
    for b in range(len(bucketing)):
        ranked = sorted(per_bucket[b].items(), key=lambda kv: (-kv[1], kv[0]))
        out.append((bucketing.label(b), ranked[:top_n] if top_n is not None else ranked))
    return out


def top_areas_by_venue(
    assignments: Mapping[str, str | None],
    corpus: Corpus,
    venue: str | None,
    bucketing: TimeBucketing,
    n: int = 10,
    weight: str = PAPERS,
    within_window: bool = False,
) -> list[tuple[str, list[tuple[str, int]]]]:
    """Top ``n`` areas per bucket among a venue's papers (all papers when
    ``venue`` is None), weighted by paper count or by citations received.

    With ``within_window`` only citations from papers published in the same
    bucket count. Areas of zero weight are left out.
    """
    if weight not in (PAPERS, CITATIONS):
        raise ValueError(f"weight must be {PAPERS!r} or {CITATIONS!r}")
    if venue is not None and venue not in corpus.venues:
        return []
    per_bucket: dict[int, Counter] = defaultdict(Counter)
    for p in corpus:
        if venue is not None and p.venue != venue:
            continue
        area = assignments.get(p.paper_id)
        b = bucketing.index(p.year)
        if area is None or b is None:
            continue
        if weight == PAPERS:
            per_bucket[b][area] += 1
            continue
        cites = corpus.in_edges(p.paper_id)
        if within_window:
            cites = [c for c in cites if bucketing.index(corpus.papers[c].year) == b]
        if cites:
            per_bucket[b][area] += len(cites)
    out = []
    for b in range(len(bucketing)):
        ranked = sorted(per_bucket[b].items(), key=lambda kv: (-kv[1], kv[0]))
        out.append((bucketing.label(b), ranked[:n]))
    return out
