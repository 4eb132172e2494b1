"""Resumable batch pipeline over a run directory.

Stages run in a fixed order and each persists its artifacts under
``<run>/<stage>/``::

    ingest      papers.jsonl, edges.jsonl, diagnostics.jsonl
    areas       keywords.jsonl, kgram_stats.jsonl, area_lexicon.jsonl
    classify    assignments.jsonl, area_models.jsonl
    methods     contexts.jsonl, citation_stats.jsonl
    techniques  method_papers.jsonl, global_vector.jsonl, techniques.jsonl
    map         area_technique_map.jsonl, witnesses.jsonl
    temporal    area_shares.csv, technique_evolution.jsonl, venue_top_areas.jsonl
"""

from __future__ import annotations

import dataclasses
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import arealex, areaclass, areamap, citegraph, lingo, sectioner, techminer, temporal
from .corpus import CorpusError, Corpus, corpus_from_records, corpus_records, edge_records, load_corpus_dir
from .store import MissingArtifactError, RunStore, read_jsonl

log = logging.getLogger(__name__)

STAGES = ("ingest", "areas", "classify", "methods", "techniques", "map", "temporal")


@dataclass
class PipelineConfig:
    corpus: str | None = None
    run_dir: str = "run"
    jobs: int = 1
    # text resources
    stopwords: str | None = None
    pos_lexicon: str | None = None
    # areas
    scheme: int = 3
    thresholds: tuple[float, ...] | None = None
    threshold_counts: tuple[int, ...] = (8, 5, 4, 4)
    per_k: bool = False
    seed_keywords: str | None = None
    rounds: int = 3
    min_support: int = 5
    min_kw_support: int = 3
    bootstrap: bool = True
    # classify
    lam: float = 0.7
    areas_file: str | None = None
    # methods / techniques
    method_keywords: tuple[str, ...] = sectioner.DEFAULT_METHOD_KEYWORDS
    citation_patterns: str | None = None
    k1: int = 15
    k2: float = 0.5
    top_k: int = 5
    stop_phrases: str | None = None
    global_all_method_contexts: bool = False
    # map
    map_mode: str = areamap.PAPER
    # temporal
    from_year: int = 1980
    to_year: int = 2013
    width: int = 5
    venue_width: int = 10
    venue_top: int = 10
    venue_weight: str = temporal.CITATIONS
    within_window: bool = False

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.scheme not in (1, 2, 3):
            raise ValueError("scheme must be 1, 2 or 3")
        if self.thresholds is not None and len(self.thresholds) != 4:
            raise ValueError("thresholds needs four values: t2,t3,t4,t5")
        if len(self.threshold_counts) != 4:
            raise ValueError("threshold_counts needs four values for k = 2..5")
        if self.map_mode not in areamap.MODES:
            raise ValueError(f"map_mode must be one of {areamap.MODES}")
        areaclass.ClassifierConfig(self.lam)
        techminer.MethodMinerConfig(self.k1, self.k2, self.top_k)
        temporal.TimeBucketing(self.from_year, self.to_year, self.width)
        for name in ("stopwords", "pos_lexicon", "seed_keywords", "stop_phrases", "citation_patterns", "areas_file"):
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                raise FileNotFoundError(f"{name}: no such file {path}")

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("run_dir")
        d.pop("jobs")
        return d

    def resources(self) -> lingo.TextResources:
        if self.stopwords is None and self.pos_lexicon is None:
            return lingo.default_resources()
        return lingo.TextResources.load(self.stopwords, self.pos_lexicon)


_FIELD_TYPES = {f.name: f for f in dataclasses.fields(PipelineConfig)}
# config-file and CLI spellings that differ from the attribute name
ALIASES = {"lambda": "lam", "from": "from_year", "to": "to_year", "areas": "areas_file"}


def coerce_option(name: str, value: Any) -> tuple[str, Any]:
    """Map a config key and raw string value to (attribute, typed value)."""
    key = ALIASES.get(name, name).replace("-", "_")
    key = ALIASES.get(key, key)
    if key not in _FIELD_TYPES:
        raise ValueError(f"unknown config key {name!r}")
    if not isinstance(value, str):
        return key, value
    default = _FIELD_TYPES[key].default
    v = value.strip()
    if key in ("thresholds",):
        return key, tuple(float(x) for x in v.split(",")) if v else None
    if key == "threshold_counts":
        return key, tuple(int(x) for x in v.split(","))
    if key == "method_keywords":
        return key, tuple(x.strip() for x in v.split(",") if x.strip())
    if isinstance(default, bool):
        if v.lower() in ("1", "true", "yes", "on"):
            return key, True
        if v.lower() in ("0", "false", "no", "off"):
            return key, False
        raise ValueError(f"{name}: expected a boolean, got {value!r}")
    if isinstance(default, int):
        return key, int(v)
    if isinstance(default, float):
        return key, float(v)
    return key, v or None


def read_config_file(path: str | Path) -> dict[str, Any]:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        k, v = line.split("=", 1)
        key, value = coerce_option(k.strip(), v)
        out[key] = value
    return out


def make_config(config_file: str | Path | None = None, **overrides) -> PipelineConfig:
    values = read_config_file(config_file) if config_file else {}
    for k, v in overrides.items():
        if v is None:
            continue
        key, value = coerce_option(k, v)
        values[key] = value
    return PipelineConfig(**values)


# ---------------------------------------------------------------- loaders


def load_corpus(store: RunStore) -> Corpus:
    return corpus_from_records(store.read("ingest", "papers.jsonl"), store.read("ingest", "edges.jsonl"))


def load_lexicon(store: RunStore) -> arealex.AreaLexicon:
    return arealex.AreaLexicon.from_records(store.read("areas", "area_lexicon.jsonl"))


def load_assignments(store: RunStore) -> list[areaclass.AreaAssignment]:
    return [areaclass.AreaAssignment.from_json(r) for r in store.read("classify", "assignments.jsonl")]


def load_area_of(store: RunStore) -> dict[str, str]:
    return {a.paper_id: a.area for a in load_assignments(store) if a.area is not None}


def load_contexts(store: RunStore) -> list[citegraph.CitationContext]:
    return [citegraph.CitationContext.from_json(r) for r in store.read("methods", "contexts.jsonl")]


def load_citation_stats(store: RunStore) -> dict[str, citegraph.CitationStats]:
    return {
        r["paper_id"]: citegraph.CitationStats(r["total_citations"], r["method_citations"])
        for r in store.read("methods", "citation_stats.jsonl")
    }


def load_profiles(store: RunStore) -> dict[str, techminer.MethodPaperProfile]:
    profiles = [techminer.MethodPaperProfile.from_json(r) for r in store.read("techniques", "techniques.jsonl")]
    return {p.paper_id: p for p in profiles}


def load_map(store: RunStore) -> areamap.AreaTechniqueMap:
    return areamap.AreaTechniqueMap.from_records(
        store.read("map", "area_technique_map.jsonl"), store.read("map", "witnesses.jsonl")
    )


# ---------------------------------------------------------------- stages


def stage_ingest(cfg: PipelineConfig, store: RunStore) -> dict:
    if not cfg.corpus:
        raise CorpusError("no corpus directory configured (--corpus)")
    report = load_corpus_dir(cfg.corpus)
    store.write("ingest", "papers.jsonl", corpus_records(report.corpus))
    store.write("ingest", "edges.jsonl", edge_records(report.corpus))
    store.write(
        "ingest",
        "diagnostics.jsonl",
        [{"code": d.code, "message": d.message, "line": d.line} for d in report.diagnostics],
    )
    c = report.corpus
    return {
        "papers": len(c),
        "edges": len(c.edges),
        "venues": len(c.venues),
        "missing_text": len(report.missing_text),
        "with_abstract": sum(1 for p in c if p.abstract_span),
        "diagnostics": len(report.diagnostics),
    }


def stage_areas(cfg: PipelineConfig, store: RunStore) -> dict:
    corpus = load_corpus(store)
    res = cfg.resources()
    titles = [p.title for p in corpus]
    seed = arealex.FunctionalKeywordSet.from_file(cfg.seed_keywords)
    keywords = seed
    if cfg.bootstrap:
        keywords = arealex.bootstrap_keywords(
            titles, seed, cfg.rounds, cfg.min_support, cfg.min_kw_support, res=res
        )
    candidates = arealex.harvest(titles, keywords, res)
    s1 = arealex.score_scheme1(candidates, per_k=cfg.per_k, stopwords=res.stopwords)
    thresholds = None
    if cfg.thresholds is not None:
        thresholds = dict(zip(range(2, 6), cfg.thresholds))
    lexicon = arealex.build_lexicon(
        titles,
        keywords,
        cfg.scheme,
        threshold_counts=dict(zip(range(2, 6), cfg.threshold_counts)),
        thresholds=thresholds,
        per_k=cfg.per_k,
        res=res,
    )
    store.write(
        "areas",
        "keywords.jsonl",
        [{"keyword": k, "side": keywords.sides[k], "provenance": keywords.provenance[k]} for k in keywords.keywords],
    )
    store.write("areas", "kgram_stats.jsonl", [s.to_json(r) for r, s in enumerate(s1, start=1)])
    store.write("areas", "area_lexicon.jsonl", lexicon.to_records())
    return {
        "keywords": len(keywords),
        "learned_keywords": sum(1 for v in keywords.provenance.values() if v == "bootstrapped"),
        "candidates": len(candidates),
        "kgrams": len(s1),
        "areas": len(lexicon.areas),
    }


def stage_classify(cfg: PipelineConfig, store: RunStore) -> dict:
    corpus = load_corpus(store)
    if cfg.areas_file:
        lexicon = arealex.AreaLexicon.from_records(read_jsonl(cfg.areas_file))
    else:
        lexicon = load_lexicon(store)
    result = areaclass.classify_corpus(
        corpus, lexicon.phrases(), areaclass.ClassifierConfig(cfg.lam), cfg.resources(), cfg.jobs
    )
    store.write("classify", "assignments.jsonl", [a.to_json() for a in result.assignments])
    store.write(
        "classify",
        "area_models.jsonl",
        [
            {
                "area": m.area,
                "prior_count": m.prior_count,
                "total_terms": m.total_terms,
                "term_counts": dict(sorted(m.term_counts.items())),
            }
            for m in result.models
        ],
    )
    return {"assigned": sum(1 for a in result.assignments if a.area), **dict(sorted(result.routes.items()))}


def stage_methods(cfg: PipelineConfig, store: RunStore) -> dict:
    corpus = load_corpus(store)
    patterns = citegraph.CitationPatterns.from_file(cfg.citation_patterns) if cfg.citation_patterns else None
    extraction = citegraph.extract_contexts(
        corpus, cfg.method_keywords, patterns, cfg.resources(), cfg.jobs
    )
    stats = citegraph.all_citation_stats(extraction.contexts)
    store.write("methods", "contexts.jsonl", [c.to_json() for c in extraction.contexts])
    store.write(
        "methods",
        "citation_stats.jsonl",
        [
            {
                "paper_id": pid,
                "total_citations": s.total_citations,
                "method_citations": s.method_citations,
                "method_fraction": s.method_fraction,
            }
            for pid, s in stats.items()
        ],
    )
    return {
        "contexts": len(extraction.contexts),
        "method_section_contexts": sum(1 for c in extraction.contexts if c.in_method_section),
        "cited_papers": len(stats),
        "mentions_resolved": extraction.stats.resolved,
        "mentions_unresolved": extraction.stats.unresolved,
        "mentions_ambiguous": extraction.stats.ambiguous,
    }


def stage_techniques(cfg: PipelineConfig, store: RunStore) -> dict:
    contexts = load_contexts(store)
    stats = load_citation_stats(store)
    area_of = load_area_of(store)
    res = cfg.resources()
    mcfg = techminer.MethodMinerConfig(cfg.k1, cfg.k2, cfg.top_k)
    method_papers = techminer.identify_method_papers(stats, mcfg)
    gv = techminer.build_global_vector(
        contexts,
        method_papers,
        techminer.load_stop_phrases(cfg.stop_phrases),
        res,
        cfg.global_all_method_contexts,
    )
    profiles = techminer.build_profiles(contexts, stats, method_papers, gv, area_of, mcfg, res)
    store.write(
        "techniques",
        "method_papers.jsonl",
        [
            {
                "paper_id": pid,
                "total_citations": stats[pid].total_citations,
                "method_fraction": stats[pid].method_fraction,
                "area": area_of.get(pid),
            }
            for pid in sorted(method_papers)
        ],
    )
    store.write("techniques", "global_vector.jsonl", gv.to_records())
    store.write("techniques", "techniques.jsonl", [p.to_json() for p in profiles.values()])
    return {
        "method_papers": len(method_papers),
        "global_phrases": len(gv),
        "papers_with_techniques": sum(1 for p in profiles.values() if p.techniques),
    }


def stage_map(cfg: PipelineConfig, store: RunStore) -> dict:
    corpus = load_corpus(store)
    area_of = load_area_of(store)
    contexts = load_contexts(store)
    profiles = load_profiles(store)
    m = areamap.build_map(
        area_of,
        {pid: p.technique_names for pid, p in profiles.items()},
        contexts,
        {p.paper_id: p.year for p in corpus},
        cfg.map_mode,
    )
    store.write("map", "area_technique_map.jsonl", m.to_records())
    store.write("map", "witnesses.jsonl", [w.to_json() for w in m.witnesses])
    return {"areas": len(m.table), "entries": sum(len(v) for v in m.table.values()), "witnesses": len(m.witnesses)}


def stage_temporal(cfg: PipelineConfig, store: RunStore) -> dict:
    corpus = load_corpus(store)
    area_of = load_area_of(store)
    m = load_map(store)
    bucketing = temporal.TimeBucketing(cfg.from_year, cfg.to_year, cfg.width)
    series = temporal.area_share_series(area_of, corpus, bucketing, include_unassigned=True)
    store.write_text("temporal", "area_shares.csv", temporal.shares_csv(series))
    evolution = []
    for area in sorted(m.table):
        for label, ranked in temporal.technique_evolution(area, bucketing, m.witnesses):
            evolution.append({"area": area, "bucket": label, "techniques": [[t, c] for t, c in ranked]})
    store.write("temporal", "technique_evolution.jsonl", evolution)
    venue_bucketing = temporal.TimeBucketing(cfg.from_year, cfg.to_year, cfg.venue_width)
    venues = []
    for venue in [None] + sorted(corpus.venues):
        per_bucket = temporal.top_areas_by_venue(
            area_of, corpus, venue, venue_bucketing, cfg.venue_top, cfg.venue_weight, cfg.within_window
        )
        for label, ranked in per_bucket:
            venues.append(
                {"venue": venue or "*", "bucket": label, "weight": cfg.venue_weight, "areas": [[a, w] for a, w in ranked]}
            )
    store.write("temporal", "venue_top_areas.jsonl", venues)
    return {"share_areas": len(series), "evolution_rows": len(evolution), "venue_rows": len(venues)}


# artifacts each stage reads, by producing stage
PREREQUISITES = {
    "ingest": [],
    "areas": [("ingest", "papers.jsonl")],
    "classify": [("ingest", "papers.jsonl"), ("areas", "area_lexicon.jsonl")],
    "methods": [("ingest", "papers.jsonl")],
    "techniques": [("methods", "contexts.jsonl"), ("classify", "assignments.jsonl")],
    "map": [("ingest", "papers.jsonl"), ("classify", "assignments.jsonl"), ("methods", "contexts.jsonl"),
            ("techniques", "techniques.jsonl")],
    "temporal": [("ingest", "papers.jsonl"), ("classify", "assignments.jsonl"), ("map", "witnesses.jsonl")],
}


def check_prerequisites(cfg: PipelineConfig, stages: Sequence[str], store: RunStore) -> None:
    planned = set(stages)
    for stage in stages:
        for producer, artifact in PREREQUISITES[stage]:
            if producer == "areas" and stage == "classify" and cfg.areas_file:
                continue
            if producer not in planned and not store.exists(producer, artifact):
                raise MissingArtifactError(store.path(producer, artifact), producer)


STAGE_FUNCS = {
    "ingest": stage_ingest,
    "areas": stage_areas,
    "classify": stage_classify,
    "methods": stage_methods,
    "techniques": stage_techniques,
    "map": stage_map,
    "temporal": stage_temporal,
}


@dataclass
class RunReport:
    stages: list[str] = field(default_factory=list)
    counts: dict[str, dict] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def run_pipeline(cfg: PipelineConfig, stages: Sequence[str] | None = None) -> RunReport:
    """Execute ``stages`` (all by default) in pipeline order.

    A stage whose inputs are missing from the run directory raises
    MissingArtifactError naming the stage to rerun.
    """
    requested = list(STAGES) if not stages else [s for s in STAGES if s in set(stages)]
    unknown = set(stages or ()) - set(STAGES)
    if unknown:
        raise ValueError(f"unknown stage(s): {', '.join(sorted(unknown))}")
    store = RunStore(cfg.run_dir)
    check_prerequisites(cfg, requested, store)
    if "ingest" in requested and not (cfg.corpus and Path(cfg.corpus).is_dir()):
        raise CorpusError(f"corpus directory {cfg.corpus} does not exist")
    store.root.mkdir(parents=True, exist_ok=True)
    (store.root / "run.json").write_text(
        json.dumps(cfg.to_json(), sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    report = RunReport()
    for stage in requested:
        t0 = time.perf_counter()
        log.info("stage %s", stage)
        report.counts[stage] = STAGE_FUNCS[stage](cfg, store)
        report.timings[stage] = round(time.perf_counter() - t0, 4)
        report.stages.append(stage)
    (store.root / "report.json").write_text(json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n")
    return report


# ---------------------------------------------------------------- queries

QUESTIONS = ("techniques-of-area", "areas-of-technique", "paper-area", "paper-techniques")


def query(run_dir: str | Path, question: str, subject: str, top: int = 10) -> list[str]:
    """Answer lines for ``question`` about ``subject``; empty when unknown."""
    store = RunStore(run_dir)
    subject = subject.strip()
    if question == "techniques-of-area":
        m = load_map(store)
        return [f"{t}\t{_fmt(c)}" for t, c in areamap.techniques_for_area(m, subject.lower(), top)]
    if question == "areas-of-technique":
        m = load_map(store)
        return [f"{a}\t{_fmt(c)}" for a, c in areamap.areas_for_technique(m, subject.lower())]
    if question == "paper-area":
        for a in load_assignments(store):
            if a.paper_id == subject and a.area:
                return [f"{a.area}\t{a.route}"]
        return []
    if question == "paper-techniques":
        profile = load_profiles(store).get(subject)
        return [f"{t}\t{_fmt(s)}" for t, s in profile.techniques] if profile else []
    raise ValueError(f"unknown question {question!r}; expected one of {QUESTIONS}")


def _fmt(x) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.4f}"
