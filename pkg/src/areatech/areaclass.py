"""Per-paper area assignment.

A paper whose title names exactly one lexicon area gets that area; failing
that, an abstract naming exactly one area decides. Everything else is scored
against per-area unigram language models (Jelinek-Mercer smoothing) built
from the directly matched papers, with priors proportional to how many
papers each area received by a single direct match.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import lingo
from .corpus import Corpus, PaperRecord
from .parallel import parallel_map

TITLE_DIRECT = "title-direct"
ABSTRACT_DIRECT = "abstract-direct"
LANGUAGE_MODEL = "language-model"
UNCLASSIFIABLE = "unclassifiable"
DIRECT_ROUTES = (TITLE_DIRECT, ABSTRACT_DIRECT)


@dataclass(frozen=True)
class ClassifierConfig:
    lam: float = 0.7

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")


@dataclass
class AreaModel:
    area: str
    term_counts: Counter
    prior_count: int

    @property
    def total_terms(self) -> int:
        return sum(self.term_counts.values())


@dataclass
class CollectionModel:
    term_counts: Counter

    @property
    def total_terms(self) -> int:
        return sum(self.term_counts.values())


@dataclass(frozen=True)
class AreaAssignment:
    paper_id: str
    area: str | None
    route: str
    score: float | None = None

    def __post_init__(self):
        if self.route in DIRECT_ROUTES and self.score is not None:
            raise ValueError("direct assignments carry no score")
        if self.route == LANGUAGE_MODEL and self.score is None:
            raise ValueError("language-model assignments carry a score")

    def to_json(self) -> dict:
        return {"paper_id": self.paper_id, "area": self.area, "route": self.route, "score": self.score}

    @classmethod
    def from_json(cls, d: Mapping) -> "AreaAssignment":
        return cls(d["paper_id"], d["area"], d["route"], d.get("score"))


@dataclass(frozen=True)
class Routing:
    route: str
    area: str | None
    title_matches: frozenset[str] = frozenset()
    abstract_matches: frozenset[str] = frozenset()


class AreaMatcher:
    """Token-boundary phrase lookup against a fixed area list."""

    def __init__(self, areas: Iterable[str]):
        self.areas = frozenset(areas)
        self.max_len = max((len(a.split()) for a in self.areas), default=0)

    def __call__(self, text: str) -> set[str]:
        toks = lingo.words(text)
        found = set()
        for k in range(1, self.max_len + 1):
            for i in range(len(toks) - k + 1):
                gram = " ".join(toks[i : i + k])
                if gram in self.areas:
                    found.add(gram)
        return found


def direct_match(text: str, lexicon: Iterable[str] | AreaMatcher) -> set[str]:
    matcher = lexicon if isinstance(lexicon, AreaMatcher) else AreaMatcher(lexicon)
    return matcher(text)


def route_paper(paper: PaperRecord, lexicon: Iterable[str] | AreaMatcher) -> Routing:
    matcher = lexicon if isinstance(lexicon, AreaMatcher) else AreaMatcher(lexicon)
    title = paper.title_norm
    abstract = paper.abstract
    if not title.strip() and not abstract.strip():
        return Routing(UNCLASSIFIABLE, None)
    t = frozenset(matcher(title))
    if len(t) == 1:
        return Routing(TITLE_DIRECT, next(iter(t)), t)
    a = frozenset(matcher(abstract))
    if len(a) == 1 and not t:
        return Routing(ABSTRACT_DIRECT, next(iter(a)), t, a)
    return Routing(LANGUAGE_MODEL, None, t, a)


def bag_of_words(text: str, res: lingo.TextResources | None = None) -> list[str]:
    """Stemmed, stopword-free terms of ``text``."""
    stop = (res or lingo.default_resources()).stopwords
    return [lingo.stem(w) for w in lingo.words(text) if w not in stop]


def paper_terms(paper: PaperRecord, res=None) -> list[str]:
    return bag_of_words(paper.title_norm, res) + bag_of_words(paper.abstract, res)


def build_models(
    corpus: Corpus,
    direct: Mapping[str, str],
    res: lingo.TextResources | None = None,
) -> tuple[list[AreaModel], CollectionModel]:
    """Area models from papers assigned by a single direct match.

    ``direct`` maps paper id to area for those papers only.
    """
    terms: dict[str, Counter] = {}
    priors: Counter[str] = Counter()
    for pid in sorted(direct):
        area = direct[pid]
        priors[area] += 1
        terms.setdefault(area, Counter()).update(paper_terms(corpus.papers[pid], res))
    models = [AreaModel(a, terms[a], priors[a]) for a in sorted(priors)]
    collection: Counter[str] = Counter()
    for m in models:
        collection.update(m.term_counts)
    return models, CollectionModel(collection)


def smoothed_probability(term: str, model: AreaModel, collection: CollectionModel, lam: float) -> float:
    total_d = model.total_terms
    total_c = collection.total_terms
    p_ml = model.term_counts.get(term, 0) / total_d if total_d else 0.0
    p_c = collection.term_counts.get(term, 0) / total_c if total_c else 0.0
    return (1.0 - lam) * p_ml + lam * p_c


def smoothed_distribution(model: AreaModel, collection: CollectionModel, lam: float) -> dict[str, float]:
    return {w: smoothed_probability(w, model, collection, lam) for w in collection.term_counts}


class _Scorer:
    """Cached totals so that scoring many queries stays cheap."""

    def __init__(self, models: Sequence[AreaModel], collection: CollectionModel):
        self.models = list(models)
        self.collection = collection
        self.total_c = collection.total_terms
        self.prior_total = sum(m.prior_count for m in models)
        self.totals = [m.total_terms for m in models]

    def log_prior(self, i: int) -> float:
        return math.log(self.models[i].prior_count / self.prior_total)

    def score(self, query: Sequence[str], i: int, lam: float) -> float:
        model = self.models[i]
        total_d = self.totals[i]
        s = self.log_prior(i)
        for w in query:
            c_w = self.collection.term_counts.get(w, 0)
            if not c_w:
                continue
            p = (1.0 - lam) * (model.term_counts.get(w, 0) / total_d if total_d else 0.0)
            p += lam * c_w / self.total_c
            if p <= 0.0:
                return -math.inf
            s += math.log(p)
        return s


def score_area(
    query_terms: Sequence[str],
    model: AreaModel,
    collection: CollectionModel,
    lam: float,
    prior_total: int | None = None,
) -> float:
    """log P(d) + sum over query terms of log P_lambda(w|d).

    Terms unknown to the collection are skipped. ``prior_total`` is the sum
    of prior counts over all competing areas (defaults to this area's own,
    giving a log-prior of zero).
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    scorer = _Scorer([model], collection)
    if prior_total is not None:
        scorer.prior_total = prior_total
    return scorer.score(query_terms, 0, lam)


def _argmax(scorer: _Scorer, query: Sequence[str], lam: float) -> tuple[str, float]:
    # models are sorted by area name; a strict comparison keeps the
    # lexicographically first area among full ties
    best = None
    for i, m in enumerate(scorer.models):
        s = scorer.score(query, i, lam)
        if best is None or (s, m.prior_count) > best[0]:
            best = ((s, m.prior_count), m.area, s)
    return best[1], best[2]


def classify_paper(
    paper: PaperRecord,
    lexicon: Iterable[str] | AreaMatcher,
    models: Sequence[AreaModel],
    collection: CollectionModel,
    config: ClassifierConfig = ClassifierConfig(),
    res: lingo.TextResources | None = None,
    routing: Routing | None = None,
) -> AreaAssignment:
    routing = routing or route_paper(paper, lexicon)
    if routing.route in DIRECT_ROUTES:
        return AreaAssignment(paper.paper_id, routing.area, routing.route)
    if routing.route == UNCLASSIFIABLE or not models:
        return AreaAssignment(paper.paper_id, None, UNCLASSIFIABLE)
    scorer = _Scorer(sorted(models, key=lambda m: m.area), collection)
    area, score = _argmax(scorer, paper_terms(paper, res), config.lam)
    return AreaAssignment(paper.paper_id, area, LANGUAGE_MODEL, score)


@dataclass
class Classification:
    assignments: list[AreaAssignment]
    models: list[AreaModel]
    collection: CollectionModel
    routes: Counter = field(default_factory=Counter)

    def area_of(self) -> dict[str, str]:
        return {a.paper_id: a.area for a in self.assignments if a.area is not None}


def _route_job(args):
    paper, areas = args
    return route_paper(paper, AreaMatcher(areas))


def _lm_job(args):
    paper, scorer, lam, res = args
    area, score = _argmax(scorer, paper_terms(paper, res), lam)
    return AreaAssignment(paper.paper_id, area, LANGUAGE_MODEL, score)


def classify_corpus(
    corpus: Corpus,
    lexicon: Iterable[str],
    config: ClassifierConfig = ClassifierConfig(),
    res: lingo.TextResources | None = None,
    jobs: int = 1,
) -> Classification:
    areas = tuple(sorted(set(lexicon)))
    papers = list(corpus)
    routings = parallel_map(_route_job, [(p, areas) for p in papers], jobs)
    direct = {p.paper_id: r.area for p, r in zip(papers, routings) if r.route in DIRECT_ROUTES}
    models, collection = build_models(corpus, direct, res)
    scorer = _Scorer(models, collection)
    lm_papers = [p for p, r in zip(papers, routings) if r.route == LANGUAGE_MODEL]
    lm_results = {}
    if models:
        for a in parallel_map(_lm_job, [(p, scorer, config.lam, res) for p in lm_papers], jobs):
            lm_results[a.paper_id] = a
    out = []
    for p, r in zip(papers, routings):
        if r.route in DIRECT_ROUTES:
            out.append(AreaAssignment(p.paper_id, r.area, r.route))
        elif p.paper_id in lm_results:
            out.append(lm_results[p.paper_id])
        else:
            out.append(AreaAssignment(p.paper_id, None, UNCLASSIFIABLE))
    return Classification(out, models, collection, Counter(a.route for a in out))
