"""Command line front end: ``areatech <command> ...``.

Stage commands (ingest, areas extract, classify, methods, techniques extract,
map build, run) write artifacts into ``--run-dir``; the rest read them.
Options come from ``--config`` (``key = value`` lines) with flags winning.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import arealex, areamap, evalkit, pipeline, temporal
from .corpus import CorpusError
from .store import MissingArtifactError, RunStore

log = logging.getLogger("areatech")

# argparse dest -> PipelineConfig key, for options whose names differ
_CONFIG_KEYS = {
    "run_dir", "jobs", "corpus", "stopwords", "pos_lexicon", "method_keywords", "citation_patterns",
    "scheme", "thresholds", "threshold_counts", "per_k", "seed_keywords", "rounds", "min_support",
    "min_kw_support", "bootstrap", "lam", "areas_file", "k1", "k2", "top_k", "stop_phrases",
    "global_all_method_contexts", "map_mode", "from_year", "to_year", "width", "venue_width",
    "venue_top", "venue_weight", "within_window",
}


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting values given before it
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--run-dir", help="artifact directory (default: run)")
    p.add_argument("--jobs", type=int, help="worker processes per stage")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--corpus", help="corpus directory with metadata.tsv, texts/, citations.tsv")
    p.add_argument("--stopwords", help="stopword list, one per line")
    p.add_argument("--pos-lexicon", help="word<TAB>TAG lexicon")
    p.add_argument("--method-keywords", help="comma-separated method heading keywords")
    p.add_argument("--citation-patterns", help="name<TAB>regex citation pattern file")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _area_opts(p):
    p.add_argument("--scheme", type=int, choices=(1, 2, 3))
    p.add_argument("--thresholds", help="scheme-3 score thresholds t2,t3,t4,t5")
    p.add_argument("--threshold-counts", help="scheme-3 minimum counts c2,c3,c4,c5")
    p.add_argument("--per-k", action="store_true", default=None, help="normalize scores within each k")
    p.add_argument("--seed-keywords", help="keyword<TAB>after|before file")
    p.add_argument("--rounds", type=int)
    p.add_argument("--min-support", type=int)
    p.add_argument("--min-kw-support", type=int)
    p.add_argument("--no-bootstrap", dest="bootstrap", action="store_false", default=None)


def _technique_opts(p):
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=float)
    p.add_argument("--top-k", type=int)
    p.add_argument("--stop-phrases")
    p.add_argument("--global-all-method-contexts", action="store_true", default=None)


def _temporal_opts(p):
    p.add_argument("--from", dest="from_year", type=int)
    p.add_argument("--to", dest="to_year", type=int)
    p.add_argument("--width", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="areatech",
        description="Mine application areas and techniques from a scholarly corpus.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", parents=[common], help="load and validate the corpus")

    areas = sub.add_parser("areas", parents=[common], help="area lexicon")
    areas_sub = areas.add_subparsers(dest="action", required=True)
    _area_opts(areas_sub.add_parser("extract", parents=[common]))
    cal = areas_sub.add_parser("calibrate", parents=[common], help="top k-grams per order")
    cal.add_argument("--top", type=int, default=30)

    cl = sub.add_parser("classify", parents=[common], help="assign papers to areas")
    cl.add_argument("--lambda", dest="lam", type=float)
    cl.add_argument("--areas", dest="areas_file", help="area_lexicon.jsonl to use")

    sub.add_parser("methods", parents=[common], help="citation contexts and statistics")

    tech = sub.add_parser("techniques", parents=[common], help="method papers and techniques")
    tech_sub = tech.add_subparsers(dest="action", required=True)
    _technique_opts(tech_sub.add_parser("extract", parents=[common]))

    mp = sub.add_parser("map", parents=[common], help="area-technique table")
    mp_sub = mp.add_subparsers(dest="action", required=True)
    mb = mp_sub.add_parser("build", parents=[common])
    mb.add_argument("--mode", dest="map_mode", choices=areamap.MODES)
    mq = mp_sub.add_parser("query", parents=[common])
    mq.add_argument("--area", required=True)
    mq.add_argument("--top", type=int, default=10)
    mi = mp_sub.add_parser("inverse", parents=[common])
    mi.add_argument("--technique", required=True)

    tp = sub.add_parser("temporal", parents=[common], help="time-bucketed analytics")
    tp_sub = tp.add_subparsers(dest="action", required=True)
    ta = tp_sub.add_parser("areas", parents=[common], help="area share CSV")
    _temporal_opts(ta)
    ta.add_argument("--areas", dest="area_list", help="comma-separated areas (default: all)")
    tt = tp_sub.add_parser("techniques", parents=[common], help="technique evolution JSONL")
    _temporal_opts(tt)
    tt.add_argument("--area", required=True)
    tt.add_argument("--top", type=int)
    tv = tp_sub.add_parser("venues", parents=[common], help="top areas per venue JSONL")
    _temporal_opts(tv)
    tv.add_argument("--venue", help="venue name (default: all venues)")
    tv.add_argument("--top", type=int, default=10)
    tv.add_argument("--weight", choices=(temporal.PAPERS, temporal.CITATIONS), default=temporal.CITATIONS)
    tv.add_argument("--within-window", action="store_true")

    ev = sub.add_parser("eval", parents=[common], help="evaluation arithmetic")
    ev_sub = ev.add_subparsers(dest="action", required=True)
    ep = ev_sub.add_parser("precision")
    ep.add_argument("--judgments", required=True, help="one 0/1 per line in rank order")
    ep.add_argument("--k", type=int, required=True)
    ek = ev_sub.add_parser("kappa")
    ek.add_argument("--matrix", required=True, help="yes_yes,yes_no,no_yes,no_no")
    ea = ev_sub.add_parser("accuracy")
    ea.add_argument("--correct", type=int, required=True)
    ea.add_argument("--total", type=int, required=True)
    er = ev_sub.add_parser("recall")
    er.add_argument("--gold", required=True, help="one phrase per line")
    er.add_argument("--extracted", required=True, help="one phrase per line")
    er.add_argument("--match", choices=sorted(evalkit.MATCHERS), default="stemmed")

    q = sub.add_parser("query", parents=[common], help="ask the run directory a question")
    q.add_argument("question", choices=pipeline.QUESTIONS)
    q.add_argument("subject")
    q.add_argument("--top", type=int, default=10)

    r = sub.add_parser("run", parents=[common], help="run pipeline stages in order")
    r.add_argument("--stages", help=f"comma-separated subset of {','.join(pipeline.STAGES)}")
    _area_opts(r)
    r.add_argument("--lambda", dest="lam", type=float)
    _technique_opts(r)
    r.add_argument("--mode", dest="map_mode", choices=areamap.MODES)
    _temporal_opts(r)
    return parser


def _config(args) -> pipeline.PipelineConfig:
    overrides = {k: v for k, v in vars(args).items() if k in _CONFIG_KEYS and v is not None}
    return pipeline.make_config(getattr(args, "config", None), **overrides)


def _emit(lines, out=None):
    text = "".join(line + "\n" for line in lines)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_stage(args, stage) -> int:
    cfg = _config(args)
    report = pipeline.run_pipeline(cfg, [stage])
    print(json.dumps({stage: report.counts[stage]}, sort_keys=True))
    return 0


def _bucketing(cfg, width=None) -> temporal.TimeBucketing:
    return temporal.TimeBucketing(cfg.from_year, cfg.to_year, width or cfg.width)


def cmd_areas(args) -> int:
    if args.action == "extract":
        return _run_stage(args, "areas")
    cfg = _config(args)
    stats = [arealex.KGramStat(r["phrase"], r["k"], r["count"], r["score"])
             for r in RunStore(cfg.run_dir).read("areas", "kgram_stats.jsonl")]
    for k, rows in arealex.calibration_table(stats, args.top).items():
        for s in rows:
            print(f"{k}\t{s.count}\t{s.score:.6g}\t{s.phrase}")
    return 0


def cmd_map(args) -> int:
    if args.action == "build":
        return _run_stage(args, "map")
    cfg = _config(args)
    question = "techniques-of-area" if args.action == "query" else "areas-of-technique"
    subject = args.area if args.action == "query" else args.technique
    lines = pipeline.query(cfg.run_dir, question, subject, getattr(args, "top", 10))
    _emit(lines)
    return 0 if lines else 1


def cmd_temporal(args) -> int:
    cfg = _config(args)
    store = RunStore(cfg.run_dir)
    corpus = pipeline.load_corpus(store)
    area_of = pipeline.load_area_of(store)
    if args.action == "areas":
        areas = [a.strip() for a in args.area_list.split(",")] if args.area_list else None
        series = temporal.area_share_series(area_of, corpus, _bucketing(cfg), areas)
        sys.stdout.write(temporal.shares_csv(series))
        return 0
    if args.action == "techniques":
        m = pipeline.load_map(store)
        rows = temporal.technique_evolution(args.area, _bucketing(cfg), m.witnesses, args.top)
        _emit(json.dumps({"bucket": b, "techniques": [[t, c] for t, c in ranked]}) for b, ranked in rows)
        return 0 if rows else 1
    bucketing = temporal.TimeBucketing(cfg.from_year, cfg.to_year, args.width or cfg.venue_width)
    rows = temporal.top_areas_by_venue(
        area_of, corpus, args.venue, bucketing, args.top, args.weight, args.within_window
    )
    _emit(json.dumps({"bucket": b, "areas": [[a, w] for a, w in ranked]}) for b, ranked in rows)
    return 0 if rows else 1


def _lines(path) -> list[str]:
    return [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]


def cmd_eval(args) -> int:
    if args.action == "precision":
        judgments = [int(x) for x in _lines(args.judgments)]
        value = evalkit.precision_at_k(judgments, args.k)
    elif args.action == "kappa":
        value = evalkit.cohen_kappa([int(x) for x in args.matrix.split(",")])
    elif args.action == "accuracy":
        value = evalkit.accuracy(args.correct, args.total)
    else:
        value = evalkit.recall_vs_gold(_lines(args.gold), _lines(args.extracted), args.match)
    print(repr(value))
    return 0


def cmd_query(args) -> int:
    cfg = _config(args)
    lines = pipeline.query(cfg.run_dir, args.question, args.subject, args.top)
    _emit(lines)
    return 0 if lines else 1


def cmd_run(args) -> int:
    cfg = _config(args)
    stages = [s.strip() for s in args.stages.split(",")] if getattr(args, "stages", None) else None
    report = pipeline.run_pipeline(cfg, stages)
    print(json.dumps(report.to_json(), sort_keys=True, indent=2))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "ingest":
            return _run_stage(args, "ingest")
        if args.command == "classify":
            return _run_stage(args, "classify")
        if args.command == "methods":
            return _run_stage(args, "methods")
        if args.command == "techniques":
            return _run_stage(args, "techniques")
        handler = {
            "areas": cmd_areas,
            "map": cmd_map,
            "temporal": cmd_temporal,
            "eval": cmd_eval,
            "query": cmd_query,
            "run": cmd_run,
        }[args.command]
        return handler(args)
    except MissingArtifactError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CorpusError, ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
