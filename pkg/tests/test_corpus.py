import logging

import pytest

from areatech import pipeline
from areatech.corpus import (
    CitationEdge,
    Corpus,
    CorpusError,
    PaperMeta,
    PaperRecord,
    build_corpus,
    corpus_from_records,
    corpus_records,
    edge_records,
    load_citations,
    load_corpus_dir,
    load_fulltext,
    load_metadata,
)
from areatech.store import RunStore
from conftest import FIXTURE

INGEST = FIXTURE.parent / "ingest"


def _write(path, rows):
    path.write_text("".join("\t".join(r) + "\n" for r in rows))
    return path


def test_metadata_three_rows(tmp_path):
    p = _write(tmp_path / "m.tsv", [
        ("A", "2001", "ACL", "t one", "smith"),
        ("B", "2002", "ACL", "t two", "lee;kim"),
        ("C", "2003", "CL", "t three", ""),
    ])
    meta, diags = load_metadata(p)
    assert len(meta) == 3 and not diags
    assert meta["B"] == PaperMeta("t two", 2002, "ACL", ("lee", "kim"))
    assert meta["C"].authors == ()


def test_metadata_ten_rows_two_malformed():
    meta, diags = load_metadata(INGEST / "metadata10.tsv")
    assert len(meta) == 8
    assert sorted(d.line for d in diags) == [5, 7]
    assert {d.code for d in diags} == {"bad-year", "bad-row"}


def test_metadata_duplicate_id_names_both_rows(tmp_path):
    p = _write(tmp_path / "m.tsv", [
        ("P05-1033", "2005", "ACL", "a", "chiang"),
        ("P05-1034", "2005", "ACL", "b", "x"),
        ("P05-1033", "2005", "ACL", "c", "y"),
    ])
    with pytest.raises(CorpusError, match=r"P05-1033.*lines 1 and 3"):
        load_metadata(p)


def test_metadata_year_out_of_range(tmp_path):
    p = _write(tmp_path / "m.tsv", [("A", "1850", "X", "t", "s"), ("B", "2000", "X", "t", "s")])
    meta, diags = load_metadata(p)
    assert list(meta) == ["B"] and diags[0].code == "bad-year"


def test_metadata_unreadable(tmp_path):
    with pytest.raises(CorpusError):
        load_metadata(tmp_path / "absent.tsv")


def test_fulltext_present_missing_empty(tmp_path, caplog):
    ids = [f"P{i}" for i in range(5)]
    for pid in ids[:4]:
        (tmp_path / f"{pid}.txt").write_text(f"text of {pid}")
    texts, missing, _ = load_fulltext(tmp_path, ids)
    assert len(texts) == 4 and missing == ["P4"]
    (tmp_path / "P4.txt").write_text("")
    with caplog.at_level(logging.WARNING):
        texts, missing, diags = load_fulltext(tmp_path, ids)
    assert len(texts) == 5 and texts["P4"] == "" and missing == []
    assert [d.code for d in diags] == ["empty-text"]
    assert "empty" in caplog.text


def test_fulltext_none_found_is_fatal(tmp_path):
    with pytest.raises(CorpusError):
        load_fulltext(tmp_path, ["A"])


def test_citations_basic(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("A\tB\nA\tA\n")
    edges, diags = load_citations(p, {"A", "B"})
    assert edges == [CitationEdge("A", "B")]
    assert [d.code for d in diags] == ["self-edge"]


def test_citations_hundred_lines_seven_dangling():
    known = load_metadata(FIXTURE / "metadata.tsv")[0].keys()
    edges, diags = load_citations(INGEST / "citations100.tsv", known)
    assert len(edges) == 93
    assert len(diags) == 7 and {d.code for d in diags} == {"dangling"}


def _record(pid, text="", year=2000):
    return PaperRecord(pid, "t", year, "V", ("s",), text, None, bool(text))


def test_build_small_corpus():
    meta = {k: PaperMeta("t", 2000, "V", ("s",)) for k in "ABC"}
    texts = {"A": "Abstract\nWe present X.\n1 Introduction\nbody", "B": "no sections here", "C": "x"}
    c = build_corpus(meta, texts, [CitationEdge("A", "B"), CitationEdge("B", "C")])
    assert len(c) == 3 and len(c.edges) == 2
    assert c.papers["A"].abstract == "we present x."
    assert c.papers["B"].abstract_span is None


def test_build_keeps_paper_without_text():
    meta = {"A": PaperMeta("t", 2000, "V", ()), "B": PaperMeta("u", 2001, "V", ())}
    c = build_corpus(meta, {"A": "text"}, [])
    assert c.papers["B"].has_text is False and c.papers["B"].full_text == ""


def test_type_invariants():
    with pytest.raises(ValueError):
        _record("A", year=1899)
    with pytest.raises(ValueError):
        PaperRecord("A", "t", 2000, "V", (), "abc", (2, 9))
    with pytest.raises(ValueError):
        Corpus({"A": _record("A")}, [CitationEdge("A", "Z")])


def test_iteration_sorted():
    c = Corpus({k: _record(k) for k in "CAB"}, [])
    assert [p.paper_id for p in c] == ["A", "B", "C"]


def test_mini_corpus_manifest_counts(manifest):
    rep = load_corpus_dir(FIXTURE)
    m = manifest["ingest"]
    assert len(rep.corpus) == m["papers"]
    assert len(rep.corpus.edges) == m["edges"]
    assert len(rep.corpus.venues) == m["venues"]
    assert rep.missing_text == m["missing_text"]
    assert sum(1 for p in rep.corpus if p.abstract_span) == m["with_abstract"]
    assert len(rep.diagnostics) == m["diagnostics"]
    for e in rep.corpus.edges:
        assert e.from_id in rep.corpus.papers and e.to_id in rep.corpus.papers


def test_round_trip_through_store(tmp_path, fixture_corpus):
    cfg = pipeline.make_config(corpus=str(FIXTURE), run_dir=str(tmp_path / "run"))
    pipeline.run_pipeline(cfg, ["ingest"])
    reloaded = pipeline.load_corpus(RunStore(cfg.run_dir))
    assert reloaded == fixture_corpus
    assert corpus_from_records(corpus_records(fixture_corpus), edge_records(fixture_corpus)) == fixture_corpus


def test_ingest_is_deterministic(tmp_path):
    outs = []
    for name in ("a", "b"):
        cfg = pipeline.make_config(corpus=str(FIXTURE), run_dir=str(tmp_path / name))
        pipeline.run_pipeline(cfg, ["ingest"])
        outs.append([(tmp_path / name / "ingest" / f).read_bytes() for f in ("papers.jsonl", "edges.jsonl")])
    assert outs[0] == outs[1]


def test_missing_corpus_dir(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus_dir(tmp_path / "nothing")
