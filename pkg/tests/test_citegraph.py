from collections import Counter

import pytest
from hypothesis import given, strategies as st

import oracles
from areatech.citegraph import (
    CitationContext,
    CitationPatterns,
    ResolutionStats,
    all_citation_stats,
    citation_stats,
    expand_year,
    extract_contexts,
    find_citation_mentions,
    resolve_mention,
)
from areatech.corpus import CitationEdge, Corpus, PaperRecord


def _pairs(text):
    return [(m.surname, m.year) for m in find_citation_mentions(text)]


def test_mention_examples():
    assert _pairs("as in (smith et al., 2004) we") == [("smith", 2004)]
    assert _pairs("(smith and jones, 04)") == [("smith", 2004)]
    assert _pairs("(smith et al., 2004; lee, 2006)") == [("smith", 2004), ("lee", 2006)]


def test_mention_variants():
    assert _pairs("following collins (1999), we") == [("collins", 1999)]
    assert _pairs("following collins et al. (1999), we") == [("collins", 1999)]
    assert _pairs("a parser (collins, 1999 and more") == [("collins", 1999)]
    assert _pairs("a parser collins, 1999) and more") == [("collins", 1999)]
    assert _pairs("(e.g. brill, 1995a; see ratnaparkhi 1996)") == [("brill", 1995), ("ratnaparkhi", 1996)]
    # no bracket at all is too loose to count
    assert _pairs("in smith, 2004 we saw") == []
    assert _pairs("(section 3, 2004)") == []


def test_mentions_do_not_overlap():
    text = "koehn et al. (2003) and (och and ney, 2003; koehn, 2004) used (chiang 05)."
    ms = find_citation_mentions(text)
    assert [m.surname for m in ms] == ["koehn", "och", "koehn", "chiang"]
    for a, b in zip(ms, ms[1:]):
        assert a.end <= b.offset


def test_expand_year():
    assert expand_year("04") == 2004
    assert expand_year("99") == 1999
    assert expand_year("1987") == 1987


def test_custom_patterns(tmp_path):
    f = tmp_path / "pat.tsv"
    f.write_text("# only narrative citations with brackets\nnarrative\t(?P<surname>[a-z]+)\\s*\\[(?P<year>\\d{4})\\]\n")
    pats = CitationPatterns.from_file(f)
    ms = find_citation_mentions("see smith [2001] here", patterns=pats)
    assert [(m.surname, m.year) for m in ms] == [("smith", 2001)]
    f.write_text("bogus\tx\n")
    with pytest.raises(ValueError):
        CitationPatterns.from_file(f)


def _paper(pid, year, author, text=""):
    return PaperRecord(pid, "t", year, "V", (author,), text, None, bool(text))


def _corpus(text, cited):
    papers = {"X": _paper("X", 2010, "me", text)}
    papers.update({pid: _paper(pid, y, a) for pid, y, a in cited})
    return Corpus(papers, [CitationEdge("X", pid) for pid, _, _ in cited])


def test_resolution():
    c = _corpus("(smith, 2004)", [("A", 2004, "Smith"), ("B", 2004, "lee")])
    (m,) = find_citation_mentions("(smith, 2004)", "X")
    assert resolve_mention(m, c) == "A"
    (m,) = find_citation_mentions("(smith, 2005)", "X")
    stats = ResolutionStats()
    assert resolve_mention(m, c, stats) is None and stats.unresolved == 1


def test_resolution_two_digit_year():
    c = _corpus("", [("A", 1904, "smith")])
    (m,) = find_citation_mentions("(smith, 04)", "X")
    assert m.year == 2004
    assert resolve_mention(m, c) == "A"


def test_resolution_ambiguous():
    c = _corpus("", [("A", 2004, "smith"), ("B", 2004, "smith")])
    (m,) = find_citation_mentions("(smith, 2004)", "X")
    stats = ResolutionStats()
    assert resolve_mention(m, c, stats) is None
    assert stats.ambiguous == 1


def test_context_sentence_and_method_flag():
    text = ("1 introduction\nprior work exists (lee, 2001). another point.\n"
            "3 methodology\nwe train with the toolkit of smith et al. (2004) on news.\n4 results\nok")
    c = _corpus(text, [("A", 2004, "smith"), ("B", 2001, "lee")])
    ex = extract_contexts(c)
    by_cited = {x.cited_id: x for x in ex.contexts}
    assert by_cited["A"].in_method_section
    assert by_cited["A"].sentence == "we train with the toolkit of on news."
    assert not by_cited["B"].in_method_section
    assert by_cited["B"].sentence == "prior work exists ."


def test_no_method_span_means_no_method_contexts():
    text = "1 introduction\nwe use (smith, 2004) here.\n2 results\nand (smith, 2004) again."
    c = _corpus(text, [("A", 2004, "smith")])
    ex = extract_contexts(c)
    assert len(ex.contexts) == 2
    assert not any(x.in_method_section for x in ex.contexts)


def test_stats_arithmetic():
    ctx = [CitationContext("X", "A", "s", i < 12) for i in range(20)]
    assert citation_stats("A", ctx) == (20, pytest.approx(0.60))
    assert citation_stats("Z", ctx) == (0, 0.0)


@given(st.lists(st.tuples(st.sampled_from("ABC"), st.booleans()), max_size=30))
def test_stats_bounds(rows):
    ctx = [CitationContext("X", cited, "s", m) for cited, m in rows]
    stats = all_citation_stats(ctx)
    for pid, s in stats.items():
        assert 0 <= s.method_fraction <= 1
        assert s.total_citations >= s.method_citations
        assert (s.total_citations, s.method_fraction) == citation_stats(pid, ctx)


def test_fixture_contexts_match_oracle(fixture_corpus, manifest):
    ex = extract_contexts(fixture_corpus)
    ours = Counter((c.citing_id, c.cited_id, c.in_method_section) for c in ex.contexts)
    assert ours == Counter(oracles.contexts())
    m = manifest["contexts"]
    assert len(ex.contexts) == m["total"]
    assert sum(c.in_method_section for c in ex.contexts) == m["method_section"]
    assert ex.stats.unresolved == m["unresolved_mentions"]
    assert ex.stats.ambiguous == m["ambiguous_mentions"]
    edges = set(fixture_corpus.edges)
    for c in ex.contexts:
        assert CitationEdge(c.citing_id, c.cited_id) in edges
        assert c.sentence


def test_fixture_stats(fixture_corpus, manifest):
    ctx = extract_contexts(fixture_corpus).contexts
    m1 = manifest["aliases"]["M1"]
    assert citation_stats(m1, ctx) == pytest.approx(tuple(manifest["citation_stats"][m1]))
    stats = all_citation_stats(ctx)
    assert {p: [s.total_citations, s.method_fraction] for p, s in stats.items()} == pytest.approx(
        manifest["citation_stats"]
    )


def test_parallel_matches_serial(fixture_corpus):
    a = extract_contexts(fixture_corpus, jobs=1).contexts
    b = extract_contexts(fixture_corpus, jobs=3).contexts
    assert a == b
