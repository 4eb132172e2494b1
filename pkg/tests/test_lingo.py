import pytest
from hypothesis import given, strategies as st

import oracles
from areatech import lingo
from conftest import FIXTURE, GOLDEN


def test_normalize_examples():
    assert lingo.normalize_ocr("Machine  Trans-\nlation") == "machine translation"
    assert lingo.normalize_ocr("") == ""
    assert lingo.normalize_ocr("A\tB\x07C") == "a bc"


def test_normalize_keeps_line_structure():
    out = lingo.normalize_ocr("Title\n\n\n  1 Introduction \nText")
    assert out == "title\n\n1 introduction\ntext"


def test_normalize_golden_file_07():
    raw = (FIXTURE / "texts" / "P05-1033.txt").read_text()
    assert lingo.normalize_ocr(raw) == (GOLDEN / "07.normalized.txt").read_text()


noisy = st.text(alphabet=st.sampled_from(list("ab -\n\t\x0c\x01Z.,(")), max_size=60)


@given(noisy)
def test_normalize_idempotent(text):
    once = lingo.normalize_ocr(text)
    assert lingo.normalize_ocr(once) == once


@given(st.text(max_size=80))
def test_normalize_total(text):
    out = lingo.normalize_ocr(text)
    assert "  " not in out
    assert not any(c in out for c in "\t\r\x0c")


def test_tokenize_examples():
    assert lingo.words("part-of-speech tagging.") == ["part-of-speech", "tagging"]
    assert lingo.words("giza++ toolkit") == ["giza++", "toolkit"]
    assert lingo.words("(smith et al., 2004)") == ["smith", "et", "al", "2004"]
    toks = lingo.tokenize("a b")
    assert [(t.surface, t.position) for t in toks] == [("a", 0), ("b", 1)]


@given(st.text(max_size=60))
def test_tokens_have_no_whitespace(text):
    for t in lingo.tokenize(lingo.normalize_ocr(text)):
        assert t.surface and not any(c.isspace() for c in t.surface)


def test_kgrams_examples():
    assert lingo.kgrams(["a", "b", "c"], 2) == ["a b", "b c"]
    assert lingo.kgrams(["a"], 2) == []
    with pytest.raises(ValueError):
        lingo.kgrams(["a"], 0)


@given(st.lists(st.sampled_from("abcde"), max_size=12), st.integers(1, 6))
def test_kgrams_length(tokens, k):
    assert len(lingo.kgrams(tokens, k)) == max(0, len(tokens) - k + 1)


def test_kgrams_on_fixture_titles_match_recount():
    titles = [ln.split("\t")[3] for ln in (FIXTURE / "metadata.tsv").read_text().splitlines()]
    ours = {}
    for t in titles:
        for g in lingo.kgrams(lingo.words(lingo.normalize_ocr(t)), 3):
            ours[g] = ours.get(g, 0) + 1
    assert ours == dict(oracles.kgram_counts(titles, 3))


def test_sentence_split():
    text = "we use the parser of smith et al. (2004). it works, e.g. on news. done"
    spans = lingo.split_sentences(text)
    sents = [text[a:b] for a, b in spans]
    assert sents == [
        "we use the parser of smith et al. (2004).",
        "it works, e.g. on news.",
        "done",
    ]


def test_sentence_split_breaks_at_paragraphs_and_headings():
    text = "abstract\nwe present x\n\n1 introduction\nmore text. and more"
    sents = [text[a:b] for a, b in lingo.split_sentences(text)]
    assert "we present x" in sents
    assert "1 introduction" in sents
    assert sents[-1] == "and more"


def test_noun_phrase_examples():
    nps = [p.text for p in lingo.extract_noun_phrases("we use the stanford parser to preprocess")]
    assert "stanford parser" in nps
    assert lingo.extract_noun_phrases("the the the") == []
    nps = [p.text for p in lingo.extract_noun_phrases("trained with the moses toolkit and bleu score")]
    assert "moses toolkit" in nps and "bleu score" in nps


def test_noun_phrase_subphrases():
    nps = [p.text for p in lingo.extract_noun_phrases("we apply minimum error rate training")]
    assert "minimum error rate training" in nps
    assert "rate training" in nps
    # single-token fragments of a longer run are not emitted
    assert "training" not in nps
    assert [p.text for p in lingo.extract_noun_phrases("the model")] == ["model"]


sentence_words = st.lists(
    st.sampled_from(["the", "a", "of", "parser", "neural", "we", "use", "treebank", "penn",
                     "fast", "training", "is", "giza++", "and", "model", "2004", "x"]),
    max_size=15,
)


@given(sentence_words)
def test_noun_phrase_invariants(ws):
    res = lingo.default_resources()
    for np in lingo.extract_noun_phrases(" ".join(ws)):
        toks = np.text.split()
        assert len(toks) == np.length
        assert 1 <= np.length <= lingo.MAX_PHRASE_LEN
        assert toks[0] not in res.stopwords and toks[-1] not in res.stopwords


def test_resources_override(tmp_path):
    stop = tmp_path / "stop.txt"
    stop.write_text("parser\n")
    res = lingo.TextResources.load(stopwords=stop)
    assert res.tag("parser") == "STOP"
    assert res.tag("the") == "DET"
