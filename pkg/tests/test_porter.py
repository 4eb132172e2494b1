import re
from pathlib import Path

from hypothesis import given, settings, strategies as st
from nltk.stem.porter import PorterStemmer

from areatech.porter import stem

ROOT = Path(__file__).parents[1]
_ref = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def reference(word):
    return _ref.stem(word, to_lowercase=False)


def vocabulary():
    words = set()
    # everything the repository itself ships: data files, sources, fixture texts
    for pattern in ("src/areatech/data/*", "src/areatech/*.py", "tests/*.py", "tests/fixtures/**/*.txt"):
        for p in sorted(ROOT.glob(pattern)):
            words.update(re.findall(r"[a-z]+", p.read_text().lower()))
    return sorted(w for w in words if len(w) > 2)


def test_examples():
    assert stem("translation") == "translat"
    assert stem("parsing") == "pars"
    assert stem("a") == "a"
    assert stem("is") == "is"


def test_classic_examples():
    # from the original algorithm description
    cases = {
        "caresses": "caress", "ponies": "poni", "caress": "caress", "cats": "cat",
        "feed": "feed", "agreed": "agre", "plastered": "plaster", "motoring": "motor",
        "conflated": "conflat", "hopping": "hop", "filing": "file", "happy": "happi",
        "relational": "relat", "generalization": "gener", "triplicate": "triplic",
        "revival": "reviv", "adjustable": "adjust", "probate": "probat", "controll": "control",
        "roll": "roll",
    }
    for word, expected in cases.items():
        assert stem(word) == expected, word


def test_matches_reference_on_vocabulary():
    vocab = vocabulary()
    assert len(vocab) > 1000
    bad = [(w, stem(w), reference(w)) for w in vocab if stem(w) != reference(w)]
    assert not bad, bad[:10]


@settings(max_examples=500)
@given(st.text(alphabet="abcdeilmnorstuvyz", min_size=3, max_size=14))
def test_matches_reference_on_random_words(word):
    assert stem(word) == reference(word)


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", max_size=2))
def test_short_words_unchanged(word):
    assert stem(word) == word
