import pytest
from hypothesis import given, settings, strategies as st

import oracles
from areatech import pipeline
from areatech.areamap import (
    MENTION,
    PAPER,
    RANK,
    AreaTechniqueMap,
    build_map,
    areas_for_technique,
    techniques_for_area,
)
from areatech.citegraph import CitationContext


def _ctx(citing, cited, in_method=True):
    return CitationContext(citing, cited, "s", in_method)


def test_two_method_papers_example():
    techniques = {"M1": ["x", "y"], "M2": ["y", "z"]}
    ctx = [_ctx("P", "M1"), _ctx("P", "M2")]
    m = build_map({"P": "a"}, techniques, ctx)
    assert m.table == {"a": {"x": 1, "y": 1, "z": 1}}
    ctx.append(_ctx("Q", "M2"))
    m = build_map({"P": "a", "Q": "a"}, techniques, ctx)
    assert m.table["a"] == {"x": 1, "y": 2, "z": 2}


def test_only_method_section_citations_count():
    techniques = {"M": ["x"]}
    m = build_map({"P": "a"}, techniques, [_ctx("P", "M", in_method=False)])
    assert m.table == {}


def test_modes():
    techniques = {"M1": ["x", "y"], "M2": ["y"]}
    ctx = [_ctx("P", "M1"), _ctx("P", "M1"), _ctx("P", "M2")]
    assert build_map({"P": "a"}, techniques, ctx, mode=MENTION).table["a"] == {"x": 2, "y": 3}
    assert build_map({"P": "a"}, techniques, ctx, mode=RANK).table["a"] == {"x": 1.0, "y": 1.0}
    assert build_map({"P": "a"}, {"M1": ["x", "y"]}, ctx, mode=RANK).table["a"] == {"x": 1.0, "y": 0.5}
    with pytest.raises(ValueError):
        build_map({}, {}, [], mode="bogus")


def test_empty_and_unassigned():
    assert build_map({"P": "a"}, {}, [_ctx("P", "M")]).table == {}
    assert build_map({}, {"M": ["x"]}, [_ctx("P", "M")]).table == {}


def test_queries():
    m = AreaTechniqueMap({"a": {"x": 3, "y": 3, "z": 1}, "b": {"x": 5}})
    assert techniques_for_area(m, "a", 2) == [("x", 3), ("y", 3)]
    assert techniques_for_area(m, "a", 0) == []
    assert techniques_for_area(m, "nope", 3) == []
    assert areas_for_technique(m, "x") == [("b", 5), ("a", 3)]
    assert areas_for_technique(m, "z") == [("a", 1)]
    assert areas_for_technique(m, "w") == []


def test_records_round_trip():
    m = build_map({"P": "a"}, {"M": ["x"]}, [_ctx("P", "M")], years={"P": 2001})
    back = AreaTechniqueMap.from_records(m.to_records(), [w.to_json() for w in m.witnesses])
    assert back.table == m.table and back.witnesses == m.witnesses
    assert m.witnesses[0].year == 2001


@pytest.fixture(scope="module")
def top1_inputs(fixture_run):
    _, store, _ = fixture_run
    profiles = pipeline.load_profiles(store)
    techniques = {p: prof.technique_names[:1] for p, prof in profiles.items()}
    return pipeline.load_area_of(store), techniques, pipeline.load_contexts(store)


def test_fixture_top1_table(top1_inputs, manifest):
    area_of, techniques, ctx = top1_inputs
    m = build_map(area_of, techniques, ctx)
    assert m.table == manifest["map_top1"]
    assert areas_for_technique(m, "crf model") == [tuple(x) for x in manifest["inverse_top1"]["crf model"]]


def test_fixture_matches_oracle(top1_inputs, fixture_run):
    area_of, _, ctx = top1_inputs
    profiles = pipeline.load_profiles(fixture_run[1])
    techniques = {p: prof.technique_names for p, prof in profiles.items()}
    triples = [(c.citing_id, c.cited_id, c.in_method_section) for c in ctx]
    m = build_map(area_of, techniques, ctx)
    assert m.as_sets() == oracles.area_technique_map(area_of, techniques, triples)
    assert m.table == oracles.area_technique_map(area_of, techniques, triples, counted=True)
    # the stored map is the same table
    assert pipeline.load_map(fixture_run[1]).table == m.table


def test_witness_soundness(top1_inputs):
    area_of, techniques, ctx = top1_inputs
    m = build_map(area_of, techniques, ctx)
    pairs = {(w.area, w.technique) for w in m.witnesses}
    assert pairs == {(a, t) for a, ts in m.table.items() for t in ts}


ids = st.sampled_from(["P1", "P2", "P3", "P4", "M1", "M2", "M3"])
random_case = st.tuples(
    st.dictionaries(ids, st.sampled_from(["a", "b", "c"])),
    st.dictionaries(st.sampled_from(["M1", "M2", "M3"]),
                    st.lists(st.sampled_from(["x", "y", "z", "w"]), max_size=3, unique=True)),
    st.lists(st.tuples(ids, ids, st.booleans()), max_size=25),
)


@settings(max_examples=200)
@given(random_case)
def test_random_corpora_match_oracle(case):
    area_of, techniques, triples = case
    triples = [t for t in triples if t[0] != t[1]]
    ctx = [_ctx(*t) for t in triples]
    m = build_map(area_of, techniques, ctx)
    assert m.as_sets() == {a: s for a, s in oracles.area_technique_map(area_of, techniques, triples).items() if s}
    counted = oracles.area_technique_map(area_of, techniques, triples, counted=True)
    assert m.table == {a: c for a, c in counted.items() if c}
    assert build_map(area_of, techniques, list(reversed(ctx))).table == m.table
