import json
from pathlib import Path

import pytest

from areatech import pipeline
from areatech.corpus import load_corpus_dir
from areatech.store import RunStore

FIXTURE = Path(__file__).parent / "fixtures" / "mini-corpus"
GOLDEN = Path(__file__).parent / "fixtures" / "golden"


@pytest.fixture(scope="session")
def manifest():
    return json.loads((FIXTURE / "manifest.json").read_text())


def fixture_config(run_dir, **overrides):
    return pipeline.make_config(FIXTURE / "areatech.conf", corpus=str(FIXTURE), run_dir=str(run_dir), **overrides)


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_corpus_dir(FIXTURE).corpus


@pytest.fixture(scope="session")
def fixture_run(tmp_path_factory):
    """A full pipeline run over the mini corpus, shared read-only."""
    cfg = fixture_config(tmp_path_factory.mktemp("fixture") / "run")
    report = pipeline.run_pipeline(cfg)
    return cfg, RunStore(cfg.run_dir), report
