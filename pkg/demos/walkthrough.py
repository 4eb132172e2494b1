"""Run every stage over the bundled mini corpus and ask the questions the
tool exists for: which techniques an area uses, where a technique is used,
and how area popularity moves over time.

    python demos/walkthrough.py [run-dir]
"""

import sys
import tempfile
from pathlib import Path

from areatech import areamap, pipeline, temporal

FIXTURE = Path(__file__).parents[1] / "tests" / "fixtures" / "mini-corpus"


def main(run_dir):
    cfg = pipeline.make_config(FIXTURE / "areatech.conf", corpus=str(FIXTURE), run_dir=run_dir)
    report = pipeline.run_pipeline(cfg)
    store = pipeline.RunStore(run_dir)

    print("area lexicon:")
    for stat in pipeline.load_lexicon(store).areas:
        print(f"  {stat.phrase:35s} count={stat.count}")

    routes = report.counts["classify"]
    print(f"\n{routes['assigned']} papers assigned: {routes['title-direct']} by title, "
          f"{routes['abstract-direct']} by abstract, {routes['language-model']} by the language model")

    print("\nmethod papers and their top technique:")
    for pid, prof in pipeline.load_profiles(store).items():
        print(f"  {pid}  cited {prof.total_citations}x, {prof.method_fraction:.0%} from method sections"
              f"  ->  {prof.technique_names[0]}")

    m = pipeline.load_map(store)
    print("\nwhat is used in machine translation?")
    for t, n in areamap.techniques_for_area(m, "machine translation", 5):
        print(f"  {t} ({n})")
    print("\nwhere is the malt parser used?")
    for a, n in areamap.areas_for_technique(m, "malt parser"):
        print(f"  {a} ({n})")

    print("\narea share per 5-year bucket:")
    series = temporal.area_share_series(
        pipeline.load_area_of(store), pipeline.load_corpus(store), temporal.TimeBucketing(1990, 2013, 5)
    )
    for area, points in series.items():
        cells = "  ".join(f"{b}:{s:.2f}" for b, s in points)
        print(f"  {area:35s} {cells}")
    print(f"\nartifacts are in {run_dir}")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        main(sys.argv[1])
    else:
        with tempfile.TemporaryDirectory() as tmp:
            main(str(Path(tmp) / "run"))
