"""Depth-impact report for the replication and node-count probes on the fixture tree.

    python scripts/depth_impact.py [--model tests/fixtures/appendix_tree.txt] [--json]
"""

import argparse
import json
from pathlib import Path

from perfgrove.model import load_model
from perfgrove.sensitivity import ImpactProbe, depth_impact_report

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_MODEL = ROOT / "tests" / "fixtures" / "appendix_tree.txt"
DEFAULT_PROBES = Path(__file__).resolve().parent / "probes_fixture.json"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", type=Path, default=DEFAULT_MODEL)
    ap.add_argument("--probes", type=Path, default=DEFAULT_PROBES)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    model = load_model(args.model.read_text(encoding="utf-8"))
    probes = [ImpactProbe.from_dict(p) for p in json.loads(args.probes.read_text(encoding="utf-8"))]
    report = depth_impact_report(model.tree, probes, model.binset)
    if args.json:
        print(report.to_json())
        return
    print(report.render(), end="")
    for attr in report.by_attribute:
        verdict = report.shallower_dominates(attr)
        if verdict is not None:
            print(f"{attr}: shallower level has the larger change: {verdict}")


if __name__ == "__main__":
    main()
