"""Score flows against a hand-written reading order.

S is the rank-distance similarity (1.0 means identical order), and
reachability counts how many touchable views the flow can focus.
"""

from __future__ import annotations

import json
from pathlib import Path

from navflow.flow import GROUND_TRUTH, NavFlow
from navflow.hierarchy import load_hierarchy, load_screenshot
from navflow.metrics import reachability, sequence_similarity
from navflow.pipeline import RunConfig, analyze

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

tree = load_hierarchy(FIXTURES / "profile_screen.json")
shot = load_screenshot(FIXTURES / "profile_screen.png")
truth = NavFlow(tuple(json.loads((FIXTURES / "profile_screen.truth.json").read_text())["order"]), GROUND_TRUTH)

print(f"{'flow':<22}{'S':>10}{'reached':>10}")
runs = {
    "baseline": analyze(tree, shot).baseline,
    "redrawn, no filter": analyze(tree, shot, RunConfig(filter_enabled=False)).redrawn,
    "redrawn": analyze(tree, shot).redrawn,
}
for name, flow in runs.items():
    s = sequence_similarity(truth, flow).s
    r = reachability(tree, flow)
    print(f"{name:<22}{s:>10.4f}{r.n:>6}/{r.m:<3}")
