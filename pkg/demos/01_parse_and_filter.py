"""Read a view hierarchy, walk it the way a screen reader would, and drop
the views that would never be announced.

Run from the repository root:  python demos/01_parse_and_filter.py
"""

from __future__ import annotations

from pathlib import Path

from navflow.flow import extract_baseline_flow, filter_flow
from navflow.hierarchy import load_hierarchy

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

tree = load_hierarchy(FIXTURES / "profile_screen.json")
print(f"{len(list(tree.root.walk()))} views parsed from profile_screen.json")

# The baseline is plain document order over the non-container views.
baseline = extract_baseline_flow(tree)
print("\nbaseline order:")
print("  " + " -> ".join(baseline.order))

# Filtering removes what a screen reader skips and stitches the gaps closed.
filtered, report = filter_flow(baseline, tree)
print("\nremoved as invisible:", ", ".join(report.removed_invisible) or "-")
print("removed as silent:   ", ", ".join(report.removed_silent) or "-")
for before, after in report.reconnections:
    print(f"reconnected {before} -> {after}")
print(f"\nfiltered flow keeps {len(filtered.order)} of {len(baseline.order)} views")
