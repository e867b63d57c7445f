"""Redraw the navigation flow so every region is read in one go, then turn
the new order into a list of focus rewirings for the app's layout files.
"""

from __future__ import annotations

from pathlib import Path

from navflow.hierarchy import load_hierarchy, load_screenshot
from navflow.pipeline import analyze
from navflow.redraw import patch_report

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

tree = load_hierarchy(FIXTURES / "profile_screen.json")
result = analyze(tree, load_screenshot(FIXTURES / "profile_screen.png"))

print("before:", " -> ".join(result.filtered.order))
print("\nafter: ", " -> ".join(result.redrawn.order))

print("\nfocus rewiring:")
print(patch_report(result.patch_plan, tree))
