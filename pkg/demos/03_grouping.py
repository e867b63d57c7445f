"""Group the views of a screen into regions.

Views sharing a parent start in one initial region, which is then split by
spatial proximity and by visual similarity (same role, matching edge shape).
Overlapping groups are merged.
"""

from __future__ import annotations

from pathlib import Path

from navflow.flow import extract_baseline_flow, filter_flow
from navflow.hierarchy import load_hierarchy, load_screenshot
from navflow.regions import GroupingConfig, group_regions, initial_regions, proximal_regions

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# A toolbar row: a label and button sit close together; a lone button stands apart.
toolbar = load_hierarchy(FIXTURES / "toolbar_row.json")
(row,) = initial_regions(toolbar)
print("toolbar row, split by horizontal gap <= 15 px:")
for region in proximal_regions(row, toolbar, GroupingConfig(max_gap=15, strict_proximity=True)):
    print("  ", region.members)

# The profile screen with its screenshot, so shapes can be compared.
tree = load_hierarchy(FIXTURES / "profile_screen.json")
shot = load_screenshot(FIXTURES / "profile_screen.png")
filtered, _ = filter_flow(extract_baseline_flow(tree), tree)
grouping = group_regions(tree, shot, eligible=filtered.order)
print(f"\nprofile screen ({grouping.shape_source}):")
for region in grouping.final:
    print(f"  {region.kind:<8} {', '.join(region.members)}")

# Without pixels, similarity falls back to roles alone and says so.
fallback = group_regions(tree, None, eligible=filtered.order)
print(f"\nwithout a screenshot: shape source = {fallback.shape_source}")
print("low-confidence regions:", sum(bool(r.low_confidence) for r in fallback.final))
