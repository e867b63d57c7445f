"""Screen-reader navigation flow analysis for mobile GUIs.

Parse a view-hierarchy dump, build the default swipe-right flow, drop
invisible and unfocusable views, group components by proximity and shape
similarity, and redraw the flow so grouped components are read together.
"""

__version__ = "0.1.0"

from .flow import FilterReport, NavFlow, extract_baseline_flow, filter_flow
from .hierarchy import Bounds, ViewNode, ViewTree, load_hierarchy, load_screenshot, parse_hierarchy
from .metrics import reachability, sequence_similarity
from .pipeline import Analysis, RunConfig, Unredrawable, analyze
from .redraw import PatchPlan, emit_patch_plan, redraw_flow
from .regions import GroupingConfig, Region, group_regions
from .vision import VisionConfig, detect_shape, hausdorff, normalized_hausdorff

__all__ = [
    "Analysis", "Bounds", "FilterReport", "GroupingConfig", "NavFlow", "PatchPlan", "Region",
    "RunConfig", "Unredrawable", "ViewNode", "ViewTree", "VisionConfig", "analyze",
    "detect_shape", "emit_patch_plan", "extract_baseline_flow", "filter_flow", "group_regions",
    "hausdorff", "load_hierarchy", "load_screenshot", "normalized_hausdorff", "parse_hierarchy",
    "reachability", "redraw_flow", "sequence_similarity",
]
