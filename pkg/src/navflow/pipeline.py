"""End-to-end composition: hierarchy -> baseline -> filter -> regions -> redraw -> patch."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .flow import FilterReport, NavFlow, extract_baseline_flow, filter_flow, is_announced
from .hierarchy import ViewTree
from .redraw import PatchPlan, emit_patch_plan, redraw_flow
from .regions import GroupingConfig, Grouping, group_regions


class Unredrawable(RuntimeError):
    """No component in the GUI can receive accessibility focus."""


@dataclass(frozen=True)
class RunConfig:
    grouping: GroupingConfig = field(default_factory=GroupingConfig)
    filter_enabled: bool = True
    output_dir: Path = Path("out")

    @property
    def strict_proximity(self) -> bool:
        return self.grouping.strict_proximity


@dataclass
class Analysis:
    tree: ViewTree
    baseline: NavFlow
    filtered: NavFlow
    filter_report: FilterReport
    grouping: Grouping
    redrawn: NavFlow
    patch_plan: PatchPlan
    diagnostics: list[str] = field(default_factory=list)


def analyze(tree: ViewTree, screenshot: np.ndarray | None = None, cfg: RunConfig = RunConfig()) -> Analysis:
    if not any(is_announced(node) for node in tree.root.walk() if not node.is_container):
        raise Unredrawable("cannot redraw: no component is capable of receiving focus")
    baseline = extract_baseline_flow(tree)
    if cfg.filter_enabled:
        filtered, report = filter_flow(baseline, tree)
    else:
        filtered, report = baseline, FilterReport()
    grouping = group_regions(tree, screenshot, cfg.grouping, eligible=filtered.order)
    diagnostics = list(grouping.diagnostics)
    redrawn = redraw_flow(tree, grouping.final, filtered, diagnostics)
    plan = emit_patch_plan(redrawn, tree)
    diagnostics.extend(plan.diagnostics)
    return Analysis(tree, baseline, filtered, report, grouping, redrawn, plan, diagnostics)
