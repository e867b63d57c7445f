"""Redrawn navigation order and the next-focus patch plan that realizes it."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .flow import REDRAWN, NavFlow
from .hierarchy import ViewTree
from .regions import Region


@dataclass(frozen=True)
class PatchEdge:
    source: str
    target: str
    id_kind: str  # id kind of the source endpoint: "resource_id" or "node_id"
    target_id_kind: str = "resource_id"

    def to_dict(self) -> dict:
        return {"from": self.source, "to": self.target, "id_kind": self.id_kind,
                "to_id_kind": self.target_id_kind}


@dataclass(frozen=True)
class PatchPlan:
    edges: tuple[PatchEdge, ...]
    wraps: bool = True
    node_ids: tuple[tuple[str, str], ...] = ()  # (from node id, to node id) per edge
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    @property
    def pairs(self) -> list[tuple[str, str]]:
        return [(e.source, e.target) for e in self.edges]

    def to_dict(self) -> dict:
        return {"edges": [e.to_dict() for e in self.edges], "wraps": self.wraps}


def redraw_flow(
    tree: ViewTree,
    regions: Sequence[Region],
    filtered: NavFlow,
    diagnostics: list[str] | None = None,
) -> NavFlow:
    """Reorder ``filtered`` so every region is read to completion once entered.

    The walk follows the filtered (DFS) order. Reaching an unvisited node that
    belongs to a region emits all of that region's unvisited members in DFS
    order; other nodes are emitted as they come.
    """
    notes = diagnostics if diagnostics is not None else []
    present = set(filtered.order)
    index = tree.dfs_index
    owner: dict[str, tuple[str, ...]] = {}
    for region in regions:
        kept = []
        for m in region.members:
            if m in present:
                kept.append(m)
            else:
                notes.append(f"region member {m} is not in the filtered flow; skipped")
        kept.sort(key=index.__getitem__)
        for m in kept:
            if m in owner:
                notes.append(f"node {m} appears in more than one region; first region wins")
                continue
            owner[m] = tuple(kept)

    visited: set[str] = set()
    out: list[str] = []
    for node_id in filtered.order:
        if node_id in visited:
            continue
        for m in owner.get(node_id, (node_id,)):
            if m not in visited:
                visited.add(m)
                out.append(m)
    return NavFlow(tuple(out), REDRAWN)


def _identifiers(flow: NavFlow, tree: ViewTree, notes: list[str]) -> dict[str, tuple[str, str]]:
    counts = Counter(tree[n].resource_id for n in flow.order if tree[n].resource_id)
    ident: dict[str, tuple[str, str]] = {}
    for n in flow.order:
        rid = tree[n].resource_id
        if not rid:
            notes.append(f"{n}: empty resource_id; using node id")
            ident[n] = (n, "node_id")
        elif counts[rid] > 1:
            notes.append(f"{n}: resource_id {rid!r} is shared by {counts[rid]} flow members; using node id")
            ident[n] = (n, "node_id")
        else:
            ident[n] = (rid, "resource_id")
    return ident


def emit_patch_plan(flow: NavFlow, tree: ViewTree) -> PatchPlan:
    """Chain ``flow[i] -> flow[i+1]`` plus the wrap edge ``last -> first``."""
    if not flow.order:
        raise ValueError("cannot build a patch plan for an empty flow")
    notes: list[str] = []
    ident = _identifiers(flow, tree, notes)
    order = list(flow.order)
    pairs = list(zip(order, order[1:])) + [(order[-1], order[0])]
    edges = []
    for a, b in pairs:
        (ia, ka), (ib, kb) = ident[a], ident[b]
        edges.append(PatchEdge(ia, ib, ka, kb))
    return PatchPlan(tuple(edges), True, tuple(pairs), tuple(notes))


def patch_report(plan: PatchPlan, tree: ViewTree) -> str:
    """Plain-text listing of each rewiring, for developer review."""

    def describe(node_id: str) -> str:
        node = tree[node_id]
        label = node.text or node.content_desc
        label = f' "{label}"' if label else ""
        rid = f" [{node.resource_id}]" if node.resource_id else ""
        return f"{node_id} <{node.view_class}>{rid}{label}"

    lines = ["# next-focus rewiring (swipe right)", ""]
    for step, (a, b) in enumerate(plan.node_ids, start=1):
        wrap = "  (wrap-around)" if plan.wraps and step == len(plan.node_ids) else ""
        lines.append(f"{step:3d}. {describe(a)}")
        lines.append(f"     nextFocusRight -> {describe(b)}{wrap}")
    if plan.diagnostics:
        lines += ["", "# diagnostics"] + [f"- {d}" for d in plan.diagnostics]
    return "\n".join(lines) + "\n"
