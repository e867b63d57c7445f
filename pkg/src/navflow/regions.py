"""Gestalt grouping of components into regions.

Initial-regions hold the non-container nodes whose nearest container ancestor
is the same viewgroup. Inside each initial-region, components are grouped by
proximity (edge gaps within ``[min_gap, max_gap]``) and by similarity (equal
role plus a small normalized Hausdorff distance between edge shapes). The two
groupings are then unioned wherever they overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .hierarchy import Bounds, CropError, ViewNode, ViewTree, crop_component
from .vision import NoShapeDetected, VisionConfig, detect_shape, normalized_hausdorff

INITIAL = "initial"
PROXIMAL = "proximal"
SIMILAR = "similar"
MERGED = "merged"
KINDS = (INITIAL, PROXIMAL, SIMILAR, MERGED)


@dataclass(frozen=True)
class Region:
    members: tuple[str, ...]
    kind: str
    parent_initial: str | None = None
    # id of the container node that scopes the region
    container: str | None = None
    low_confidence: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("a region needs at least one member")
        if self.kind not in KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.members

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "members": list(self.members), "parent_initial": self.parent_initial}
        if self.low_confidence:
            out["low_confidence"] = True
        return out


@dataclass(frozen=True)
class GroupingConfig:
    min_gap: float = 0
    max_gap: float = 15
    vision: VisionConfig = field(default_factory=VisionConfig)
    strict_proximity: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.min_gap <= self.max_gap:
            raise ValueError("need 0 <= min_gap <= max_gap")


class DisjointSet:
    def __init__(self, items: Iterable[str] = ()):
        self.parent: dict[str, str] = {}
        for item in items:
            self.add(item)

    def add(self, item: str) -> None:
        self.parent.setdefault(item, item)

    def find(self, item: str) -> str:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self, order: Sequence[str]) -> list[list[str]]:
        """Components, each listed in ``order``, sorted by first appearance."""
        buckets: dict[str, list[str]] = {}
        for item in order:
            buckets.setdefault(self.find(item), []).append(item)
        return list(buckets.values())


def _dfs_sorted(ids: Iterable[str], tree: ViewTree) -> list[str]:
    index = tree.dfs_index
    return sorted(set(ids), key=index.__getitem__)


def initial_regions(tree: ViewTree, eligible: Iterable[str] | None = None) -> list[Region]:
    """One region per container, holding the leaves it owns directly.

    A non-container node belongs to its nearest container ancestor; nested
    containers start their own region. Nodes without any container ancestor
    share a region scoped by the root. ``eligible`` restricts membership
    (e.g. to the nodes surviving filtering).
    """
    allowed = None if eligible is None else set(eligible)
    owned: dict[str, list[str]] = {}
    order: list[str] = []

    def visit(node: ViewNode, owner: str) -> None:
        if node.is_container:
            owner = node.id
            if owner not in owned:
                owned[owner] = []
                order.append(owner)
        elif allowed is None or node.id in allowed:
            if owner not in owned:
                owned[owner] = []
                order.append(owner)
            owned[owner].append(node.id)
        for child in node.children:
            visit(child, owner)

    visit(tree.root, tree.root.id)
    return [Region(tuple(owned[c]), INITIAL, None, c) for c in order if owned[c]]


def horizontal_gap(j: Bounds, k: Bounds) -> float:
    """``|k.left - j.left - j.width|``: j's right edge to k's left edge."""
    return abs(k.left - j.left - j.width)


def edge_gap(j: Bounds, k: Bounds) -> float:
    """Euclidean gap between the closest edges of two boxes, 0 on overlap."""
    dx = max(k.left - j.right(), j.left - k.right(), 0)
    dy = max(k.top - j.bottom(), j.top - k.bottom(), 0)
    return math.hypot(dx, dy)


def _within(gap: float, cfg: GroupingConfig) -> bool:
    return cfg.min_gap <= gap <= cfg.max_gap


def proximal_regions(region: Region, tree: ViewTree, cfg: GroupingConfig = GroupingConfig()) -> list[Region]:
    members = _dfs_sorted(region.members, tree)
    ds = DisjointSet(members)
    for a_pos, a in enumerate(members):
        for b in members[a_pos + 1:]:
            ba, bb = tree[a].bounds, tree[b].bounds
            if cfg.strict_proximity:
                # both orientations are tried
                near = _within(horizontal_gap(ba, bb), cfg) or _within(horizontal_gap(bb, ba), cfg)
            else:
                near = _within(edge_gap(ba, bb), cfg)
            if near:
                ds.union(a, b)
    return [Region(tuple(g), PROXIMAL, region.container, region.container) for g in ds.groups(members)]


def similar_regions(
    region: Region,
    tree: ViewTree,
    screenshot: np.ndarray | None = None,
    cfg: GroupingConfig = GroupingConfig(),
    diagnostics: list[str] | None = None,
) -> list[Region]:
    """Group same-role members whose edge shapes nearly coincide.

    Textview pairs are never shape-compared (proximity covers them). Without
    a screenshot, or for a member whose shape cannot be detected, role
    equality alone decides and the resulting region is flagged
    ``low_confidence``.
    """
    notes = diagnostics if diagnostics is not None else []
    members = _dfs_sorted(region.members, tree)
    shapes: dict[str, object] = {}
    fallback: set[str] = set()
    if screenshot is None:
        fallback.update(members)
    else:
        for node_id in members:
            node = tree[node_id]
            if node.role == "textview":
                continue
            try:
                shapes[node_id] = detect_shape(crop_component(screenshot, node.bounds), cfg.vision,
                                               extent=node.bounds)
            except (NoShapeDetected, CropError, ValueError) as exc:
                fallback.add(node_id)
                notes.append(f"{node_id}: shape unavailable ({exc}); using role equality")

    ds = DisjointSet(members)
    weak: set[str] = set()
    for a_pos, a in enumerate(members):
        role = tree[a].role
        if role == "textview":
            continue
        for b in members[a_pos + 1:]:
            if tree[b].role != role:
                continue
            if a in fallback or b in fallback:
                ds.union(a, b)
                weak.update((a, b))
            elif normalized_hausdorff(shapes[a], shapes[b]) <= cfg.vision.hausdorff_threshold:
                ds.union(a, b)
    out = []
    for group in ds.groups(members):
        out.append(Region(tuple(group), SIMILAR, region.container, region.container,
                          low_confidence=len(group) > 1 and bool(weak.intersection(group))))
    return out


def merge_overlapping(proximal: Sequence[Region], similar: Sequence[Region], tree: ViewTree | None = None) -> list[Region]:
    """Union regions that share members, across both groupings.

    A connected cluster made of a single distinct region (ignoring singletons
    it absorbs) passes through unchanged; anything else becomes ``merged``.
    Output regions list members in DFS order (input order when no tree is
    given) and are sorted by their earliest member.
    """
    inputs = list(proximal) + list(similar)
    if tree is not None:
        index = tree.dfs_index
        rank = index.__getitem__
    else:
        seen: dict[str, int] = {}
        for region in inputs:
            for m in region.members:
                seen.setdefault(m, len(seen))
        rank = seen.__getitem__

    ds = DisjointSet()
    for region in inputs:
        for m in region.members:
            ds.add(m)
        for m in region.members[1:]:
            ds.union(region.members[0], m)

    clusters: dict[str, list[Region]] = {}
    for region in inputs:
        clusters.setdefault(ds.find(region.members[0]), []).append(region)

    out = []
    for contributors in clusters.values():
        members = sorted({m for r in contributors for m in r.members}, key=rank)
        effective = [r for r in contributors if len(r) > 1] or contributors
        distinct: list[Region] = []
        for r in effective:
            if not any(set(r.members) == set(d.members) for d in distinct):
                distinct.append(r)
        first = distinct[0]
        if len(distinct) == 1:
            out.append(replace(first, members=tuple(members)))
        else:
            out.append(Region(tuple(members), MERGED, first.parent_initial, first.container,
                              low_confidence=any(r.low_confidence for r in distinct)))
    out.sort(key=lambda r: rank(r.members[0]))
    return out


@dataclass
class Grouping:
    initial: list[Region]
    proximal: list[Region]
    similar: list[Region]
    final: list[Region]
    diagnostics: list[str] = field(default_factory=list)
    shape_source: str = "screenshot"


def group_regions(
    tree: ViewTree,
    screenshot: np.ndarray | None = None,
    cfg: GroupingConfig = GroupingConfig(),
    eligible: Iterable[str] | None = None,
) -> Grouping:
    """Run initial, proximal and similar grouping, then merge overlaps."""
    diagnostics: list[str] = []
    initial = initial_regions(tree, eligible)
    proximal: list[Region] = []
    similar: list[Region] = []
    for region in initial:
        proximal.extend(proximal_regions(region, tree, cfg))
        similar.extend(similar_regions(region, tree, screenshot, cfg, diagnostics))
    if screenshot is None:
        diagnostics.append("no screenshot: similarity grouping uses view roles only (low confidence)")
    final = merge_overlapping(proximal, similar, tree)
    return Grouping(initial, proximal, similar, final, diagnostics,
                    "screenshot" if screenshot is not None else "roles_only")
