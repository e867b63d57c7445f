"""Baseline swipe-right flow, visibility/focusability filtering and reconnection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .hierarchy import ViewNode, ViewTree

BASELINE = "baseline"
FILTERED = "filtered"
REDRAWN = "redrawn"
GROUND_TRUTH = "ground_truth"
ORIGINS = (BASELINE, FILTERED, REDRAWN, GROUND_TRUTH)

VISIBLE = "visible"
INVISIBLE = "invisible"

FOCUSABLE = "focusable"
UNFOCUSABLE = "unfocusable"
REACHABLE_SILENT = "reachable_silent"

_HIDDEN_CLASS_MARKERS = ("hidden-element", "invisible")


@dataclass(frozen=True)
class NavFlow:
    order: tuple[str, ...]
    origin: str = BASELINE

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(self.order))
        if len(set(self.order)) != len(self.order):
            raise ValueError("navigation flow contains duplicate node ids")
        if self.origin not in ORIGINS:
            raise ValueError(f"unknown flow origin {self.origin!r}")

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def check(self, tree: ViewTree) -> None:
        """Raise ``KeyError`` listing ids that do not resolve in ``tree``."""
        missing = [node_id for node_id in self.order if node_id not in tree]
        if missing:
            raise KeyError(f"unresolved node ids: {missing}")

    def to_dict(self) -> dict:
        return {"origin": self.origin, "order": list(self.order)}

    @classmethod
    def from_dict(cls, data: dict, origin: str | None = None) -> NavFlow:
        if isinstance(data, list):
            return cls(tuple(str(x) for x in data), origin or GROUND_TRUTH)
        return cls(tuple(str(x) for x in data["order"]), origin or data.get("origin", GROUND_TRUTH))


@dataclass(frozen=True)
class FilterReport:
    removed_invisible: tuple[str, ...] = ()
    removed_unfocusable: tuple[str, ...] = ()
    removed_silent: tuple[str, ...] = ()
    reconnections: tuple[tuple[str, str], ...] = ()

    @property
    def removed(self) -> tuple[str, ...]:
        return self.removed_invisible + self.removed_unfocusable + self.removed_silent

    def to_dict(self) -> dict:
        return {
            "removed_invisible": list(self.removed_invisible),
            "removed_unfocusable": list(self.removed_unfocusable),
            "removed_silent": list(self.removed_silent),
            "reconnections": [list(pair) for pair in self.reconnections],
        }


def extract_baseline_flow(tree: ViewTree) -> NavFlow:
    """Every non-container node in document-order DFS."""
    return NavFlow(tuple(node.id for node in tree.root.walk() if not node.is_container), BASELINE)


def classify_visibility(node: ViewNode) -> str:
    if node.visibility in ("gone", "invisible"):
        return INVISIBLE
    if any(marker in node.view_class for marker in _HIDDEN_CLASS_MARKERS):
        return INVISIBLE
    # cannot respond to events or gestures
    if not node.enabled and not node.clickable:
        return INVISIBLE
    if node.bounds.area == 0:
        return INVISIBLE
    return VISIBLE


def classify_focusability(node: ViewNode) -> str:
    if node.focusable and node.enabled:
        return FOCUSABLE
    if node.enabled and not node.focusable:
        return REACHABLE_SILENT
    return UNFOCUSABLE


def is_announced(node: ViewNode) -> bool:
    """Visible and focusable: a node the screen reader lands on and reads."""
    return classify_visibility(node) == VISIBLE and classify_focusability(node) == FOCUSABLE


def filter_flow(flow: NavFlow, tree: ViewTree) -> tuple[NavFlow, FilterReport]:
    """Drop invisible, unfocusable and reachable-silent nodes from ``flow``.

    Each run of deleted nodes sitting between two survivors ``i`` and ``k``
    is bridged by a reconnection ``(i, k)``. Leading and trailing runs are
    dropped without one.
    """
    invisible: list[str] = []
    unfocusable: list[str] = []
    silent: list[str] = []
    kept: list[str] = []
    reconnections: list[tuple[str, str]] = []
    gap = False
    for node_id in flow.order:
        node = tree[node_id]
        if classify_visibility(node) == INVISIBLE:
            invisible.append(node_id)
        else:
            focus = classify_focusability(node)
            if focus == FOCUSABLE:
                if gap and kept:
                    reconnections.append((kept[-1], node_id))
                kept.append(node_id)
                gap = False
                continue
            (silent if focus == REACHABLE_SILENT else unfocusable).append(node_id)
        gap = True
    report = FilterReport(tuple(invisible), tuple(unfocusable), tuple(silent), tuple(reconnections))
    return NavFlow(tuple(kept), FILTERED), report


def announced_ids(tree: ViewTree, ids: Iterable[str]) -> list[str]:
    return [node_id for node_id in ids if is_announced(tree[node_id])]
