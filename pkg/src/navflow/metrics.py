"""Flow scoring against ground truth: rank-distance similarity and reachability."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .flow import FOCUSABLE, REACHABLE_SILENT, VISIBLE, NavFlow, classify_focusability, classify_visibility
from .hierarchy import ViewTree


@dataclass(frozen=True)
class SimilarityReport:
    s: float
    truth_len: int
    matched_len: int
    per_node_rank_delta: tuple[tuple[str, int], ...]
    missing: tuple[str, ...] = ()
    extra: tuple[str, ...] = ()
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "truth_len": self.truth_len,
            "matched_len": self.matched_len,
            "per_node_rank_delta": [[n, d] for n, d in self.per_node_rank_delta],
            "missing": list(self.missing),
            "extra": list(self.extra),
        }


@dataclass(frozen=True)
class ReachabilityReport:
    n: int
    m: int

    @property
    def p(self) -> float:
        return self.n / self.m

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "p": self.p}


def sequence_similarity(truth: NavFlow, candidate: NavFlow) -> SimilarityReport:
    """``S = 1 / (1 + sqrt(sum (x_i - y_i)^2))`` over the truth nodes.

    ``x_i`` is the 1-based truth rank and ``y_i`` the 1-based position of the
    same node in ``candidate``. Truth nodes absent from the candidate take the
    tail ranks ``len(candidate) + 1, + 2, ...`` in truth order. Candidate-only
    nodes still occupy positions but are otherwise ignored.
    """
    if not truth.order:
        raise ValueError("ground truth flow is empty")
    position = {node_id: i for i, node_id in enumerate(candidate.order, start=1)}
    truth_set = set(truth.order)
    tail = len(candidate.order) + 1
    total = 0
    deltas = []
    missing = []
    for x, node_id in enumerate(truth.order, start=1):
        y = position.get(node_id)
        if y is None:
            y = tail
            tail += 1
            missing.append(node_id)
        deltas.append((node_id, y - x))
        total += (x - y) ** 2
    extra = tuple(n for n in candidate.order if n not in truth_set)
    notes = []
    if missing:
        notes.append(f"{len(missing)} truth node(s) missing from candidate, penalized with tail ranks")
    if extra:
        notes.append(f"{len(extra)} candidate node(s) not in truth, ignored")
    return SimilarityReport(
        s=1.0 / (1.0 + math.sqrt(total)),
        truth_len=len(truth.order),
        matched_len=len(truth.order) - len(missing),
        per_node_rank_delta=tuple(deltas),
        missing=tuple(missing),
        extra=extra,
        diagnostics=tuple(notes),
    )


def touchable_ids(tree: ViewTree) -> list[str]:
    """Visible components that touch exploration can land on."""
    return [
        node.id
        for node in tree.root.walk()
        if not node.is_container
        and classify_visibility(node) == VISIBLE
        and classify_focusability(node) in (FOCUSABLE, REACHABLE_SILENT)
    ]


def reachability(tree: ViewTree, flow: NavFlow) -> ReachabilityReport:
    """``n`` announced components on the swipe chain over ``m`` touchable ones.

    Reachable-silent nodes count toward ``m`` but never toward ``n``: swiping
    onto them announces nothing.
    """
    touchable = touchable_ids(tree)
    if not touchable:
        raise ValueError("no touchable components")
    eligible = {n for n in touchable if classify_focusability(tree[n]) == FOCUSABLE}
    n = sum(1 for node_id in flow.order if node_id in eligible)
    return ReachabilityReport(n, len(touchable))
