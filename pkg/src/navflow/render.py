"""SVG overlays: numbered arrows between component centres in flow order.

The redrawn flow is drawn solid, the baseline dashed. With a screenshot the
arrows sit on top of the embedded image; without one, components are drawn
as schematic boxes.
"""

from __future__ import annotations

import base64
from typing import Sequence
from xml.sax.saxutils import escape

from .flow import NavFlow
from .hierarchy import Bounds, ViewTree
from .regions import Region

REDRAWN_COLOR = "#d62728"
BASELINE_COLOR = "#1f77b4"
REGION_COLORS = {"proximal": "#2ca02c", "similar": "#ff7f0e", "merged": "#9467bd", "initial": "#7f7f7f"}


def _fmt(v: float) -> str:
    return f"{v:.1f}"


def _arrows(tree: ViewTree, flow: NavFlow, color: str, dashed: bool, marker: str) -> list[str]:
    out = []
    dash = ' stroke-dasharray="8,5"' if dashed else ""
    centers = [tree[n].bounds.center for n in flow.order]
    for (x1, y1), (x2, y2) in zip(centers, centers[1:]):
        out.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="3"{dash} marker-end="url(#{marker})"/>'
        )
    for step, (x, y) in enumerate(centers, start=1):
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="11" fill="{color}" fill-opacity="0.85"/>')
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y + 4)}" font-size="12" font-family="sans-serif" '
            f'text-anchor="middle" fill="white">{step}</text>'
        )
    return out


def _region_box(tree: ViewTree, region: Region) -> Bounds:
    box = tree[region.members[0]].bounds
    for m in region.members[1:]:
        box = box.union(tree[m].bounds)
    return box


def render_overlay(
    tree: ViewTree,
    redrawn: NavFlow,
    baseline: NavFlow | None = None,
    screenshot_png: bytes | None = None,
    regions: Sequence[Region] = (),
) -> str:
    screen = tree.screen
    width, height = screen.right(), screen.bottom()
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        "<defs>",
    ]
    for name, color in (("arrow-redrawn", REDRAWN_COLOR), ("arrow-baseline", BASELINE_COLOR)):
        parts.append(
            f'<marker id="{name}" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" '
            f'markerHeight="6" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="{color}"/></marker>'
        )
    parts.append("</defs>")

    if screenshot_png is not None:
        data = base64.b64encode(screenshot_png).decode("ascii")
        parts.append(f'<image x="0" y="0" width="{width}" height="{height}" '
                     f'xlink:href="data:image/png;base64,{data}"/>')
    else:
        parts.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>')
        for node in tree.root.walk():
            if node.is_container:
                continue
            b = node.bounds
            parts.append(f'<rect x="{b.left}" y="{b.top}" width="{b.width}" height="{b.height}" '
                         f'fill="#f2f2f2" stroke="#444" stroke-width="1"/>')
            label = node.text or node.content_desc or node.id
            parts.append(f'<text x="{b.left + 3}" y="{b.top + 13}" font-size="11" '
                         f'font-family="sans-serif" fill="#333">{escape(label)}</text>')

    for region in regions:
        if len(region) < 2:
            continue
        b = _region_box(tree, region)
        color = REGION_COLORS.get(region.kind, "#7f7f7f")
        parts.append(f'<rect x="{b.left - 4}" y="{b.top - 4}" width="{b.width + 8}" height="{b.height + 8}" '
                     f'fill="none" stroke="{color}" stroke-width="2" stroke-dasharray="3,3">'
                     f'<title>{escape(region.kind)}: {escape(" ".join(region.members))}</title></rect>')

    if baseline is not None:
        parts.append('<g class="baseline" opacity="0.7">')
        parts += _arrows(tree, baseline, BASELINE_COLOR, True, "arrow-baseline")
        parts.append("</g>")
    parts.append('<g class="redrawn">')
    parts += _arrows(tree, redrawn, REDRAWN_COLOR, False, "arrow-redrawn")
    parts.append("</g>")
    parts.append(f"<desc>{escape('redrawn: ' + ' -> '.join(redrawn.order))}</desc>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
