"""View-hierarchy parsing and screenshot cropping.

Two dump formats are understood:

* ``uiautomator_xml``: the ``<hierarchy><node .../></hierarchy>`` document
  produced by ``uiautomator dump``; bounds are corner pairs
  ``"[x1,y1][x2,y2]"``.
* ``rgnf_json``: a JSON document mirroring :class:`ViewNode`; bounds are
  ``[[height, width], [x, y]]``.

Both are converted to the canonical ``(left, top, width, height)`` geometry at
the parse boundary.
"""

from __future__ import annotations

import io
import json
import re
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Iterator

import numpy as np

UIAUTOMATOR_XML = "uiautomator_xml"
RGNF_JSON = "rgnf_json"
FORMATS = (UIAUTOMATOR_XML, RGNF_JSON)

VISIBILITIES = ("visible", "invisible", "gone")

ROLES = ("textview", "imageview", "button", "viewgroup", "other")

# Checked in order against the lowercased, package-stripped class name.
_CONTAINER_SUFFIXES = (
    "layout",
    "viewgroup",
    "recyclerview",
    "listview",
    "gridview",
    "scrollview",
    "viewpager",
    "viewpager2",
    "cardview",
    "toolbar",
    "viewflipper",
    "viewswitcher",
    "radiogroup",
    "hierarchy",
)
_ROLE_SUFFIXES = (
    ("imageview", "imageview"),
    ("textview", "textview"),
    ("button", "button"),
)

_UIA_BOUNDS = re.compile(r"^\s*\[(-?\d+),(-?\d+)\]\[(-?\d+),(-?\d+)\]\s*$")


class HierarchyError(ValueError):
    """Base class for hierarchy input problems."""


class HierarchyParseError(HierarchyError):
    """The document is not well-formed in its declared format."""

    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = f" (line {line}, offset {offset})"
        super().__init__(message + where)


class BoundsValidationError(HierarchyError):
    """A node carries negative or inverted bounds."""

    def __init__(self, node: str, message: str):
        self.node = node
        super().__init__(f"node {node!r}: {message}")


class CropError(ValueError):
    pass


@dataclass(frozen=True)
class Bounds:
    left: int
    top: int
    width: int
    height: int

    def __post_init__(self) -> None:
        if self.left < 0 or self.top < 0:
            raise ValueError(f"negative origin in {self}")
        if self.width < 0 or self.height < 0:
            raise ValueError(f"negative extent in {self}")

    @classmethod
    def from_corners(cls, x1: int, y1: int, x2: int, y2: int) -> Bounds:
        return cls(x1, y1, x2 - x1, y2 - y1)

    @classmethod
    def from_size_origin(cls, pair: Any) -> Bounds:
        """Build from ``[[height, width], [x, y]]``."""
        (height, width), (x, y) = pair
        return cls(int(x), int(y), int(width), int(height))

    def to_size_origin(self) -> list[list[int]]:
        return [[self.height, self.width], [self.left, self.top]]

    def right(self) -> int:
        return self.left + self.width

    def bottom(self) -> int:
        return self.top + self.height

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.left + self.width / 2, self.top + self.height / 2)

    def intersection_area(self, other: Bounds) -> int:
        w = min(self.right(), other.right()) - max(self.left, other.left)
        h = min(self.bottom(), other.bottom()) - max(self.top, other.top)
        return max(w, 0) * max(h, 0)

    def union(self, other: Bounds) -> Bounds:
        left = min(self.left, other.left)
        top = min(self.top, other.top)
        return Bounds(left, top, max(self.right(), other.right()) - left,
                      max(self.bottom(), other.bottom()) - top)


def canonical_class(name: str) -> str:
    """``"android.widget.TextView"`` -> ``"textview"``."""
    name = name.strip().rsplit(".", 1)[-1]
    name = name.rsplit("$", 1)[-1]
    return name.lower()


def role_of(view_class: str) -> str:
    """Map a canonical class name onto one of :data:`ROLES`."""
    cls = canonical_class(view_class)
    if cls.endswith(_CONTAINER_SUFFIXES):
        return "viewgroup"
    for suffix, role in _ROLE_SUFFIXES:
        if cls.endswith(suffix):
            return role
    return "other"


@dataclass(frozen=True)
class ViewNode:
    id: str
    view_class: str
    bounds: Bounds
    resource_id: str = ""
    text: str = ""
    content_desc: str = ""
    focusable: bool = False
    enabled: bool = True
    clickable: bool = False
    visibility: str = "visible"
    children: tuple[ViewNode, ...] = ()

    @property
    def role(self) -> str:
        return role_of(self.view_class)

    @property
    def is_container(self) -> bool:
        return self.role == "viewgroup"

    def walk(self) -> Iterator[ViewNode]:
        """Document-order pre-order traversal of this subtree."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass(frozen=True)
class ViewTree:
    root: ViewNode
    screen: Bounds
    source_format: str = RGNF_JSON

    @cached_property
    def nodes(self) -> dict[str, ViewNode]:
        return {node.id: node for node in self.root.walk()}

    @cached_property
    def dfs_index(self) -> dict[str, int]:
        return {node.id: i for i, node in enumerate(self.root.walk())}

    @cached_property
    def parents(self) -> dict[str, str | None]:
        parents: dict[str, str | None] = {self.root.id: None}
        for node in self.root.walk():
            for child in node.children:
                parents[child.id] = node.id
        return parents

    def __getitem__(self, node_id: str) -> ViewNode:
        return self.nodes[node_id]

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.nodes

    def __iter__(self) -> Iterator[ViewNode]:
        return self.root.walk()

    def __len__(self) -> int:
        return len(self.nodes)


# -- parsing -----------------------------------------------------------------


def detect_format(doc: bytes | str) -> str:
    text = doc.decode("utf-8", "replace") if isinstance(doc, bytes) else doc
    head = text.lstrip("﻿ \t\r\n")[:1]
    if head == "<":
        return UIAUTOMATOR_XML
    if head in "{[":
        return RGNF_JSON
    raise HierarchyParseError("cannot detect hierarchy format", 1, 0)


def parse_hierarchy(doc: bytes | str, format: str | None = None) -> ViewTree:
    """Parse a hierarchy dump into a :class:`ViewTree`.

    ``format`` is one of :data:`FORMATS`; ``None`` sniffs the first
    non-blank character.
    """
    if isinstance(doc, str):
        doc = doc.encode("utf-8")
    if not doc.strip():
        raise HierarchyParseError("empty document", 1, 0)
    if format is None:
        format = detect_format(doc)
    if format == UIAUTOMATOR_XML:
        return _parse_uiautomator(doc)
    if format == RGNF_JSON:
        return _parse_rgnf_json(doc)
    raise ValueError(f"unknown hierarchy format {format!r}")


def load_hierarchy(path: str | Path, format: str | None = None) -> ViewTree:
    return parse_hierarchy(Path(path).read_bytes(), format)


def _bool(value: Any, default: bool = False) -> bool:
    if value is None:
        return default
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() == "true"


def _parse_uiautomator(doc: bytes) -> ViewTree:
    try:
        root_el = ET.fromstring(doc)
    except ET.ParseError as exc:
        line, offset = exc.position
        raise HierarchyParseError(f"malformed uiautomator XML: {exc.msg}", line, offset) from None

    counter = iter(range(1 << 62))

    def convert(el: ET.Element) -> ViewNode:
        node_id = f"n{next(counter)}"
        attrib = el.attrib
        raw = attrib.get("bounds", "[0,0][0,0]")
        match = _UIA_BOUNDS.match(raw)
        if match is None:
            raise BoundsValidationError(node_id, f"unreadable bounds {raw!r}")
        x1, y1, x2, y2 = map(int, match.groups())
        if min(x1, y1, x2, y2) < 0:
            raise BoundsValidationError(node_id, f"negative bounds {raw!r}")
        if x2 < x1 or y2 < y1:
            raise BoundsValidationError(node_id, f"inverted bounds {raw!r}")
        visible = _bool(attrib.get("visible-to-user"), default=True)
        children = tuple(convert(child) for child in el if child.tag == "node")
        return ViewNode(
            id=node_id,
            view_class=canonical_class(attrib.get("class", "")),
            bounds=Bounds.from_corners(x1, y1, x2, y2),
            resource_id=attrib.get("resource-id", ""),
            text=attrib.get("text", ""),
            content_desc=attrib.get("content-desc", ""),
            focusable=_bool(attrib.get("focusable")),
            enabled=_bool(attrib.get("enabled"), default=True),
            clickable=_bool(attrib.get("clickable")),
            visibility="visible" if visible else "invisible",
            children=children,
        )

    if root_el.tag == "node":
        tops = [root_el]
    else:
        tops = [el for el in root_el if el.tag == "node"]
    if not tops:
        raise HierarchyParseError("uiautomator XML contains no <node> elements", 1, 0)

    if len(tops) == 1:
        root = convert(tops[0])
    else:
        kids = tuple(convert(el) for el in tops)
        extent = kids[0].bounds
        for kid in kids[1:]:
            extent = extent.union(kid.bounds)
        root = ViewNode(id="hierarchy", view_class="hierarchy", bounds=extent, children=kids)
    return ViewTree(root=root, screen=root.bounds, source_format=UIAUTOMATOR_XML)


def _parse_rgnf_json(doc: bytes) -> ViewTree:
    try:
        data = json.loads(doc)
    except json.JSONDecodeError as exc:
        raise HierarchyParseError(f"malformed rgnf_json: {exc.msg}", exc.lineno, exc.colno) from None
    except UnicodeDecodeError as exc:
        raise HierarchyParseError(f"rgnf_json is not UTF-8: {exc.reason}", 1, exc.start) from None
    if not isinstance(data, dict) or "root" not in data:
        raise HierarchyParseError("rgnf_json document must be an object with a 'root' node", 1, 0)

    counter = iter(range(1 << 62))
    seen: set[str] = set()

    def convert(obj: Any, path: str) -> ViewNode:
        if not isinstance(obj, dict):
            raise HierarchyParseError(f"node at {path} is not an object")
        node_id = str(obj.get("id") or f"n{next(counter)}")
        if node_id in seen:
            raise HierarchyParseError(f"duplicate node id {node_id!r} at {path}")
        seen.add(node_id)
        bounds = _json_bounds(obj.get("bounds"), node_id)
        visibility = str(obj.get("visibility", "visible")).lower()
        if visibility not in VISIBILITIES:
            raise HierarchyParseError(f"node {node_id!r}: unknown visibility {visibility!r}")
        kids = obj.get("children", [])
        if not isinstance(kids, list):
            raise HierarchyParseError(f"node {node_id!r}: 'children' must be a list")
        children = tuple(convert(kid, f"{path}/{i}") for i, kid in enumerate(kids))
        return ViewNode(
            id=node_id,
            view_class=canonical_class(str(obj.get("class", ""))),
            bounds=bounds,
            resource_id=str(obj.get("resource_id", "")),
            text=str(obj.get("text", "")),
            content_desc=str(obj.get("content_desc", "")),
            focusable=_bool(obj.get("focusable")),
            enabled=_bool(obj.get("enabled"), default=True),
            clickable=_bool(obj.get("clickable")),
            visibility=visibility,
            children=children,
        )

    root = convert(data["root"], "root")
    screen = _json_bounds(data["screen"], "screen") if "screen" in data else root.bounds
    return ViewTree(root=root, screen=screen, source_format=RGNF_JSON)


def _json_bounds(raw: Any, node_id: str) -> Bounds:
    try:
        (height, width), (x, y) = raw
        height, width, x, y = (int(v) for v in (height, width, x, y))
    except (TypeError, ValueError):
        raise BoundsValidationError(node_id, f"bounds must be [[height,width],[x,y]], got {raw!r}") from None
    if min(x, y) < 0:
        raise BoundsValidationError(node_id, f"negative origin {raw!r}")
    if min(height, width) < 0:
        raise BoundsValidationError(node_id, f"inverted (negative) extent {raw!r}")
    return Bounds(x, y, width, height)


# -- serialization -----------------------------------------------------------


def node_to_dict(node: ViewNode) -> dict[str, Any]:
    return {
        "id": node.id,
        "class": node.view_class,
        "bounds": node.bounds.to_size_origin(),
        "resource_id": node.resource_id,
        "text": node.text,
        "content_desc": node.content_desc,
        "focusable": node.focusable,
        "enabled": node.enabled,
        "clickable": node.clickable,
        "visibility": node.visibility,
        "children": [node_to_dict(child) for child in node.children],
    }


def tree_to_dict(tree: ViewTree) -> dict[str, Any]:
    return {"format": RGNF_JSON, "screen": tree.screen.to_size_origin(), "root": node_to_dict(tree.root)}


def dumps_tree(tree: ViewTree) -> str:
    return json.dumps(tree_to_dict(tree), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- screenshots -------------------------------------------------------------


def to_luminance(pixels: np.ndarray) -> np.ndarray:
    """Convert a raster to float luminance in ``[0, 1]``.

    8-bit input is scaled by 1/255; RGB(A) uses Y = 0.299R + 0.587G + 0.114B.
    """
    arr = np.asarray(pixels)
    scale = 255.0 if arr.dtype == np.uint8 else 1.0
    arr = arr.astype(np.float64) / scale
    if arr.ndim == 3:
        arr = arr[..., 0] * 0.299 + arr[..., 1] * 0.587 + arr[..., 2] * 0.114
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D or 3-D raster, got shape {arr.shape}")
    return np.clip(arr, 0.0, 1.0)


def load_screenshot(source: str | Path | bytes) -> np.ndarray:
    """Read a PNG (grayscale or RGB) as a float luminance array."""
    from PIL import Image

    fp = io.BytesIO(source) if isinstance(source, bytes) else source
    with Image.open(fp) as img:
        if img.mode not in ("L", "RGB"):
            img = img.convert("RGB")
        return to_luminance(np.asarray(img))


def crop_component(screenshot: np.ndarray, b: Bounds) -> np.ndarray:
    """Return the ``b.height x b.width`` sub-image under ``b``.

    A box that leaves the image is clamped with a warning when at least half
    of its area overlaps the image; otherwise :class:`CropError` is raised.
    """
    height, width = screenshot.shape[:2]
    image_box = Bounds(0, 0, width, height)
    overlap = b.intersection_area(image_box)
    if b.area == 0:
        raise CropError(f"zero-area bounds {b}")
    if b.right() <= width and b.bottom() <= height:
        return screenshot[b.top:b.bottom(), b.left:b.right()]
    if 2 * overlap < b.area:
        raise CropError(f"{b} overlaps the {width}x{height} image by {overlap} of {b.area} px")
    warnings.warn(f"clamping {b} to the {width}x{height} image", stacklevel=2)
    return screenshot[b.top:min(b.bottom(), height), b.left:min(b.right(), width)]
