"""Regenerate the bundled fixture corpus.

    python tests/fixtures/build_fixtures.py

Every output is deterministic; ``test_fixtures_are_current`` checks that the
committed files match a fresh build.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

from PIL import Image, ImageDraw

HERE = Path(__file__).resolve().parent


def node(id, cls, x, y, w, h, children=(), **attrs):
    out = {
        "id": id,
        "class": cls,
        "bounds": [[h, w], [x, y]],
        "resource_id": attrs.pop("resource_id", f"com.example:id/{id}"),
        "text": attrs.pop("text", ""),
        "focusable": attrs.pop("focusable", True),
        "enabled": attrs.pop("enabled", True),
        "clickable": attrs.pop("clickable", True),
        "visibility": attrs.pop("visibility", "visible"),
        "children": list(children),
    }
    assert not attrs, attrs
    return out


def group(id, x, y, w, h, children, cls="android.widget.LinearLayout"):
    return node(id, cls, x, y, w, h, children, resource_id="", focusable=False, clickable=False)


def doc(root, width, height):
    return {"format": "rgnf_json", "screen": [[height, width], [0, 0]], "root": root}


# -- profile screen: stats pairs, a settings list of toggles, a nav bar ------


def profile_screen():
    header = group("header", 0, 0, 1080, 160, [
        node("button1", "android.widget.ImageButton", 20, 40, 96, 96, text="Back"),
        node("button2", "android.widget.ImageButton", 130, 40, 96, 96, text="Share"),
        node("text3", "android.widget.TextView", 300, 56, 480, 64, text="Profile"),
        # decorative divider: enabled but never focusable
        node("divider", "android.view.View", 0, 150, 1080, 4, resource_id="", focusable=False, clickable=False),
    ])
    stats = group("stats", 0, 200, 1080, 200, [
        node("text4", "android.widget.TextView", 100, 220, 200, 80, text="128"),
        node("text5", "android.widget.TextView", 440, 220, 200, 80, text="2.4k"),
        node("text6", "android.widget.TextView", 780, 220, 200, 80, text="310"),
        node("text7", "android.widget.TextView", 100, 310, 200, 60, text="Posts"),
        node("text8", "android.widget.TextView", 440, 310, 200, 60, text="Followers"),
        node("text9", "android.widget.TextView", 780, 310, 200, 60, text="Following"),
    ])
    banner = group("banner", 0, 440, 1080, 320, [
        node("image10", "android.widget.ImageView", 40, 450, 1000, 300, text="", clickable=True),
    ], cls="android.widget.FrameLayout")
    details = group("details", 0, 920, 1080, 100, [
        node("text15", "android.widget.TextView", 40, 940, 600, 60, text="Account"),
        node("button16", "android.widget.Button", 700, 930, 160, 80, text="Edit"),
        node("button17", "android.widget.Button", 880, 930, 160, 80, text="Delete"),
    ])
    settings = group("settings", 0, 780, 1080, 620, [
        node("button11", "android.widget.CompoundButton", 40, 800, 1000, 100, text="Notifications"),
        details,
        node("button12", "android.widget.CompoundButton", 40, 1040, 1000, 100, text="Dark mode"),
        # content revealed only after toggling button12
        node("theme_options", "android.widget.TextView", 40, 1140, 1000, 0, text="Theme options",
             visibility="gone"),
        node("button13", "android.widget.CompoundButton", 40, 1160, 1000, 100, text="Privacy"),
        node("button14", "android.widget.CompoundButton", 40, 1280, 1000, 100, text="Help"),
    ])
    navbar = group("navbar", 0, 1760, 1080, 160, [
        node("image18", "android.widget.ImageView", 90, 1790, 100, 100, text="Home"),
        node("image19", "android.widget.ImageView", 490, 1790, 100, 100, text="Search"),
        node("image20", "android.widget.ImageView", 890, 1790, 100, 100, text="Me"),
    ])
    root = group("root", 0, 0, 1080, 1920, [header, stats, banner, settings, navbar],
                 cls="android.widget.FrameLayout")
    return doc(root, 1080, 1920)


PROFILE_TRUTH = [
    "button1", "button2", "text3",
    "text4", "text7", "text5", "text8", "text6", "text9",
    "image10",
    "button11", "button12", "button13", "button14",
    "text15", "button16", "button17",
    "image18", "image19", "image20",
]


def render_profile_png(data) -> bytes:
    img = Image.new("L", (1080, 1920), 255)
    draw = ImageDraw.Draw(img)

    def walk(n):
        yield n
        for c in n["children"]:
            yield from walk(c)

    for n in walk(data["root"]):
        (h, w), (x, y) = n["bounds"]
        if n["visibility"] != "visible" or h == 0 or w == 0:
            continue
        cls = n["class"].rsplit(".", 1)[-1]
        box = (x, y, x + w - 1, y + h - 1)
        if cls == "CompoundButton":
            draw.rounded_rectangle(box, radius=24, fill=235, outline=60, width=3)
            # label bar, its length follows the text
            bar = 18 * len(n["text"])
            draw.rectangle((x + 30, y + 40, x + 30 + bar, y + 60), fill=40)
            # switch knob
            draw.rounded_rectangle((x + w - 130, y + 30, x + w - 30, y + 70), radius=20, fill=120)
        elif cls in ("Button", "ImageButton"):
            draw.rounded_rectangle(box, radius=16, fill=200, outline=50, width=3)
            draw.rectangle((x + w // 4, y + h // 2 - 6, x + 3 * w // 4, y + h // 2 + 6), fill=30)
        elif cls == "ImageView":
            if w > 500:
                draw.rectangle(box, fill=150)
                draw.ellipse((x + 400, y + 50, x + 600, y + 250), fill=90)
            else:
                draw.ellipse((x + 10, y + 10, x + w - 10, y + h - 10), outline=40, width=6)
        elif cls == "TextView":
            bar = min(w - 10, 22 * len(n["text"]))
            draw.rectangle((x + 5, y + h // 3, x + 5 + bar, y + 2 * h // 3), fill=20)
        elif cls == "View":
            draw.rectangle(box, fill=210)
    buf = io.BytesIO()
    img.save(buf, format="PNG", optimize=False, compress_level=9)
    return buf.getvalue()


# -- toolbar row: the five-component proximity example ----------------------


def toolbar_row():
    row = group("row", 0, 530, 1080, 70, [
        node("text5", "android.widget.TextView", 25, 545, 256, 28, text="Daily summary"),
        node("button6", "android.widget.ImageButton", 286, 545, 28, 28, text="Info"),
        node("button7", "android.widget.ImageButton", 542, 545, 38, 38, text="Refresh"),
        node("text8", "android.widget.TextView", 872, 545, 128, 28, text="Sort by"),
        node("button9", "android.widget.ImageButton", 1004, 545, 28, 28, text="Open"),
    ])
    root = group("root", 0, 0, 1080, 1920, [row], cls="android.widget.FrameLayout")
    return doc(root, 1080, 1920)


# -- product grid: names above prices, read names-first by default ----------


def product_grid():
    names = ["Latte", "Mocha", "Espresso", "Green tea"]
    prices = ["4.50", "4.90", "3.20", "3.20"]
    kids = []
    for i, name in enumerate(names):
        kids.append(node(f"name{i + 1}", "android.widget.TextView", 20 + 265 * i, 600, 240, 50, text=name))
    for i, price in enumerate(prices):
        kids.append(node(f"price{i + 1}", "android.widget.TextView", 20 + 265 * i, 658, 240, 40, text=price))
    grid = group("grid", 0, 580, 1080, 140, kids, cls="androidx.recyclerview.widget.RecyclerView")
    root = group("root", 0, 0, 1080, 1920, [grid], cls="android.widget.FrameLayout")
    return doc(root, 1080, 1920)


GRID_TRUTH = ["name1", "price1", "name2", "price2", "name3", "price3", "name4", "price4"]


# -- a GUI whose components cannot receive focus ---------------------------


def unfocusable_only():
    kids = [node(f"item{i}", "android.widget.TextView", 40, 200 + 120 * i, 1000, 100, text=f"Item {i}",
                 focusable=False) for i in range(4)]
    root = group("root", 0, 0, 1080, 1920, [group("list", 0, 180, 1080, 500, kids)],
                 cls="android.widget.FrameLayout")
    return doc(root, 1080, 1920)


# -- uiautomator dump with five focusable leaves ----------------------------

ALL_FOCUSABLE_XML = """<?xml version='1.0' encoding='UTF-8' standalone='yes' ?>
<hierarchy rotation="0">
  <node index="0" text="" resource-id="" class="android.widget.FrameLayout" package="com.example" content-desc="" checkable="false" checked="false" clickable="false" enabled="true" focusable="false" focused="false" scrollable="false" long-clickable="false" password="false" selected="false" visible-to-user="true" bounds="[0,0][1080,1920]">
    <node index="0" text="" resource-id="com.example:id/bar" class="android.widget.LinearLayout" package="com.example" content-desc="" clickable="false" enabled="true" focusable="false" visible-to-user="true" bounds="[0,0][1080,160]">
      <node index="0" text="" resource-id="com.example:id/menu" class="android.widget.ImageButton" package="com.example" content-desc="Menu" clickable="true" enabled="true" focusable="true" visible-to-user="true" bounds="[20,40][116,136]" />
      <node index="1" text="Inbox" resource-id="com.example:id/title" class="android.widget.TextView" package="com.example" content-desc="" clickable="true" enabled="true" focusable="true" visible-to-user="true" bounds="[200,56][700,120]" />
    </node>
    <node index="1" text="" resource-id="com.example:id/body" class="android.widget.LinearLayout" package="com.example" content-desc="" clickable="false" enabled="true" focusable="false" visible-to-user="true" bounds="[0,200][1080,900]">
      <node index="0" text="Hello &amp; welcome" resource-id="com.example:id/msg" class="androidx.appcompat.widget.AppCompatTextView" package="com.example" content-desc="" clickable="true" enabled="true" focusable="true" visible-to-user="true" bounds="[40,220][1040,320]" />
      <node index="1" text="" resource-id="com.example:id/photo" class="android.widget.ImageView" package="com.example" content-desc="Photo" clickable="true" enabled="true" focusable="true" visible-to-user="true" bounds="[40,340][1040,800]" />
      <node index="2" text="Reply" resource-id="com.example:id/reply" class="android.widget.Button" package="com.example" content-desc="" clickable="true" enabled="true" focusable="true" visible-to-user="true" bounds="[40,820][400,890]" />
    </node>
  </node>
</hierarchy>
"""


def build() -> dict[str, bytes]:
    """All fixture files as ``{name: bytes}``."""
    profile = profile_screen()
    files = {
        "profile_screen.json": profile,
        "profile_screen.png": render_profile_png(profile),
        "profile_screen.truth.json": {"gui_id": "profile_screen", "order": PROFILE_TRUTH},
        "toolbar_row.json": toolbar_row(),
        "product_grid.json": product_grid(),
        "product_grid.truth.json": {"gui_id": "product_grid", "order": GRID_TRUTH},
        "unfocusable_only.json": unfocusable_only(),
        "all_focusable.xml": ALL_FOCUSABLE_XML,
        "manifest.json": {"guis": [
            {"id": "profile_screen", "hierarchy": "profile_screen.json", "screenshot": "profile_screen.png",
             "truth": "profile_screen.truth.json"},
            {"id": "profile_screen_roles_only", "hierarchy": "profile_screen.json",
             "truth": "profile_screen.truth.json"},
            {"id": "toolbar_row", "hierarchy": "toolbar_row.json"},
            {"id": "product_grid", "hierarchy": "product_grid.json", "truth": "product_grid.truth.json"},
            {"id": "all_focusable", "hierarchy": "all_focusable.xml"},
            {"id": "unfocusable_only", "hierarchy": "unfocusable_only.json"},
        ]},
    }
    out = {}
    for name, data in files.items():
        if isinstance(data, bytes):
            out[name] = data
        elif isinstance(data, str):
            out[name] = data.encode()
        else:
            out[name] = (json.dumps(data, indent=2) + "\n").encode()
    return out


if __name__ == "__main__":
    for name, data in build().items():
        (HERE / name).write_bytes(data)
        print("wrote", name)
