"""Extract edge shapes from pixel crops and compare them.

A filled square and a hollow square give different edge sets, and the
normalized Hausdorff distance says how far apart the two outlines are.
"""

from __future__ import annotations

import numpy as np

from navflow.vision import NoShapeDetected, detect_shape, edge_map, normalized_hausdorff


def square(size: int = 32, hollow: bool = False) -> np.ndarray:
    img = np.zeros((size, size))
    img[6:26, 6:26] = 1.0
    if hollow:
        img[9:23, 9:23] = 0.0
    return img


def show(edges: np.ndarray) -> None:
    for row in edges[3:29]:
        print("  " + "".join("#" if v else "." for v in row[3:29]))


solid, ring = square(), square(hollow=True)
print("edges of a filled square:")
show(edge_map(solid))
print("\nedges of a hollow square (outer and inner outline):")
show(edge_map(ring))

a, b = detect_shape(solid), detect_shape(ring)
print(f"\n{len(a)} vs {len(b)} edge points")
print(f"normalized Hausdorff distance: {normalized_hausdorff(a, b):.4f}")
print(f"same shape shifted by one pixel: {normalized_hausdorff(a, detect_shape(np.roll(solid, 1, axis=1))):.4f}")

try:
    detect_shape(np.full((20, 20), 0.5))
except NoShapeDetected as exc:
    print(f"\na blank crop is rejected: {exc}")
