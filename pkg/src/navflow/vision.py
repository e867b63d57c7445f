"""Edge-shape extraction and Hausdorff shape comparison.

Images are 2-D ``float64`` arrays indexed ``[row, col]`` with values in
``[0, 1]``; points are ``(x, y) = (col, row)`` in crop-local pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .hierarchy import Bounds

MAX_POINTS = 10_000
# Sobel magnitudes below this are rounding noise (a full 0-to-1 step gives 4)
NOISE_FLOOR = 1e-9
_SUBSAMPLE_SEED = 0
_EIGHT = np.ones((3, 3), dtype=bool)

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T.copy()


class NoShapeDetected(ValueError):
    """The crop has no edge pixels after hysteresis."""


@dataclass(frozen=True)
class VisionConfig:
    sigma: float = 1.4
    high_frac: float = 0.80
    low_frac: float = 0.40
    hausdorff_threshold: float = 0.1

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not 0.70 <= self.high_frac <= 0.90:
            raise ValueError("high_frac must lie in [0.70, 0.90]")
        if not 0.30 <= self.low_frac <= 0.50:
            raise ValueError("low_frac must lie in [0.30, 0.50]")
        if not self.low_frac < self.high_frac:
            raise ValueError("low_frac must be below high_frac")
        if self.hausdorff_threshold < 0:
            raise ValueError("hausdorff_threshold must be non-negative")


@dataclass(frozen=True)
class GradientField:
    magnitude: np.ndarray
    direction: np.ndarray

    def __post_init__(self) -> None:
        if self.magnitude.shape != self.direction.shape:
            raise ValueError("magnitude and direction planes differ in shape")


@dataclass(frozen=True, eq=False)
class EdgePointSet:
    points: np.ndarray  # (n, 2) int64 of (x, y), sorted by (y, x)
    extent: Bounds

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgePointSet):
            return NotImplemented
        return self.extent == other.extent and np.array_equal(self.points, other.points)

    def as_set(self) -> set[tuple[int, int]]:
        return {(int(x), int(y)) for x, y in self.points}

    @classmethod
    def from_points(cls, points, extent: Bounds | None = None) -> EdgePointSet:
        pts = np.asarray(sorted({(int(x), int(y)) for x, y in points}, key=lambda p: (p[1], p[0])),
                         dtype=np.int64).reshape(-1, 2)
        if extent is None:
            if len(pts) == 0:
                extent = Bounds(0, 0, 1, 1)
            else:
                extent = Bounds(0, 0, int(pts[:, 0].max()) + 1, int(pts[:, 1].max()) + 1)
        return cls(pts, extent)


def as_gray(img) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D gray image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or arr.min(initial=0.0) < 0 or arr.max(initial=0.0) > 1:
        raise ValueError("gray image values must be finite and within [0, 1]")
    return arr


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Sampled 2-D Gaussian of radius ``ceil(3 sigma)``, renormalized to sum 1."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    radius = math.ceil(3 * sigma)
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    xx, yy = np.meshgrid(ax, ax)
    kernel = np.exp(-(xx**2 + yy**2) / (2 * sigma**2)) / (2 * np.pi * sigma**2)
    return kernel / kernel.sum()


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    kernel = gaussian_kernel(sigma)
    return ndimage.correlate(np.asarray(img, dtype=np.float64), kernel, mode="nearest")


def sobel_components(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Raw ``(gx, gy)`` Sobel responses with clamp-to-edge borders.

    Written as a central difference followed by a 1-2-1 smoothing pass, which
    is the separable form of the 3x3 kernels. Differences of equal pixels are
    exactly zero, so flat regions carry no rounding residue.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] < 3 or img.shape[1] < 3:
        raise ValueError(f"Sobel needs an image of at least 3x3, got {img.shape}")
    p = np.pad(img, 1, mode="edge")
    dx = p[:, 2:] - p[:, :-2]
    dy = p[2:, :] - p[:-2, :]
    gx = dx[:-2] + 2 * dx[1:-1] + dx[2:]
    gy = dy[:, :-2] + 2 * dy[:, 1:-1] + dy[:, 2:]
    return gx, gy


def sobel_gradients(img: np.ndarray) -> GradientField:
    gx, gy = sobel_components(img)
    direction = np.arctan2(gy, gx)
    direction[direction <= -np.pi] = np.pi
    return GradientField(np.hypot(gx, gy), direction)


# (drow, dcol) of the neighbour along the gradient for bins 0, 45, 90, 135 deg;
# rows grow downward, matching the sign of the Sobel y response.
_NMS_STEPS = ((0, 1), (1, 1), (1, 0), (1, -1))


def non_max_suppress(g: GradientField, rel_tol: float = 1e-9) -> GradientField:
    """Keep pixels that are maximal along their quantized gradient direction.

    A pixel survives when it is >= both directional neighbours. Two-pixel
    plateaus (a step edge sampled symmetrically) would survive twice, so a
    tie with the neighbour behind (within ``rel_tol`` of the peak) drops the
    pixel, leaving one pixel per plateau.
    """
    mag = g.magnitude
    tol = rel_tol * float(mag.max(initial=0.0))
    angle = np.degrees(g.direction) % 180.0
    bins = (np.floor((angle + 22.5) / 45.0).astype(np.int64)) % 4
    # neighbours outside the field count as zero, so a ridge on the border
    # is not tied with its own clamped copy
    padded = np.pad(mag, 1, mode="constant")
    rows, cols = mag.shape
    keep = np.zeros(mag.shape, dtype=bool)
    for b, (dr, dc) in enumerate(_NMS_STEPS):
        ahead = padded[1 + dr:1 + dr + rows, 1 + dc:1 + dc + cols]
        behind = padded[1 - dr:1 - dr + rows, 1 - dc:1 - dc + cols]
        keep |= (bins == b) & (mag >= ahead - tol) & (mag > behind + tol)
    keep &= mag > 0
    return GradientField(np.where(keep, mag, 0.0), g.direction)


def hysteresis_threshold(g: GradientField, low_frac: float, high_frac: float) -> np.ndarray:
    """Boolean edge map; weak pixels survive only if 8-connected to a strong one."""
    if not 0 < low_frac < high_frac <= 1:
        raise ValueError("need 0 < low_frac < high_frac <= 1")
    mag = g.magnitude
    peak = float(mag.max(initial=0.0))
    if peak <= 0:
        return np.zeros(mag.shape, dtype=bool)
    strong = mag >= high_frac * peak
    candidate = mag >= low_frac * peak
    labels, count = ndimage.label(candidate, structure=_EIGHT)
    anchored = np.zeros(count + 1, dtype=bool)
    anchored[np.unique(labels[strong])] = True
    anchored[0] = False
    return anchored[labels]


def edge_points(edges: np.ndarray, extent: Bounds | None = None) -> EdgePointSet:
    rows, cols = np.nonzero(edges)  # row-major, i.e. sorted by (y, x)
    points = np.stack([cols, rows], axis=1).astype(np.int64)
    if len(points) > MAX_POINTS:
        rng = np.random.default_rng(_SUBSAMPLE_SEED)
        points = points[np.sort(rng.choice(len(points), MAX_POINTS, replace=False))]
    if extent is None:
        extent = Bounds(0, 0, edges.shape[1], edges.shape[0])
    return EdgePointSet(points, extent)


def edge_map(crop: np.ndarray, cfg: VisionConfig = VisionConfig()) -> np.ndarray:
    img = as_gray(crop)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ValueError(f"crop must be at least 3x3, got {img.shape}")
    blurred = gaussian_blur(img, cfg.sigma)
    g = sobel_gradients(blurred)
    # blurring a flat patch leaves ulp-level ripples; they are not edges
    g = GradientField(np.where(g.magnitude < NOISE_FLOOR, 0.0, g.magnitude), g.direction)
    thin = non_max_suppress(g)
    return hysteresis_threshold(thin, cfg.low_frac, cfg.high_frac)


def detect_shape(crop: np.ndarray, cfg: VisionConfig = VisionConfig(),
                 extent: Bounds | None = None) -> EdgePointSet:
    """Edge pixels of ``crop`` after blur, Sobel, NMS and hysteresis.

    ``extent`` records where the crop came from; it defaults to the crop's
    own frame.
    """
    edges = edge_map(crop, cfg)
    if not edges.any():
        raise NoShapeDetected("no shape detected")
    if extent is None:
        extent = Bounds(0, 0, edges.shape[1], edges.shape[0])
    return edge_points(edges, extent)


def _directed_sq(a: np.ndarray, b: np.ndarray) -> int:
    """max over a of min over b of squared distance, in exact integers.

    The k-d tree only picks the nearest neighbour; the distance itself is
    recomputed from integer coordinates so no rounding leaks in.
    """
    _, idx = cKDTree(b).query(a, k=1)
    d2 = ((a - b[idx]) ** 2).sum(axis=1)
    return int(d2.max())


def hausdorff(a: EdgePointSet, b: EdgePointSet) -> float:
    pa, pb = np.asarray(a.points, dtype=np.int64), np.asarray(b.points, dtype=np.int64)
    if len(pa) == 0 or len(pb) == 0:
        raise ValueError("Hausdorff distance needs two non-empty point sets")
    return math.sqrt(max(_directed_sq(pa, pb), _directed_sq(pb, pa)))


def union_diagonal(a: EdgePointSet, b: EdgePointSet) -> float:
    """Span between the outermost pixel centres of both local frames."""
    width = max(a.extent.width, b.extent.width)
    height = max(a.extent.height, b.extent.height)
    return math.hypot(max(width - 1, 0), max(height - 1, 0))


def normalized_hausdorff(a: EdgePointSet, b: EdgePointSet) -> float:
    raw = hausdorff(a, b)
    diag = union_diagonal(a, b)
    if diag == 0:
        return 0.0
    return raw / diag


# -- debug dumps -------------------------------------------------------------


def write_pgm(path: str | Path, edges: np.ndarray) -> None:
    """Binary PGM (P5) with edge pixels at 255."""
    data = np.where(np.asarray(edges, dtype=bool), 255, 0).astype(np.uint8)
    header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + data.tobytes())


def write_points_csv(path: str | Path, shape: EdgePointSet) -> None:
    lines = [f"{int(x)},{int(y)}" for x, y in shape.points]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
