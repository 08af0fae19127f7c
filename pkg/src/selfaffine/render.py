"""Depth-N approximations of T(A, D) as point clouds, PGM rasters and a
coarse component count.

This is the only place floating point is used; nothing here feeds a decision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .algebra import companion
from .neighbors import DigitSystem

DEFAULT_BUDGET = 10**7
DEFAULT_DENSITY = 10**5


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class RenderConfig:
    depth: int | None = None
    width: int = 800
    height: int = 800
    basis_vector: tuple = (1, 0)
    margin: float = 0.05
    budget: int = DEFAULT_BUDGET

    def resolve_depth(self, n_digits: int) -> int:
        depth = self.depth if self.depth is not None else default_depth(n_digits)
        if depth < 1:
            raise ValueError("depth must be at least 1")
        if n_digits**depth > self.budget:
            raise BudgetExceeded(f"{n_digits}^{depth} points exceed budget {self.budget}")
        return depth


def default_depth(n_digits: int, density: int = DEFAULT_DENSITY) -> int:
    """Smallest N with n_digits^N >= density (1 for a single digit)."""
    if n_digits < 2:
        return 1
    n = 1
    while n_digits**n < density:
        n += 1
    return n


def _inverse_float(system: DigitSystem) -> np.ndarray:
    A = companion(system.poly)
    return np.array([[float(x) for x in row] for row in A.inverse().rows()])


def enumerate_points(system: DigitSystem, depth: int, basis_vector=(1, 0),
                     budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All sums sum_{i<=N} A^{-i} d_i v, shape (|D|^N, 2).

    Built from the last digit outwards with x -> A^{-1}(x + d v), so row order
    is a fixed function of the inputs.
    """
    n = len(system.digits)
    if n**depth > budget:
        raise BudgetExceeded(f"{n}^{depth} points exceed budget {budget}")
    Ainv = _inverse_float(system)
    v = np.array([float(c) for c in basis_vector])
    offsets = np.array([float(d) for d in system.digits])[:, None] * v  # (n, 2)
    pts = np.zeros((1, 2))
    for _ in range(depth):
        pts = (pts[None, :, :] + offsets[:, None, :]).reshape(-1, 2) @ Ainv.T
    return pts


def rasterize(cloud: np.ndarray, config: RenderConfig = RenderConfig()) -> np.ndarray:
    """Binary image (uint8, 0 = ink, 255 = background), y axis pointing up."""
    if len(cloud) == 0:
        raise ValueError("empty point cloud")
    w, h = config.width, config.height
    lo, hi = cloud.min(axis=0), cloud.max(axis=0)
    span = max(float((hi - lo).max()), 1e-12)
    scale = (1 - 2 * config.margin) * min(w, h) / span
    center = (lo + hi) / 2
    cols = np.floor((cloud[:, 0] - center[0]) * scale + w / 2).astype(np.int64)
    rows = np.floor(h / 2 - (cloud[:, 1] - center[1]) * scale).astype(np.int64)
    np.clip(cols, 0, w - 1, out=cols)
    np.clip(rows, 0, h - 1, out=rows)
    img = np.full((h, w), 255, dtype=np.uint8)
    img[rows, cols] = 0
    return img


def write_pgm(path, image: np.ndarray) -> Path:
    path = Path(path)
    h, w = image.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(np.ascontiguousarray(image, dtype=np.uint8).tobytes())
    return path


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError("only 8-bit PGM supported")
    return np.frombuffer(parts[4][: w * h], dtype=np.uint8).reshape(h, w)


def inverse_power_norm(system: DigitSystem, depth: int) -> float:
    """Spectral norm of A^{-N} (exact matrix, float norm, nudged upwards)."""
    arr = _float_matrix(companion(system.poly).inverse() ** depth)
    return float(np.linalg.norm(arr, 2)) * (1 + 1e-9) + 1e-12


def _float_matrix(M) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in M.rows()])


def connecting_gap(system: DigitSystem, cloud: np.ndarray, depth: int,
                   rtol: float = 1e-12) -> float:
    """Ball radius under which a connected T gives a connected depth-N cloud.

    T is the union of the pieces s + A^{-N} T over cloud points s, and each
    piece contains its anchor s because 0 is a digit. Every t in T is
    c_1 + A^{-N} c_2 + A^{-2N} c_3 + ... with c_k in the cloud, so

        sup_T |A^{-N} t| <= sum_{k>=1} max_cloud |A^{-kN} c|,

    and touching pieces have anchors within twice that radius.
    """
    step = _float_matrix(companion(system.poly).inverse() ** depth)
    pts = np.unique(cloud, axis=0)
    reach = float(np.sqrt((pts**2).sum(1)).max())
    total, M = 0.0, step
    for _ in range(10_000):
        total += float(np.sqrt(((pts @ M.T) ** 2).sum(1)).max())
        if np.linalg.norm(M, 2) * reach <= rtol * max(total, 1e-300):
            break
        M = M @ step
    else:
        raise ValueError("depth too small for the series to settle")
    # remaining terms are each below rtol * total and decay geometrically
    return total * (1 + 1e-6) + 1e-12


def visual_gap(cloud: np.ndarray, config: "RenderConfig" = None) -> float:
    """One pixel of the rendered image: the finest separation a figure shows."""
    config = config or RenderConfig()
    span = float((cloud.max(axis=0) - cloud.min(axis=0)).max())
    return span / ((1 - 2 * config.margin) * min(config.width, config.height))


def component_estimate(cloud: np.ndarray, gap: float, max_cells: int = 4096) -> int:
    """Connected components of the union of closed radius-``gap`` balls.

    Points are binned on a grid of side gap/2 and every occupied cell is grown
    by a disk large enough that any two points within 2*gap end up in touching
    blobs. Binning only ever merges more, never splits.
    """
    if gap <= 0:
        raise ValueError("gap must be positive")
    pts = np.unique(np.asarray(cloud, dtype=float), axis=0)
    if len(pts) <= 1:
        return len(pts)
    lo = pts.min(axis=0)
    span = float((pts.max(axis=0) - lo).max())
    side = max(gap / 2, span / max_cells)
    idx = np.floor((pts - lo) / side).astype(np.int64)
    # cell centres of two linked points are within 2*gap + side*sqrt(2)
    radius = math.ceil((gap + side * math.sqrt(2) / 2) / side) + 1
    pad = radius + 1
    shape = tuple(int(x) + 2 * pad + 1 for x in idx.max(axis=0))
    grid = np.zeros(shape, dtype=bool)
    grid[idx[:, 0] + pad, idx[:, 1] + pad] = True
    yy, xx = np.mgrid[-radius:radius + 1, -radius:radius + 1]
    disk = (xx**2 + yy**2) <= radius**2
    grown = ndimage.binary_dilation(grid, structure=disk)
    _, count = ndimage.label(grown, structure=np.ones((3, 3), dtype=bool))
    return int(count)


def render(system: DigitSystem, path, config: RenderConfig = RenderConfig()) -> tuple[Path, np.ndarray]:
    depth = config.resolve_depth(len(system.digits))
    cloud = enumerate_points(system, depth, config.basis_vector, config.budget)
    return write_pgm(path, rasterize(cloud, config)), cloud


# figure panels: (label, p, q, digits, basis vector)
FIGURES = {
    "fig1a": ("x^2+x+3, m=4", 1, 3, (0, 1, 4), (1, 0)),
    "fig1b": ("x^2+2x+3, m=4", 2, 3, (0, 1, 4), (1, 0)),
    "fig1c": ("x^2+3x+3, m=4", 3, 3, (0, 1, 4), (1, 0)),
    "fig1d": ("x^2+x-3, m=4", 1, -3, (0, 1, 4), (1, 0)),
    "fig2a": ("x^2+x+3, m=3", 1, 3, (0, 1, 3), (1, 0)),
    "fig2b": ("x^2+2x+3, m=3", 2, 3, (0, 1, 3), (1, 0)),
    "fig2c": ("x^2+3x+3, m=3", 3, 3, (0, 1, 3), (1, 0)),
    "fig2d": ("x^2+x-3, m=3", 1, -3, (0, 1, 3), (1, 0)),
    "fig3a": ("x^2+5x+6", 5, 6, (0, 1, 2, 4, 6, 8), (0, 1)),
    "fig3b": ("x^2+4x-6", 4, -6, (0, 1, 3, 5, 7, 9), (0, 1)),
}
