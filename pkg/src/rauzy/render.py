"""Raster picture of the gasket by depth-limited subdivision.

The simplex is drawn as an equilateral triangle using orthonormal tangent
coordinates: ``x -> ((x1 - x2) / 2, sqrt(3) x3 / 2)``.  At depth ``d`` the
images ``h_w(simplex)`` of all ``3**d`` words of length ``d`` are painted
black over a light-gray simplex on a white background.
"""
from __future__ import annotations

import itertools
import math
from pathlib import Path

import numpy as np

from .ifs import word_product

BACKGROUND = 255
SIMPLEX = 224
INK = 0
MARGIN = 4


def canvas_shape(width: int) -> tuple:
    height = int(math.ceil((width - 2 * MARGIN) * math.sqrt(3) / 2)) + 2 * MARGIN
    return height, width


def to_pixel(x, width: int) -> tuple:
    """Barycentric point to (column, row) image coordinates (floats)."""
    x = np.asarray(x, dtype=float)
    side = width - 2 * MARGIN
    height, _ = canvas_shape(width)
    u = (x[..., 0] - x[..., 1]) / 2 + 0.5
    v = math.sqrt(3) / 2 * x[..., 2]
    return MARGIN + u * side, height - MARGIN - v * side


def _fill(img, tri, value):
    """Paint pixels whose centres lie in the triangle ``tri`` (3 x (col, row))."""
    (x0, y0), (x1, y1), (x2, y2) = tri
    h, w = img.shape
    c0 = max(int(math.floor(min(x0, x1, x2))), 0)
    c1 = min(int(math.ceil(max(x0, x1, x2))), w - 1)
    r0 = max(int(math.floor(min(y0, y1, y2))), 0)
    r1 = min(int(math.ceil(max(y0, y1, y2))), h - 1)
    if c1 < c0 or r1 < r0:
        return
    cols = np.arange(c0, c1 + 1) + 0.5
    rows = np.arange(r0, r1 + 1)[:, None] + 0.5
    d = (y1 - y2) * (x0 - x2) + (x2 - x1) * (y0 - y2)
    if d == 0:
        return
    l0 = ((y1 - y2) * (cols - x2) + (x2 - x1) * (rows - y2)) / d
    l1 = ((y2 - y0) * (cols - x2) + (x0 - x2) * (rows - y2)) / d
    l2 = 1 - l0 - l1
    eps = -1e-9
    mask = (l0 >= eps) & (l1 >= eps) & (l2 >= eps)
    if not mask.any():
        # sub-pixel triangle: paint the pixel under its centroid
        cx, cy = (x0 + x1 + x2) / 3, (y0 + y1 + y2) / 3
        img[min(int(cy), h - 1), min(int(cx), w - 1)] = value
        return
    img[r0:r1 + 1, c0:c1 + 1][mask] = value


def render(depth: int, width: int) -> np.ndarray:
    """Greyscale ``uint8`` image of the depth-``depth`` approximation."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if width < 64:
        raise ValueError("width must be at least 64 pixels")
    img = np.full(canvas_shape(width), BACKGROUND, dtype=np.uint8)
    corners = np.eye(3)
    _fill(img, list(zip(*to_pixel(corners, width))), SIMPLEX)
    for w in itertools.product((1, 2, 3), repeat=depth):
        P = np.array(word_product(w, allow_constant=True), dtype=float)
        verts = (P / P.sum(axis=0)).T  # rows: images of the three vertices
        _fill(img, list(zip(*to_pixel(verts, width))), INK)
    return img


def pgm_bytes(img: np.ndarray) -> bytes:
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.astype(np.uint8).tobytes()


def write_image(img: np.ndarray, path) -> Path:
    """Write binary PGM, or PNG when the suffix is ``.png``."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        from PIL import Image
        Image.fromarray(img, mode="L").save(path, format="PNG", optimize=False)
    else:
        path.write_bytes(pgm_bytes(img))
    return path
