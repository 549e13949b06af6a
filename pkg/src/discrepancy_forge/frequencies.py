"""Integer frequency enumeration in Euclidean balls.

Single shared implementation so Weyl spectra, coefficient tables and bound
assemblies all agree on the frequency set and its (deterministic,
lexicographic) order.
"""

from __future__ import annotations

import numpy as np


def integer_ball(radius: float, d: int, *, include_boundary: bool = False,
                 include_zero: bool = False) -> np.ndarray:
    """Integer vectors k with 0 < |k| < radius (Euclidean), lexicographic order.

    include_boundary switches the norm test to |k| <= radius; include_zero
    prepends the origin.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if d < 1:
        raise ValueError("dimension must be >= 1")
    kmax = int(np.floor(radius))
    axis = np.arange(-kmax, kmax + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    norm2 = np.sum(pts.astype(float) ** 2, axis=1)
    r2 = float(radius) ** 2
    keep = (norm2 <= r2) if include_boundary else (norm2 < r2)
    if not include_zero:
        keep &= norm2 > 0
    return pts[keep]


def integer_ball_chunked(radius: float, d: int, *, include_boundary: bool = False):
    """Yield stripes of the punctured ball, for radii too large to materialize.

    Stripes are slices of constant first coordinate, ascending; within a
    stripe the remaining coordinates are lexicographic.
    """
    if d != 2:
        yield integer_ball(radius, d, include_boundary=include_boundary)
        return
    kmax = int(np.floor(radius))
    r2 = float(radius) ** 2
    axis = np.arange(-kmax, kmax + 1, dtype=np.int64)
    for k1 in range(-kmax, kmax + 1):
        norm2 = float(k1) ** 2 + axis.astype(float) ** 2
        keep = (norm2 <= r2) if include_boundary else (norm2 < r2)
        keep &= norm2 > 0
        k2 = axis[keep]
        if len(k2):
            stripe = np.empty((len(k2), 2), dtype=np.int64)
            stripe[:, 0] = k1
            stripe[:, 1] = k2
            yield stripe
