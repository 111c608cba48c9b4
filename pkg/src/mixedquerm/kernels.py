"""Hot loops: projected volumes of one vertex set across many subspaces.

``vertices`` is ``(m, n)``; ``bases`` is ``(N, n, j)`` with orthonormal
columns. Each kernel returns an ``(N,)`` array whose entry ``s`` depends only
on ``bases[s]``, so the parallel loop is order-free and results do not
depend on the thread count.
"""
import numpy as np

from ._accel import njit, prange


@njit
def _turn(x, y, o, a, b):
    return (x[a] - x[o]) * (y[b] - y[o]) - (y[a] - y[o]) * (x[b] - x[o])


@njit
def hull_area_2d(x, y):
    """Area of the convex hull of the points ``(x[i], y[i])`` (monotone chain)."""
    m = x.shape[0]
    if m < 3:
        return 0.0
    by_y = np.argsort(y, kind="mergesort")
    order = by_y[np.argsort(x[by_y], kind="mergesort")]
    hull = np.empty(2 * m, dtype=np.int64)
    k = 0
    for t in range(m):
        i = order[t]
        while k >= 2 and _turn(x, y, hull[k - 2], hull[k - 1], i) <= 0.0:
            k -= 1
        hull[k] = i
        k += 1
    lower = k + 1
    for t in range(m - 2, -1, -1):
        i = order[t]
        while k >= lower and _turn(x, y, hull[k - 2], hull[k - 1], i) <= 0.0:
            k -= 1
        hull[k] = i
        k += 1
    k -= 1
    if k < 3:
        return 0.0
    # fan from the first hull vertex
    area = 0.0
    o = hull[0]
    for t in range(1, k - 1):
        area += _turn(x, y, o, hull[t], hull[t + 1])
    return 0.5 * area


@njit(parallel=True)
def projected_areas(vertices, bases):
    m, n = vertices.shape
    count = bases.shape[0]
    out = np.empty(count)
    for s in prange(count):
        x = np.zeros(m)
        y = np.zeros(m)
        for i in range(m):
            for k in range(n):
                x[i] += vertices[i, k] * bases[s, k, 0]
                y[i] += vertices[i, k] * bases[s, k, 1]
        out[s] = hull_area_2d(x, y)
    return out


@njit(parallel=True)
def projected_widths(vertices, bases):
    m, n = vertices.shape
    count = bases.shape[0]
    out = np.empty(count)
    for s in prange(count):
        lo = np.inf
        hi = -np.inf
        for i in range(m):
            t = 0.0
            for k in range(n):
                t += vertices[i, k] * bases[s, k, 0]
            lo = min(lo, t)
            hi = max(hi, t)
        out[s] = hi - lo
    return out


@njit
def support_width(vertices, ux, uy):
    """Width of a planar point set in direction ``(ux, uy)``."""
    lo = np.inf
    hi = -np.inf
    for i in range(vertices.shape[0]):
        t = vertices[i, 0] * ux + vertices[i, 1] * uy
        lo = min(lo, t)
        hi = max(hi, t)
    return hi - lo
