"""Small planar-polygon toolkit: signed area, simplicity test, collinear cleanup."""

from __future__ import annotations

import numpy as np


def signed_area(points) -> float:
    """Shoelace area; positive for counter-clockwise vertex order."""
    p = np.asarray(points, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _between(a, b, c, tol):
    return (np.minimum(a, b) - tol <= c) & (c <= np.maximum(a, b) + tol)


def intersecting_pairs(points, closed: bool = True, rtol: float = 1e-12):
    """Return index pairs ``(i, j)`` of polygon edges that touch or cross.

    Edge ``i`` runs from vertex ``i`` to vertex ``i + 1``. Edges sharing a
    vertex are only reported when they fold back onto each other.
    """
    p = np.asarray(points, dtype=float)
    q = np.roll(p, -1, axis=0) if closed else p[1:]
    p = p[: len(q)]
    n = len(p)
    scale = float(np.ptp(np.vstack([p, q]), axis=0).max()) or 1.0
    tol = rtol * scale
    atol = tol * scale

    ax, ay = p[:, 0][:, None], p[:, 1][:, None]
    bx, by = q[:, 0][:, None], q[:, 1][:, None]
    cx, cy = p[:, 0][None, :], p[:, 1][None, :]
    dx, dy = q[:, 0][None, :], q[:, 1][None, :]

    d1 = _orient(ax, ay, bx, by, cx, cy)
    d2 = _orient(ax, ay, bx, by, dx, dy)
    d3 = _orient(cx, cy, dx, dy, ax, ay)
    d4 = _orient(cx, cy, dx, dy, bx, by)

    proper = (((d1 > atol) & (d2 < -atol)) | ((d1 < -atol) & (d2 > atol))) & (
        ((d3 > atol) & (d4 < -atol)) | ((d3 < -atol) & (d4 > atol))
    )
    on = np.zeros_like(proper)
    on |= (np.abs(d1) <= atol) & _between(ax, bx, cx, tol) & _between(ay, by, cy, tol)
    on |= (np.abs(d2) <= atol) & _between(ax, bx, dx, tol) & _between(ay, by, dy, tol)
    on |= (np.abs(d3) <= atol) & _between(cx, dx, ax, tol) & _between(cy, dy, ay, tol)
    on |= (np.abs(d4) <= atol) & _between(cx, dx, bx, tol) & _between(cy, dy, by, tol)
    hit = proper | on

    i, j = np.triu_indices(n, k=1)
    keep = hit[i, j]
    i, j = i[keep], j[keep]
    out = []
    for a, b in zip(i.tolist(), j.tolist()):
        adjacent = b == a + 1 or (closed and a == 0 and b == n - 1)
        if adjacent:
            # shared vertex is expected; reject only a fold-back onto the same line
            if b == a + 1:
                u, v = q[a] - p[a], q[b] - p[b]
            else:
                u, v = q[b] - p[b], q[a] - p[a]
            cross = u[0] * v[1] - u[1] * v[0]
            if abs(cross) <= atol and np.dot(u, v) < 0:
                out.append((a, b))
            continue
        out.append((a, b))
    return out


def is_simple(points, closed: bool = True) -> bool:
    p = np.asarray(points, dtype=float)
    if len(p) < (3 if closed else 2):
        return False
    seg = (np.roll(p, -1, axis=0) if closed else p[1:]) - p[: len(p) - (0 if closed else 1)]
    if np.any(np.hypot(seg[:, 0], seg[:, 1]) == 0.0):
        return False
    return not intersecting_pairs(p, closed=closed)


def drop_duplicates(points, closed: bool = True, tol: float = 1e-12) -> np.ndarray:
    """Remove consecutive repeated vertices (and a repeated closing vertex)."""
    p = np.asarray(points, dtype=float)
    keep = [0]
    for k in range(1, len(p)):
        if np.hypot(*(p[k] - p[keep[-1]])) > tol:
            keep.append(k)
    out = p[keep]
    if closed and len(out) > 1 and np.hypot(*(out[-1] - out[0])) <= tol:
        out = out[:-1]
    return out


def drop_collinear(points, tol: float = 1e-12) -> np.ndarray:
    """Remove vertices of a closed polygon that lie on the line through their neighbours."""
    p = drop_duplicates(points)
    changed = True
    while changed and len(p) > 3:
        prev = np.roll(p, 1, axis=0)
        nxt = np.roll(p, -1, axis=0)
        cross = (p[:, 0] - prev[:, 0]) * (nxt[:, 1] - prev[:, 1]) - (p[:, 1] - prev[:, 1]) * (
            nxt[:, 0] - prev[:, 0]
        )
        span = np.hypot(*(nxt - prev).T)
        flat = np.abs(cross) <= tol * np.maximum(span, 1.0) ** 2
        changed = bool(flat.any())
        if changed:
            # drop one vertex per pass so neighbours are re-evaluated
            p = np.delete(p, int(np.flatnonzero(flat)[0]), axis=0)
    return p
