"""Profile extrusion to triangle meshes and STL serialization (millimetres)."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import polygon
from .errors import ArgumentError, DomainError, GeometryError
from .fileio import atomic_writer, fmt9
from .geometry import ProfilePolyline

STL_HEADER = b"camv binary STL units=mm"
_FACET = np.dtype([("normal", "<f4", 3), ("vertices", "<f4", (3, 3)), ("attr", "<u2")])


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    vertices: np.ndarray  # (V, 3) float, mm
    triangles: np.ndarray  # (T, 3) int, counter-clockwise seen from outside

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        t = np.array(self.triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ArgumentError("vertices must have shape (n, 3)")
        if t.size == 0:
            t = t.reshape(0, 3)
        if t.ndim != 2 or t.shape[1] != 3:
            raise ArgumentError("triangles must have shape (m, 3)")
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise ArgumentError("triangle index out of range")
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        if t.size and np.any(self._cross_norm() <= 0):
            raise GeometryError("mesh contains degenerate (zero-area) triangles")

    def __len__(self):
        return len(self.triangles)

    def _cross(self) -> np.ndarray:
        a, b, c = (self.vertices[self.triangles[:, k]] for k in range(3))
        return np.cross(b - a, c - a)

    def _cross_norm(self) -> np.ndarray:
        return np.linalg.norm(self._cross(), axis=1)

    @property
    def normals(self) -> np.ndarray:
        cr = self._cross()
        return cr / np.linalg.norm(cr, axis=1)[:, None]

    @property
    def volume(self) -> float:
        """Signed enclosed volume (positive for outward-facing winding)."""
        a, b, c = (self.vertices[self.triangles[:, k]] for k in range(3))
        return float(np.sum(np.einsum("ij,ij->i", a, np.cross(b, c))) / 6.0)

    @property
    def area(self) -> float:
        return float(self._cross_norm().sum() / 2)

    def edge_use_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = {}
        for tri in self.triangles.tolist():
            for k in range(3):
                a, b = tri[k], tri[(k + 1) % 3]
                key = (a, b) if a < b else (b, a)
                counts[key] = counts.get(key, 0) + 1
        return counts

    def is_watertight(self) -> bool:
        """Every edge shared by exactly two triangles, traversed once in each direction."""
        directed = set()
        for tri in self.triangles.tolist():
            for k in range(3):
                e = (tri[k], tri[(k + 1) % 3])
                if e in directed:
                    return False
                directed.add(e)
        return bool(directed) and all((b, a) in directed for a, b in directed)


def _in_triangle(a, b, c, pts, eps):
    """Points inside or on the boundary of CCW triangle ``abc``."""

    def side(p, q):
        return (q[0] - p[0]) * (pts[:, 1] - p[1]) - (q[1] - p[1]) * (pts[:, 0] - p[0])

    return (side(a, b) >= -eps) & (side(b, c) >= -eps) & (side(c, a) >= -eps)


def ear_clip(points) -> np.ndarray:
    """Triangulate a simple polygon; returns ``(n - 2, 3)`` indices in CCW order.

    Ears are taken in vertex order starting after the last clip, which makes
    the result a pure function of the input.
    """
    p = np.asarray(points, dtype=float)
    n = len(p)
    if n < 3:
        raise GeometryError("polygon needs at least 3 vertices")
    ccw = polygon.signed_area(p) > 0
    active = list(range(n)) if ccw else list(range(n - 1, -1, -1))
    scale = float(np.ptp(p, axis=0).max()) or 1.0
    eps = 1e-12 * scale * scale
    tris: list[tuple[int, int, int]] = []
    cursor = 0
    while len(active) > 3:
        m = len(active)
        idx = np.array(active)
        q = p[idx]
        prev, nxt = np.roll(q, 1, axis=0), np.roll(q, -1, axis=0)
        turn = (q[:, 0] - prev[:, 0]) * (nxt[:, 1] - prev[:, 1]) - (q[:, 1] - prev[:, 1]) * (nxt[:, 0] - prev[:, 0])
        reflex = np.flatnonzero(turn <= eps)
        for step in range(m):
            i = (cursor + step) % m
            if turn[i] <= eps:
                continue
            ip, inx = (i - 1) % m, (i + 1) % m
            others = reflex[(reflex != ip) & (reflex != i) & (reflex != inx)]
            if others.size and np.any(_in_triangle(q[ip], q[i], q[inx], q[others], eps)):
                continue
            tris.append((active[ip], active[i], active[inx]))
            del active[i]
            cursor = i % (m - 1)
            break
        else:
            raise GeometryError("ear clipping found no ear; polygon is not simple")
    tris.append(tuple(active))
    out = np.array(tris, dtype=np.int64)
    return out if ccw else out[:, ::-1]


def extrude_profile(profile: ProfilePolyline, thickness: float) -> TriangleMesh:
    """Watertight prism: profile at ``z = 0`` and ``z = thickness`` joined by side walls."""
    if not (np.isfinite(thickness) and thickness > 0):
        raise DomainError(f"thickness must be positive, got {thickness!r} mm")
    if not profile.closed:
        raise GeometryError("cannot extrude an open profile")
    pts = polygon.drop_collinear(profile.points)
    if len(pts) < 3 or not polygon.is_simple(pts):
        raise GeometryError("cannot extrude a self-intersecting profile")
    if polygon.signed_area(pts) < 0:
        pts = pts[::-1]
    n = len(pts)
    cap = ear_clip(pts)
    verts = np.vstack([np.column_stack([pts, np.zeros(n)]), np.column_stack([pts, np.full(n, float(thickness))])])
    bottom = cap[:, ::-1]
    top = cap + n
    i = np.arange(n)
    j = (i + 1) % n
    walls = np.concatenate([np.column_stack([i, j, j + n]), np.column_stack([i, j + n, i + n])])
    return TriangleMesh(verts, np.concatenate([bottom, top, walls]))


def stl_bytes(mesh: TriangleMesh) -> bytes:
    if len(mesh) == 0:
        raise ArgumentError("refusing to write an STL with zero facets")
    rec = np.zeros(len(mesh), dtype=_FACET)
    rec["normal"] = mesh.normals
    rec["vertices"] = mesh.vertices[mesh.triangles]
    header = STL_HEADER.ljust(80, b"\0")
    return header + struct.pack("<I", len(mesh)) + rec.tobytes()


def stl_ascii(mesh: TriangleMesh, name: str = "camv") -> str:
    if len(mesh) == 0:
        raise ArgumentError("refusing to write an STL with zero facets")
    lines = [f"solid {name} units=mm"]
    for nrm, tri in zip(mesh.normals, mesh.vertices[mesh.triangles]):
        lines.append(f"  facet normal {' '.join(fmt9(c) for c in nrm)}")
        lines.append("    outer loop")
        lines.extend(f"      vertex {' '.join(fmt9(c) for c in v)}" for v in tri)
        lines.append("    endloop")
        lines.append("  endfacet")
    lines.append(f"endsolid {name}")
    return "\n".join(lines) + "\n"


def write_stl(mesh: TriangleMesh, path, mode: str = "binary") -> Path:
    """Write ``mesh`` as binary or ASCII STL through a temporary file."""
    path = Path(path)
    if mode == "binary":
        data = stl_bytes(mesh)
        try:
            with atomic_writer(path, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
    elif mode == "ascii":
        text = stl_ascii(mesh)
        try:
            with atomic_writer(path, newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
    else:
        raise ArgumentError(f"STL mode must be 'ascii' or 'binary', got {mode!r}")
    return path


def __getattr__(name):
    # plotting pulls in matplotlib; load it only when asked for
    if name in ("write_profile_svg", "write_pattern_plot"):
        from . import plotting

        return getattr(plotting, name)
    raise AttributeError(name)
