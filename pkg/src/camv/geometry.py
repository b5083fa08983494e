"""Parametric geometry of the all-metal Vivaldi element and its array lattice.

Two coordinate systems are used:

* taper distance ``x`` (mm), measured from the aperture plane toward the feed,
  in which the exponential slot edge is defined;
* profile coordinates ``(x, y)`` (mm) of the element cross-section, with the
  origin at the centre of the bottom face of the base plate and ``y`` pointing
  toward the aperture.

All lengths are millimetres; frequencies are Hz.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import polygon
from .constants import wavelength
from .errors import ArgumentError, ConfigError, DomainError, GeometryError

N_NARROW_SLOTS = 6
N_CORRUGATIONS = 9
DEFAULT_TAPER_SAMPLES = 256
PRESET_DIR_ENV = "CAMV_PRESET_DIR"

_SCALAR_FIELDS = ("w", "w_a", "w_t", "L_s", "L", "d", "t", "h", "W_s")


@dataclass(frozen=True)
class ElementParams:
    """Geometric parameters of one element, in millimetres.

    ``narrow_slots`` holds L1..L6 and ``slot_depths`` holds Ls1..Ls9. Values
    are not checked on construction; use :func:`validate_params`.
    """

    w: float
    w_a: float
    w_t: float
    L_s: float
    L: float
    d: float
    t: float
    h: float
    W_s: float
    narrow_slots: tuple[float, ...]
    slot_depths: tuple[float, ...]
    f_design: float = 28e9

    def __post_init__(self):
        object.__setattr__(self, "narrow_slots", tuple(float(v) for v in self.narrow_slots))
        object.__setattr__(self, "slot_depths", tuple(float(v) for v in self.slot_depths))

    def replace(self, **changes) -> ElementParams:
        """Copy with fields changed; accepts indexed symbols such as ``L3`` or ``Ls2``."""
        narrow = list(self.narrow_slots)
        depths = list(self.slot_depths)
        plain = {}
        for key, value in changes.items():
            kind, idx = _indexed_key(key)
            if kind == "L":
                narrow[idx] = float(value)
            elif kind == "Ls":
                depths[idx] = float(value)
            else:
                plain[key] = value
        return dataclasses.replace(self, narrow_slots=tuple(narrow), slot_depths=tuple(depths), **plain)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in _SCALAR_FIELDS}
        out.update({f"L{i + 1}": v for i, v in enumerate(self.narrow_slots)})
        out.update({f"Ls{i + 1}": v for i, v in enumerate(self.slot_depths)})
        out["f_design"] = self.f_design
        return out

    @classmethod
    def from_dict(cls, data: Mapping, path: str = "$") -> ElementParams:
        """Build from a flat mapping keyed by parameter symbols (``w``, ``L1``, ``Ls9`` ...).

        ``narrow_slots`` / ``slot_depths`` lists are accepted in place of the
        indexed keys. Errors carry the JSON path of the offending field.
        """
        if not isinstance(data, Mapping):
            raise ConfigError(path, "expected an object of element parameters")
        values: dict = {}
        narrow: list = [None] * N_NARROW_SLOTS
        depths: list = [None] * N_CORRUGATIONS
        for key, raw in data.items():
            where = f"{path}.{key}"
            if key in ("narrow_slots", "slot_depths"):
                target, n = (narrow, N_NARROW_SLOTS) if key == "narrow_slots" else (depths, N_CORRUGATIONS)
                if not isinstance(raw, (list, tuple)) or len(raw) != n:
                    raise ConfigError(where, f"expected a list of {n} numbers")
                for i, v in enumerate(raw):
                    target[i] = _number(v, f"{where}[{i}]")
                continue
            kind, idx = _indexed_key(key)
            if kind == "L":
                narrow[idx] = _number(raw, where)
            elif kind == "Ls":
                depths[idx] = _number(raw, where)
            elif key in _SCALAR_FIELDS or key == "f_design":
                values[key] = _number(raw, where)
            else:
                raise ConfigError(where, "unknown element parameter")
        for key in _SCALAR_FIELDS:
            if key not in values:
                raise ConfigError(f"{path}.{key}", "missing element parameter")
        for prefix, target in (("L", narrow), ("Ls", depths)):
            for i, v in enumerate(target):
                if v is None:
                    raise ConfigError(f"{path}.{prefix}{i + 1}", "missing element parameter")
        return cls(narrow_slots=tuple(narrow), slot_depths=tuple(depths), **values)


def _indexed_key(key: str):
    for prefix, n in (("Ls", N_CORRUGATIONS), ("L", N_NARROW_SLOTS)):
        rest = key[len(prefix):]
        if key.startswith(prefix) and rest.isdigit() and 1 <= int(rest) <= n:
            return prefix, int(rest) - 1
    return None, None


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(where, "expected a finite number")
    return value


CAMV_REFERENCE = ElementParams(
    w=5.7,
    w_a=4.75,
    w_t=0.45,
    L_s=7.6,
    L=14.25,
    d=6.46,
    t=2.28,
    h=2.0,
    W_s=0.4,
    narrow_slots=(2.66, 1.0, 2.0, 1.15, 2.0, 0.8),
    slot_depths=(1.0, 1.5, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5),
    f_design=28e9,
)

# "camv-table1" is the historical name of the same preset
BUILTIN_PRESETS = {"camv-reference": CAMV_REFERENCE, "camv-table1": CAMV_REFERENCE}


def load_preset(name: str) -> ElementParams:
    """Look a preset up in ``$CAMV_PRESET_DIR`` first, then among the built-ins."""
    preset_dir = os.environ.get(PRESET_DIR_ENV)
    if preset_dir:
        candidate = Path(preset_dir) / f"{name}.json"
        if candidate.is_file():
            return load_params_file(candidate)
    try:
        return BUILTIN_PRESETS[name]
    except KeyError:
        raise ConfigError("$", f"unknown preset {name!r}") from None


def load_params_file(path) -> ElementParams:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"{path}: invalid JSON ({exc})") from None
    return ElementParams.from_dict(data)


# --------------------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {"ok": self.ok, "errors": list(self.errors), "warnings": list(self.warnings)}


def validate_params(params: ElementParams, ls_band: tuple[float, float] = (0.5, 2.0)) -> ValidationReport:
    """Check parameter invariants (errors) and the half/quarter-wavelength design rules (warnings).

    ``ls_band`` is the accepted range of ``L_s / (lambda/4)`` at ``f_design``.
    Warnings never block geometry construction.
    """
    report = ValidationReport()
    err = report.errors.append

    lengths = {k: getattr(params, k) for k in _SCALAR_FIELDS}
    lengths.update({f"L{i + 1}": v for i, v in enumerate(params.narrow_slots)})
    lengths.update({f"Ls{i + 1}": v for i, v in enumerate(params.slot_depths)})
    for name, value in lengths.items():
        if not (math.isfinite(value) and value > 0):
            err(f"all lengths strictly positive violated: {name} = {value:g} mm")
    if len(params.narrow_slots) != N_NARROW_SLOTS:
        err(f"expected {N_NARROW_SLOTS} narrow-slot lengths L1..L6, got {len(params.narrow_slots)}")
    if len(params.slot_depths) != N_CORRUGATIONS:
        err(f"expected {N_CORRUGATIONS} corrugation depths Ls1..Ls9, got {len(params.slot_depths)}")

    p = params
    if not p.w_t < p.w_a:
        err(f"w_t < w_a violated: w_t = {p.w_t:g} mm, w_a = {p.w_a:g} mm")
    if not p.w_a <= p.w:
        err(f"w_a <= w violated: w_a = {p.w_a:g} mm, w = {p.w:g} mm")
    if not p.w <= p.d:
        err(f"w <= d violated: w = {p.w:g} mm, d = {p.d:g} mm")
    if not p.L_s < p.L:
        err(f"L_s < L violated: L_s = {p.L_s:g} mm, L = {p.L:g} mm")
    if not p.h + p.L_s <= p.L:
        err(f"h + L_s <= L violated: h + L_s = {p.h + p.L_s:g} mm, L = {p.L:g} mm")
    depths = p.slot_depths
    for i in range(len(depths) - 1):
        if depths[i] > depths[i + 1]:
            err(f"Ls{i + 1} <= Ls{i + 2} violated: {depths[i]:g} mm > {depths[i + 1]:g} mm")
    if not (math.isfinite(p.f_design) and p.f_design > 0):
        err(f"f_design must be positive, got {p.f_design!r} Hz")
        return report

    lam = wavelength(p.f_design) * 1e3
    ghz = p.f_design / 1e9
    if p.d > lam / 2:
        report.warnings.append(
            f"d = {p.d:g} mm > lambda/2 = {lam / 2:.3f} mm at {ghz:g} GHz (element larger than half a wavelength)"
        )
    ratio = p.L_s / (lam / 4)
    lo, hi = ls_band
    if not lo <= ratio <= hi:
        report.warnings.append(
            f"L_s = {p.L_s:g} mm vs lambda/4 = {lam / 4:.3f} mm at {ghz:g} GHz "
            f"(ratio {ratio:.2f}, advisory band {lo:g}-{hi:g})"
        )
    return report


def require_valid(params: ElementParams) -> None:
    report = validate_params(params)
    if report.errors:
        raise GeometryError("; ".join(report.errors))


# --------------------------------------------------------------------------- taper


def taper_halfwidth(params: ElementParams, x):
    """Signed half-width of the exponential slot at taper distance ``x`` (mm).

    Returns ``-(w_a/2) * exp(ln(w_t/w_a) * x / L_s)``: ``-w_a/2`` at the
    aperture (``x = 0``) and ``-w_t/2`` at the throat (``x = L_s``).
    Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > params.L_s):
        raise DomainError(f"taper distance must lie in [0, {params.L_s:g}] mm, got {x!r}")
    y = -(params.w_a / 2) * np.exp(math.log(params.w_t / params.w_a) * (arr / params.L_s))
    return float(y) if y.ndim == 0 else y


def taper_slope(params: ElementParams, x):
    """Analytic dy/dx of :func:`taper_halfwidth`."""
    return taper_halfwidth(params, x) * (math.log(params.w_t / params.w_a) / params.L_s)


@dataclass(frozen=True, eq=False)
class ProfilePolyline:
    """Ordered 2-D points in mm; ``slots`` lists the corrugation features cut into it."""

    points: np.ndarray
    closed: bool
    slots: tuple = ()

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ArgumentError("profile points must have shape (n, 2)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def signed_area(self) -> float:
        return polygon.signed_area(self.points) if self.closed else 0.0

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    @property
    def length(self) -> float:
        p = self.points
        seg = np.diff(np.vstack([p, p[:1]]) if self.closed else p, axis=0)
        return float(np.hypot(seg[:, 0], seg[:, 1]).sum())

    def is_simple(self) -> bool:
        return polygon.is_simple(self.points, closed=self.closed)


def taper_curve(params: ElementParams, n_samples: int = DEFAULT_TAPER_SAMPLES) -> ProfilePolyline:
    """Open polyline ``(x, taper_halfwidth(x))`` sampled uniformly over ``[0, L_s]``."""
    if int(n_samples) != n_samples or n_samples < 2:
        raise ArgumentError(f"n_samples must be an integer >= 2, got {n_samples!r}")
    x = np.linspace(0.0, params.L_s, int(n_samples))
    return ProfilePolyline(np.column_stack([x, taper_halfwidth(params, x)]), closed=False)


def _edge_point(params: ElementParams, x):
    """Right-hand slot edge in profile coordinates at taper distance ``x``."""
    return np.array([-taper_halfwidth(params, x), params.L - x])


def _edge_arc(params: ElementParams, n: int = 8193):
    """Dense samples of taper distance and arc length measured from the throat."""
    x = np.linspace(0.0, params.L_s, n)
    pts = np.column_stack([-taper_halfwidth(params, x), params.L - x])
    seg = np.hypot(*np.diff(pts, axis=0).T)
    from_aperture = np.concatenate([[0.0], np.cumsum(seg)])
    return x, from_aperture[-1] - from_aperture


def taper_edge_length(params: ElementParams) -> float:
    """Arc length of one slot edge between aperture and throat (mm)."""
    _, s = _edge_arc(params)
    return float(s[0])


# --------------------------------------------------------------------------- corrugations


@dataclass(frozen=True, eq=False)
class CorrugationSlot:
    """One corrugation cut; ``corners`` run opening -> bottom -> bottom -> opening."""

    index: int
    side: int
    depth: float
    width: float
    anchor: tuple[float, float]
    direction: tuple[float, float]
    corners: tuple[tuple[float, float], ...]

    @property
    def area(self) -> float:
        return self.width * self.depth

    def mirrored(self) -> CorrugationSlot:
        flip = lambda p: (-p[0], p[1])
        return dataclasses.replace(
            self,
            side=-self.side,
            anchor=flip(self.anchor),
            direction=flip(self.direction),
            corners=tuple(flip(c) for c in self.corners),
        )


def _slot_in_right_frame(params: ElementParams, index: int, x_anchor: float):
    """Slot cut from the right edge, pointing at the flare's outer base corner.

    Returns the slot and the taper distances of its two opening points.
    """
    depth = params.slot_depths[index - 1]
    anchor = _edge_point(params, x_anchor)
    corner = np.array([params.w / 2, params.h])
    a = corner - anchor
    a /= np.hypot(*a)
    n = np.array([-a[1], a[0]])

    def offset(x, target):
        return float(np.dot(_edge_point(params, x) - anchor, n)) - target

    openings = []
    for target in (params.W_s / 2, -params.W_s / 2):
        lo = hi = x_anchor
        step = params.W_s / 4
        found = None
        for _ in range(200):
            lo, hi = max(0.0, lo - step), min(params.L_s, hi + step)
            for a_, b_ in ((lo, x_anchor), (x_anchor, hi)):
                if a_ < b_ and offset(a_, target) * offset(b_, target) <= 0:
                    found = brentq(offset, a_, b_, args=(target,), xtol=1e-14, rtol=1e-14)
                    break
            if found is not None or (lo == 0.0 and hi == params.L_s):
                break
        if found is None:
            raise GeometryError(f"corrugation slot Ls{index}: opening of width W_s does not fit on the taper edge")
        openings.append(found)
    xa, xb = sorted(openings)
    pa, pb = _edge_point(params, xa), _edge_point(params, xb)
    corners = (pa, pa + depth * a, pb + depth * a, pb)
    slot = CorrugationSlot(
        index=index,
        side=1,
        depth=depth,
        width=params.W_s,
        anchor=(float(anchor[0]), float(anchor[1])),
        direction=(float(a[0]), float(a[1])),
        corners=tuple((float(c[0]), float(c[1])) for c in corners),
    )
    return slot, (xa, xb)


def _quads_overlap(p, q) -> bool:
    """Separating-axis test for two convex quadrilaterals (touching counts as overlap)."""
    p, q = np.asarray(p), np.asarray(q)
    for poly in (p, q):
        edges = np.roll(poly, -1, axis=0) - poly
        for e in edges:
            axis = np.array([-e[1], e[0]])
            a, b = p @ axis, q @ axis
            if a.max() < b.min() or b.max() < a.min():
                return False
    return True


def _corrugation_layout(params: ElementParams):
    require_valid(params)
    edge = taper_edge_length(params)
    need = N_CORRUGATIONS * params.W_s
    if need > edge:
        raise GeometryError(
            f"corrugation slots need 9 * W_s = {need:g} mm but the taper edge is only {edge:.4f} mm long"
        )
    # openings start L1/2 of arc above the throat so the shallowest cut clears the narrow slots
    margin = params.narrow_slots[0] / 2
    if margin >= edge:
        raise GeometryError(f"taper edge ({edge:.4f} mm) is shorter than the throat margin L1/2 = {margin:g} mm")
    xs, arc = _edge_arc(params)
    x_of_arc = lambda s: float(np.interp(s, arc[::-1], xs[::-1]))

    layout = []
    for k in range(N_CORRUGATIONS):
        s_k = margin + (k + 0.5) * (edge - margin) / N_CORRUGATIONS
        slot, xab = _slot_in_right_frame(params, k + 1, x_of_arc(s_k))
        side = 1 if k % 2 == 0 else -1
        layout.append((slot if side > 0 else slot.mirrored(), xab))

    slots = [s for s, _ in layout]
    for i in range(len(slots)):
        for j in range(i + 1, len(slots)):
            if slots[i].side == slots[j].side and _quads_overlap(slots[i].corners, slots[j].corners):
                raise GeometryError(f"corrugation slots Ls{i + 1} and Ls{j + 1} overlap")
    return layout


def corrugation_slots(params: ElementParams) -> list[CorrugationSlot]:
    """The nine corrugation cuts, Ls1 nearest the feed to Ls9 nearest the aperture.

    Openings sit at uniform arc-length intervals along the slot edge, starting
    ``L1/2`` above the throat. Odd-numbered cuts go into the ``+x`` flare and
    even-numbered cuts into the ``-x`` flare; every cut is aimed at the outer
    base corner of its flare so deep cuts stay inside the metal.
    """
    return [slot for slot, _ in _corrugation_layout(params)]


# --------------------------------------------------------------------------- element profile


def _half_outline(params: ElementParams, layout, n_samples: int) -> list:
    """Right half of the slot boundary, from the aperture corner down the taper,
    through the narrow-slot stack, ending at the bottom of the last narrow slot."""
    tol = 1e-9
    events = []
    for slot, (xa, xb) in layout:
        events.append((xa, [np.array(c) for c in slot.corners]))
    windows = [xab for _, xab in layout]
    for x in np.linspace(0.0, params.L_s, n_samples):
        if any(xa - tol <= x <= xb + tol for xa, xb in windows):
            continue
        events.append((x, [_edge_point(params, x)]))
    events.sort(key=lambda e: e[0])
    pts = [p for _, group in events for p in group]
    if windows and max(xb for _, xb in windows) >= params.L_s - tol:
        pts.append(_edge_point(params, params.L_s))

    y_throat = params.L - params.L_s
    half_t = params.w_t / 2
    for j, length in enumerate(params.narrow_slots):
        top = y_throat - 2 * j * params.W_s
        bottom = top - params.W_s
        if j > 0:
            pts.append(np.array([half_t, top]))
        pts.append(np.array([length / 2, top]))
        pts.append(np.array([length / 2, bottom]))
        if j < len(params.narrow_slots) - 1:
            pts.append(np.array([half_t, bottom]))
    return pts


def _check_narrow_slots(params: ElementParams) -> None:
    n = len(params.narrow_slots)
    stack = (2 * n - 1) * params.W_s
    room = params.L - params.L_s - params.h
    if stack >= room:
        raise GeometryError(
            f"narrow slots need {stack:g} mm below the throat but only {room:g} mm remain above the base plate"
        )
    for i, length in enumerate(params.narrow_slots):
        if not params.w_t < length < params.w:
            raise GeometryError(f"narrow slot L{i + 1} = {length:g} mm must lie between w_t and w")


def element_profile(
    params: ElementParams, corrugated: bool = False, n_samples: int = DEFAULT_TAPER_SAMPLES
) -> ProfilePolyline:
    """Closed counter-clockwise outline of the element cross-section.

    Base plate ``d x h``, upper body of width ``w`` up to height ``L``, the
    exponential slot cut from the aperture down to the throat, the narrow
    slots L1..L6 stacked below the throat and, if ``corrugated``, the nine
    corrugation cuts.
    """
    require_valid(params)
    if int(n_samples) != n_samples or n_samples < 2:
        raise ArgumentError(f"n_samples must be an integer >= 2, got {n_samples!r}")
    _check_narrow_slots(params)
    layout = _corrugation_layout(params) if corrugated else []
    right = [(s, xab) for s, xab in layout if s.side > 0]
    left = [(s.mirrored(), xab) for s, xab in layout if s.side < 0]

    d2, w2, h, L = params.d / 2, params.w / 2, params.h, params.L
    right_half = _half_outline(params, right, int(n_samples))
    left_half = [np.array([-p[0], p[1]]) for p in reversed(_half_outline(params, left, int(n_samples)))]
    outline = (
        [np.array(p) for p in ((-d2, 0.0), (d2, 0.0), (d2, h), (w2, h), (w2, L))]
        + right_half
        + left_half
        + [np.array(p) for p in ((-w2, L), (-w2, h), (-d2, h))]
    )
    pts = polygon.drop_duplicates(np.array(outline))
    profile = ProfilePolyline(pts, closed=True, slots=tuple(s for s, _ in layout))
    if profile.signed_area <= 0 or not profile.is_simple():
        raise GeometryError(
            "element outline self-intersects; corrugation or narrow slots collide with each other or the body edge"
        )
    return profile


# --------------------------------------------------------------------------- array lattice


@dataclass(frozen=True)
class ArrayLayout:
    """Rectangular lattice; element ``k`` (1-based) sits at row ``(k-1)//cols``, column ``(k-1)%cols``.

    Rows advance along x with spacing ``pitch_x``; columns advance along y
    with spacing ``pitch_y`` (mm).
    """

    rows: int
    cols: int
    pitch_x: float
    pitch_y: float

    def __post_init__(self):
        for name in ("rows", "cols"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ArgumentError(f"{name} must be an integer >= 1, got {v!r}")
            object.__setattr__(self, name, int(v))
        for name in ("pitch_x", "pitch_y"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r} mm")
            object.__setattr__(self, name, v)

    @classmethod
    def square(cls, n: int, pitch: float) -> ArrayLayout:
        return cls(n, n, pitch, pitch)

    @property
    def size(self) -> int:
        return self.rows * self.cols

    @property
    def footprint(self) -> tuple[float, float]:
        return self.rows * self.pitch_x, self.cols * self.pitch_y

    def element_index(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise ArgumentError(f"(row, col) = ({row}, {col}) outside a {self.rows}x{self.cols} lattice")
        return row * self.cols + col + 1

    def row_col(self, index: int) -> tuple[int, int]:
        if not 1 <= index <= self.size:
            raise ArgumentError(f"element index {index} outside 1..{self.size}")
        return divmod(index - 1, self.cols)

    @property
    def numbering(self) -> dict[int, tuple[int, int]]:
        return {k: self.row_col(k) for k in range(1, self.size + 1)}

    def indices(self) -> tuple[np.ndarray, np.ndarray]:
        """Row and column index arrays in element-number order."""
        k = np.arange(self.size)
        return k // self.cols, k % self.cols

    @classmethod
    def from_dict(cls, data: Mapping, path: str = "$", default_pitch: float | None = None) -> ArrayLayout:
        if not isinstance(data, Mapping):
            raise ConfigError(path, "expected an object with rows, cols and pitch")
        known = {"rows", "cols", "pitch_mm", "pitch_x_mm", "pitch_y_mm"}
        for key in data:
            if key not in known:
                raise ConfigError(f"{path}.{key}", "unknown array field")
        vals = {}
        for key in ("rows", "cols"):
            if key not in data:
                raise ConfigError(f"{path}.{key}", "missing array field")
            v = data[key]
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"{path}.{key}", f"expected an integer >= 1, got {v!r}")
            vals[key] = v
        common = data.get("pitch_mm", default_pitch)
        for axis in ("x", "y"):
            key = f"pitch_{axis}_mm"
            where = f"{path}.{key}" if key in data else f"{path}.pitch_mm"
            v = data.get(key, common)
            if v is None:
                raise ConfigError(where, "missing pitch")
            v = _number(v, where)
            if v <= 0:
                raise ConfigError(where, "pitch must be positive")
            vals[f"pitch_{axis}"] = v
        return cls(**vals)


def array_lattice(layout: ArrayLayout) -> np.ndarray:
    """Element centres (mm), shape ``(rows*cols, 2)`` in element-number order, centred on the origin."""
    row, col = layout.indices()
    x = (row - (layout.rows - 1) / 2) * layout.pitch_x
    y = (col - (layout.cols - 1) / 2) * layout.pitch_y
    return np.column_stack([x, y])


def lattice_rows(layout: ArrayLayout) -> Iterable[tuple[int, int, int, float, float]]:
    """``(element_index, row, col, x_mm, y_mm)`` tuples for tabular export."""
    centres = array_lattice(layout)
    row, col = layout.indices()
    for k in range(layout.size):
        yield k + 1, int(row[k]), int(col[k]), float(centres[k, 0]), float(centres[k, 1])


__all__: Sequence[str] = [
    "BUILTIN_PRESETS",
    "CAMV_REFERENCE",
    "ArrayLayout",
    "CorrugationSlot",
    "ElementParams",
    "ProfilePolyline",
    "ValidationReport",
    "array_lattice",
    "corrugation_slots",
    "element_profile",
    "lattice_rows",
    "load_params_file",
    "load_preset",
    "require_valid",
    "taper_curve",
    "taper_edge_length",
    "taper_halfwidth",
    "taper_slope",
    "validate_params",
]
