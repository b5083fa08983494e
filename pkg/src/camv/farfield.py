"""Far-field synthesis and pattern analysis for rectangular arrays.

Angles are radians internally (theta from the array normal, phi from +x);
files use degrees. Gain values are linear power ratios.
"""

from __future__ import annotations

import csv
import functools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .beamsteer import Excitation, SteeringCommand, excitation_for
from .constants import wavelength
from .errors import (
    AccuracyError,
    ArgumentError,
    DegeneratePatternError,
    DomainError,
    PatternFormatError,
)
from .fileio import atomic_writer
from .geometry import ArrayLayout, array_lattice

TWO_PI = 2 * math.pi
KINDS = ("array_factor", "gain_estimate", "imported_embedded")
GRATING_THRESHOLD_DB = 3.0


# --------------------------------------------------------------------------- grid and models


@dataclass(frozen=True, eq=False)
class AngleGrid:
    """Ascending theta and phi samples (radians)."""

    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        for name in ("theta", "phi"):
            v = np.array(getattr(self, name), dtype=float).reshape(-1)
            if v.size < 2:
                raise ArgumentError(f"{name} needs at least 2 samples")
            if not np.all(np.isfinite(v)) or np.any(np.diff(v) <= 0):
                raise ArgumentError(f"{name} samples must be finite and strictly increasing")
            v.setflags(write=False)
            object.__setattr__(self, name, v)
        if self.theta[0] < -1e-12 or self.theta[-1] > math.pi + 1e-12:
            raise DomainError("theta samples must lie within [0, pi]")
        if self.phi[0] < -1e-12 or self.phi[-1] > TWO_PI + 1e-12:
            raise DomainError("phi samples must lie within [0, 2*pi]")

    @classmethod
    def regular(cls, theta_step_deg: float = 0.25, phi_step_deg: float = 1.0, theta_max_deg: float = 90.0):
        """Uniform grid: theta over ``[0, theta_max]`` inclusive, phi over ``[0, 360)``."""
        if theta_step_deg <= 0 or phi_step_deg <= 0:
            raise DomainError("grid steps must be positive")
        n_t = int(round(theta_max_deg / theta_step_deg)) + 1
        n_p = int(round(360.0 / phi_step_deg))
        if not math.isclose((n_t - 1) * theta_step_deg, theta_max_deg, rel_tol=1e-9):
            raise DomainError(f"theta step {theta_step_deg} deg does not divide {theta_max_deg} deg")
        if not math.isclose(n_p * phi_step_deg, 360.0, rel_tol=1e-9):
            raise DomainError(f"phi step {phi_step_deg} deg does not divide 360 deg")
        theta = np.radians(np.linspace(0.0, theta_max_deg, n_t))
        phi = np.radians(np.arange(n_p) * phi_step_deg)
        return cls(theta, phi)

    @property
    def shape(self) -> tuple[int, int]:
        return self.theta.size, self.phi.size

    @property
    def azimuth_closure(self) -> str | None:
        """``"wrap"`` if the next sample after the last would be ``phi[0] + 2*pi``,
        ``"closed"`` if the last sample already repeats the first, else ``None``."""
        step = np.diff(self.phi)
        if math.isclose(self.phi[-1] - self.phi[0], TWO_PI, rel_tol=0, abs_tol=1e-9):
            return "closed"
        gap = self.phi[0] + TWO_PI - self.phi[-1]
        if np.allclose(step, gap, rtol=1e-6, atol=1e-12):
            return "wrap"
        return None

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.theta, self.phi, indexing="ij")


@dataclass(frozen=True)
class ElementModel:
    """Stand-in element pattern: ``isotropic`` or field ``cos(theta)**q`` (zero behind the aperture)."""

    kind: str = "cosine_q"
    q: float = 1.0

    def __post_init__(self):
        if self.kind not in ("isotropic", "cosine_q"):
            raise ArgumentError(f"unknown element model {self.kind!r}")
        if not (math.isfinite(self.q) and self.q >= 0):
            raise DomainError(f"cosine exponent q must be finite and >= 0, got {self.q!r}")

    def field(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.kind == "isotropic":
            return np.ones_like(theta)
        c = np.clip(np.cos(theta), 0.0, None)
        return c**self.q


ISOTROPIC = ElementModel("isotropic", 0.0)


@dataclass(frozen=True, eq=False)
class FarFieldPattern:
    """Values sampled on ``grid``; complex field for array factors, linear power for gains."""

    grid: AngleGrid
    values: np.ndarray
    frequency: float | None
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown pattern kind {self.kind!r}")
        v = np.array(self.values)
        if v.shape != self.grid.shape:
            raise ArgumentError(f"values have shape {v.shape}, grid is {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError("pattern values must be finite")
        if np.iscomplexobj(v):
            if self.kind == "gain_estimate":
                raise ArgumentError("gain patterns hold real values")
        else:
            v = v.astype(float)
            if self.kind == "array_factor":
                v = v.astype(complex)
            elif np.any(v < 0):
                raise DomainError("gain values must be non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def power(self) -> np.ndarray:
        """Linear power: ``|E|**2`` for field kinds, the values themselves for gains."""
        return np.abs(self.values) ** 2 if self.is_complex else self.values


# --------------------------------------------------------------------------- synthesis


def _positions_m(layout: ArrayLayout) -> np.ndarray:
    return array_lattice(layout) * 1e-3


def array_factor(layout: ArrayLayout, excitation: Excitation, frequency: float, theta, phi):
    """Complex array factor at direction(s) ``(theta, phi)``; inputs broadcast together."""
    if excitation.layout.size != layout.size:
        raise ArgumentError(f"excitation has {excitation.layout.size} elements, layout has {layout.size}")
    k = TWO_PI / wavelength(frequency)
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    shape = theta.shape
    st = np.sin(theta).reshape(-1)
    u = st * np.cos(phi).reshape(-1)
    v = st * np.sin(phi).reshape(-1)
    pos = _positions_m(layout)
    w = excitation.weights
    out = np.empty(u.size, dtype=complex)
    chunk = max(1, 2**21 // max(layout.size, 1))
    for s in range(0, u.size, chunk):
        arg = k * (np.outer(pos[:, 0], u[s : s + chunk]) + np.outer(pos[:, 1], v[s : s + chunk]))
        out[s : s + chunk] = w @ np.exp(1j * arg)
    out = out.reshape(shape)
    return complex(out) if out.ndim == 0 else out


def array_factor_pattern(layout, excitation, frequency, grid: AngleGrid) -> FarFieldPattern:
    th, ph = grid.mesh()
    return FarFieldPattern(grid, array_factor(layout, excitation, frequency, th, ph), frequency, "array_factor")


@functools.lru_cache(maxsize=64)
def _gain_normalization(layout: ArrayLayout, frequency: float, model: ElementModel) -> float:
    """Scale that makes the broadside uniform pattern peak at its quadrature directivity."""
    grid = AngleGrid.regular(0.25, 1.0)
    th, ph = grid.mesh()
    af = array_factor(layout, Excitation.uniform(layout), frequency, th, ph)
    p = np.abs(af) ** 2 * model.field(th) ** 2
    return 4 * math.pi / _integrate(grid, p)


def compute_pattern(
    layout: ArrayLayout,
    excitation: Excitation,
    frequency: float,
    grid: AngleGrid | None = None,
    model: ElementModel = ElementModel(),
) -> FarFieldPattern:
    """Estimated gain ``|AF|**2 * EF**2`` scaled per :func:`_gain_normalization`.

    The scale integrates the forward hemisphere only, i.e. it assumes no
    back radiation; values are estimates, not realized gain.
    """
    grid = grid or AngleGrid.regular()
    th, ph = grid.mesh()
    af = array_factor(layout, excitation, frequency, th, ph)
    p = np.abs(af) ** 2 * model.field(th) ** 2
    return FarFieldPattern(grid, p * _gain_normalization(layout, float(frequency), model), frequency, "gain_estimate")


def embedded_array_pattern(
    layout: ArrayLayout, excitation: Excitation, frequency: float, element: FarFieldPattern
) -> FarFieldPattern:
    """Array gain from one shared embedded element pattern: ``G_e * |AF|**2 / sum(|a|**2)``."""
    th, ph = element.grid.mesh()
    af = array_factor(layout, excitation, frequency, th, ph)
    total = float(np.sum(excitation.amplitude**2))
    if total == 0:
        raise DegeneratePatternError("excitation has zero total power")
    return FarFieldPattern(element.grid, element.power * np.abs(af) ** 2 / total, frequency, "gain_estimate")


# --------------------------------------------------------------------------- quadrature


def _integrate(grid: AngleGrid, power: np.ndarray) -> float:
    """Trapezoidal integral of ``power * sin(theta)`` over the grid, fixed summation order."""
    closure = grid.azimuth_closure
    phi, p = grid.phi, power
    if closure == "wrap":
        phi = np.append(phi, phi[0] + TWO_PI)
        p = np.concatenate([p, p[:, :1]], axis=1)
    elif closure is None:
        raise ArgumentError("integration needs full azimuth coverage")
    ring = np.trapezoid(p, phi, axis=1)
    return float(np.trapezoid(ring * np.sin(grid.theta), grid.theta))


@dataclass(frozen=True)
class Directivity:
    dbi: float
    linear: float
    domain: str  # "hemisphere" or "sphere"


def directivity(pattern: FarFieldPattern, min_samples: int = 10) -> Directivity:
    """``4*pi*peak / integral(power * sin(theta))`` by trapezoidal quadrature.

    The pattern must cover theta from 0 to pi/2 (hemisphere: nothing is
    assumed behind it) or to pi (sphere), and the full azimuth circle.
    """
    grid = pattern.grid
    if min(grid.shape) < min_samples:
        raise AccuracyError(f"grid {grid.shape} too coarse; need >= {min_samples} samples per axis")
    if abs(grid.theta[0]) > 1e-9:
        raise ArgumentError("directivity needs theta to start at 0")
    if math.isclose(grid.theta[-1], math.pi / 2, abs_tol=1e-9):
        domain = "hemisphere"
    elif math.isclose(grid.theta[-1], math.pi, abs_tol=1e-9):
        domain = "sphere"
    else:
        raise ArgumentError("directivity needs theta to end at pi/2 (hemisphere) or pi (sphere)")
    p = pattern.power
    total = _integrate(grid, p)
    if total <= 0:
        raise DegeneratePatternError("pattern carries no power")
    lin = 4 * math.pi * float(p.max()) / total
    return Directivity(10 * math.log10(lin), lin, domain)


# --------------------------------------------------------------------------- metrics


def angular_distance(theta1, phi1, theta2, phi2):
    """Great-circle angle (rad) between two directions."""
    a = np.stack(np.broadcast_arrays(*_unit(theta1, phi1)), axis=-1)
    b = np.stack(np.broadcast_arrays(*_unit(theta2, phi2)), axis=-1)
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    out = np.arctan2(cross, dot)
    return float(out) if out.ndim == 0 else out


def _unit(theta, phi):
    theta, phi = np.asarray(theta, dtype=float), np.asarray(phi, dtype=float)
    return np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)


@dataclass(frozen=True)
class GratingLobe:
    theta: float
    phi: float
    relative_db: float


@dataclass(frozen=True)
class PatternMetrics:
    """Summary of one pattern; angles in radians, beamwidth in degrees."""

    peak_theta: float
    peak_phi: float
    peak_db: float
    cut_phi: float
    hpbw_deg: float
    sidelobe_db: float | None
    grating_lobes: tuple[GratingLobe, ...] = field(default=())

    @property
    def grating_lobe(self) -> bool:
        return bool(self.grating_lobes)


def _phi_column(grid: AngleGrid, power: np.ndarray, phi: float):
    """Power along one azimuth, exact column or linear interpolation between neighbours."""
    phi = phi % TWO_PI
    candidates = np.array([phi, phi + TWO_PI, phi - TWO_PI])
    for c in candidates:
        hit = np.flatnonzero(np.abs(grid.phi - c) < 1e-9)
        if hit.size:
            return power[:, hit[0]]
    ext_phi, ext_p = grid.phi, power
    if grid.azimuth_closure == "wrap":
        ext_phi = np.append(ext_phi, ext_phi[0] + TWO_PI)
        ext_p = np.concatenate([ext_p, ext_p[:, :1]], axis=1)
    for c in candidates:
        if ext_phi[0] <= c <= ext_phi[-1]:
            j = int(np.searchsorted(ext_phi, c))
            f = (c - ext_phi[j - 1]) / (ext_phi[j] - ext_phi[j - 1])
            return (1 - f) * ext_p[:, j - 1] + f * ext_p[:, j]
    return None


def principal_cut(pattern: FarFieldPattern, cut_phi: float):
    """Signed cut angles (deg) and power through azimuth ``cut_phi``.

    Negative angles come from the ``cut_phi + pi`` half-plane when the grid
    holds it; otherwise the cut is one-sided.
    """
    grid, p = pattern.grid, pattern.power
    main = _phi_column(grid, p, cut_phi)
    if main is None:
        raise ArgumentError(f"cut phi = {math.degrees(cut_phi):g} deg is outside the pattern's azimuth coverage")
    theta_deg = np.degrees(grid.theta)
    back = _phi_column(grid, p, cut_phi + math.pi)
    if back is None:
        return theta_deg, np.asarray(main, dtype=float)
    skip = 1 if abs(grid.theta[0]) < 1e-12 else 0
    angles = np.concatenate([-theta_deg[::-1][: theta_deg.size - skip], theta_deg])
    values = np.concatenate([back[::-1][: theta_deg.size - skip], main])
    return angles, np.asarray(values, dtype=float)


def _half_power_width(angles: np.ndarray, p: np.ndarray, i0: int) -> float:
    half = p[i0] / 2

    def crossing(step):
        i = i0
        while 0 <= i + step < p.size:
            j = i + step
            if p[j] < half:
                # interpolate in dB between the last sample above and the first below
                a, b = 10 * np.log10(p[i]), 10 * np.log10(max(p[j], 1e-300))
                t = (a - 10 * np.log10(half)) / (a - b)
                return angles[i] + t * (angles[j] - angles[i])
            i = j
        return angles[i]

    return float(crossing(1) - crossing(-1))


def _main_lobe_bounds(p: np.ndarray, i0: int) -> tuple[int, int]:
    lo = i0
    while lo > 0 and p[lo - 1] <= p[lo]:
        lo -= 1
    hi = i0
    while hi < p.size - 1 and p[hi + 1] <= p[hi]:
        hi += 1
    return lo, hi


def _local_maxima_1d(p: np.ndarray) -> np.ndarray:
    left = np.concatenate([[-np.inf], p[:-1]])
    right = np.concatenate([p[1:], [-np.inf]])
    return np.flatnonzero((p >= left) & (p >= right) & ((p > left) | (p > right)))


def _is_flat(p: np.ndarray) -> bool:
    top = float(p.max())
    return float(p.min()) >= top * (1 - 1e-9)


def _secondary_maxima(pattern: FarFieldPattern, exclusion: float):
    """Distinct 2-D local maxima other than the global peak, strongest first."""
    grid, p = pattern.grid, pattern.power
    n_t, _ = p.shape
    wrap = grid.azimuth_closure is not None
    padded = np.pad(p, ((1, 1), (0, 0)), mode="edge")
    padded = np.pad(padded, ((0, 0), (1, 1)), mode="wrap" if wrap else "edge")
    nb = np.full(p.shape, -np.inf)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            nb = np.maximum(nb, padded[1 + di : 1 + di + n_t, 1 + dj : 1 + dj + p.shape[1]])
    is_max = p >= nb
    # poles are single directions: compare against the whole adjacent ring
    for row, ring in ((0, 1), (n_t - 1, n_t - 2)):
        pole = abs(grid.theta[row]) < 1e-12 or abs(grid.theta[row] - math.pi) < 1e-12
        if pole:
            is_max[row, :] = False
            is_max[row, 0] = p[row, 0] >= p[ring, :].max()
    ii, jj = np.nonzero(is_max & (p > 0))
    order = np.lexsort((jj, ii, -p[ii, jj]))
    th, ph, val = grid.theta[ii[order]], grid.phi[jj[order]], p[ii[order], jj[order]]
    kept: list[int] = []
    for k in range(val.size):
        if all(angular_distance(th[k], ph[k], th[m], ph[m]) > exclusion for m in kept):
            kept.append(k)
    return [(float(th[k]), float(ph[k]), float(val[k])) for k in kept[1:]], (float(th[kept[0]]), float(ph[kept[0]]))


def pattern_metrics(
    pattern: FarFieldPattern, cut_phi: float | None = None, grating_threshold_db: float = GRATING_THRESHOLD_DB
) -> PatternMetrics:
    """Peak, half-power beamwidth on the ``cut_phi`` plane, sidelobe level and grating lobes.

    ``cut_phi`` defaults to the azimuth of the peak. Sidelobes are local maxima
    of the cut beyond the nulls bounding the main lobe. Grating lobes are
    distinct maxima anywhere on the grid within ``grating_threshold_db`` of the
    peak. A perfectly flat pattern has no sidelobes and spans the whole cut.
    """
    p = pattern.power
    top = float(p.max())
    if not top > 0:
        raise DegeneratePatternError("pattern is identically zero")
    i, j = np.unravel_index(int(np.argmax(p)), p.shape)
    peak_theta, peak_phi = float(pattern.grid.theta[i]), float(pattern.grid.phi[j])
    cut_phi = peak_phi if cut_phi is None else float(cut_phi)
    angles, cut = principal_cut(pattern, cut_phi)
    peak_db = 10 * math.log10(top)

    if _is_flat(p):
        return PatternMetrics(peak_theta, peak_phi, peak_db, cut_phi, float(angles[-1] - angles[0]), None, ())

    i0 = int(np.argmax(cut))
    hpbw = _half_power_width(angles, cut, i0)
    lo, hi = _main_lobe_bounds(cut, i0)
    outside = [k for k in _local_maxima_1d(cut) if k < lo or k > hi]
    sll = None
    if outside:
        best = max(cut[k] for k in outside)
        sll = min(0.0, 10 * math.log10(best / cut[i0])) if best > 0 else None

    steps = [np.min(np.diff(pattern.grid.theta)), np.min(np.diff(pattern.grid.phi))]
    exclusion = max(3 * max(steps), math.radians(hpbw) / 2)
    others, _ = _secondary_maxima(pattern, exclusion)
    floor = top * 10 ** (-grating_threshold_db / 10)
    lobes = tuple(GratingLobe(t, f, 10 * math.log10(v / top)) for t, f, v in others if v >= floor)
    return PatternMetrics(peak_theta, peak_phi, peak_db, cut_phi, hpbw, sll, lobes)


# --------------------------------------------------------------------------- grating-lobe onset


@dataclass(frozen=True)
class GratingOnset:
    """Largest grating-lobe-free scan angle.

    ``status`` is ``"bounded"``, ``"unbounded"`` (pitch <= lambda/2, any scan
    is free, ``theta_max = pi/2``) or ``"at_broadside"`` (pitch >= lambda,
    ``theta_max = 0``).
    """

    theta_max: float
    status: str

    @property
    def degrees(self) -> float:
        return math.degrees(self.theta_max)


def grating_lobe_onset(pitch: float, frequency: float) -> GratingOnset:
    """Scan angle ``arcsin(lambda/d - 1)`` at which a grating lobe reaches the horizon; pitch in metres."""
    if not (math.isfinite(pitch) and pitch > 0):
        raise DomainError(f"pitch must be positive, got {pitch!r} m")
    r = wavelength(frequency) / pitch
    if r >= 2:
        return GratingOnset(math.pi / 2, "unbounded")
    if r <= 1:
        return GratingOnset(0.0, "at_broadside")
    return GratingOnset(math.asin(r - 1), "bounded")


# --------------------------------------------------------------------------- scan sweep


@dataclass(frozen=True, eq=False)
class SweepRow:
    """Metrics for one (frequency, scan) case plus the principal cut for plotting.

    ``beam_theta``/``beam_phi`` locate the array-factor maximum (where the
    phasing points the beam); ``metrics.peak_*`` locate the gain maximum, which
    a directive element factor pulls toward broadside.
    """

    frequency: float
    theta0: float
    phi0: float
    metrics: PatternMetrics
    beam_theta: float
    beam_phi: float
    cut_angles_deg: np.ndarray
    cut_db: np.ndarray

    @property
    def pointing_error(self) -> float:
        return angular_distance(self.beam_theta, self.beam_phi, self.theta0, self.phi0)

    @property
    def peak_offset(self) -> float:
        return angular_distance(self.metrics.peak_theta, self.metrics.peak_phi, self.theta0, self.phi0)


def _beam_direction(grid: AngleGrid, af_power: np.ndarray) -> tuple[float, float]:
    i, j = np.unravel_index(int(np.argmax(af_power)), af_power.shape)
    return float(grid.theta[i]), float(grid.phi[j])


def steered_case(layout, frequency, theta0, phi0, model, grid) -> SweepRow:
    cmd = SteeringCommand(theta0, phi0, frequency)
    exc = excitation_for(layout, cmd)
    th, ph = grid.mesh()
    af = array_factor(layout, exc, frequency, th, ph)
    af_power = np.abs(af) ** 2
    gain = af_power * model.field(th) ** 2 * _gain_normalization(layout, float(frequency), model)
    pattern = FarFieldPattern(grid, gain, frequency, "gain_estimate")
    metrics = pattern_metrics(pattern, cut_phi=phi0)
    bt, bp = _beam_direction(grid, af_power)
    angles, cut = principal_cut(pattern, phi0)
    cut_db = 10 * np.log10(np.maximum(cut, 1e-30))
    return SweepRow(frequency, theta0, phi0, metrics, bt, bp, angles, cut_db)


def scan_sweep(
    layout: ArrayLayout,
    frequencies: Sequence[float],
    scan_angles: Sequence[float],
    phi0: float,
    model: ElementModel = ElementModel(),
    grid: AngleGrid | None = None,
) -> list[SweepRow]:
    """One row per (frequency, scan angle), frequency-major in input order."""
    if not frequencies or not scan_angles:
        raise ArgumentError("frequencies and scan_angles must be non-empty")
    grid = grid or AngleGrid.regular()
    return [steered_case(layout, f, t, phi0, model, grid) for f in frequencies for t in scan_angles]


# --------------------------------------------------------------------------- CSV exchange

_COMPLEX_HEADER = ["theta_deg", "phi_deg", "re", "im"]
_GAIN_HEADER = ["theta_deg", "phi_deg", "gain_linear"]


def export_pattern_csv(pattern: FarFieldPattern, path, digits: int = 12) -> None:
    """Write the pattern CSV (theta-major rows, degrees)."""
    fmt = f"{{:.{digits}g}}".format
    th = np.degrees(pattern.grid.theta)
    ph = np.degrees(pattern.grid.phi)
    v = pattern.values
    with atomic_writer(path, newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        if pattern.is_complex:
            out.writerow(_COMPLEX_HEADER)
            for i in range(th.size):
                for j in range(ph.size):
                    z = v[i, j]
                    out.writerow([fmt(th[i]), fmt(ph[j]), fmt(z.real), fmt(z.imag)])
        else:
            out.writerow(_GAIN_HEADER)
            for i in range(th.size):
                for j in range(ph.size):
                    out.writerow([fmt(th[i]), fmt(ph[j]), fmt(v[i, j])])


def import_embedded_pattern(path, frequency: float | None = None) -> FarFieldPattern:
    """Read a pattern CSV; the grid is rebuilt from the sorted unique angles."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise PatternFormatError("empty file", row=1)
    header = [c.strip() for c in rows[0]]
    if header == _COMPLEX_HEADER:
        is_complex = True
    elif header == _GAIN_HEADER:
        is_complex = False
    else:
        raise PatternFormatError(
            f"header must be {','.join(_COMPLEX_HEADER)} or {','.join(_GAIN_HEADER)}, got {','.join(header)}", row=1
        )
    width = len(header)
    seen: dict[tuple[float, float], int] = {}
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise PatternFormatError(f"expected {width} columns, got {len(row)}", row=lineno)
        try:
            nums = [float(c) for c in row]
        except ValueError:
            raise PatternFormatError(f"non-numeric entry in {row!r}", row=lineno) from None
        if not all(math.isfinite(x) for x in nums):
            raise PatternFormatError("non-finite entry", row=lineno)
        key = (nums[0], nums[1])
        if key in seen:
            raise PatternFormatError(
                f"duplicate point theta={nums[0]:g}, phi={nums[1]:g} (first at row {seen[key]})", row=lineno
            )
        seen[key] = lineno
        if not is_complex and nums[2] < 0:
            raise PatternFormatError("gain_linear must be non-negative", row=lineno)
        records.append(nums)
    if not records:
        raise PatternFormatError("no data rows", row=2)
    data = np.array(records)
    thetas = np.unique(data[:, 0])
    phis = np.unique(data[:, 1])
    if thetas.size < 2 or phis.size < 2:
        raise PatternFormatError("grid needs at least 2 theta and 2 phi values")
    if len(records) != thetas.size * phis.size:
        present = set(seen)
        for t in thetas:
            for f in phis:
                if (t, f) not in present:
                    raise PatternFormatError(f"ragged grid: missing point theta={t:g}, phi={f:g}")
    ti = np.searchsorted(thetas, data[:, 0])
    pj = np.searchsorted(phis, data[:, 1])
    if is_complex:
        values = np.empty((thetas.size, phis.size), dtype=complex)
        values[ti, pj] = data[:, 2] + 1j * data[:, 3]
    else:
        values = np.empty((thetas.size, phis.size))
        values[ti, pj] = data[:, 2]
    try:
        grid = AngleGrid(np.radians(thetas), np.radians(phis))
    except (ArgumentError, DomainError) as exc:
        raise PatternFormatError(str(exc)) from None
    return FarFieldPattern(grid, values, frequency, "imported_embedded")
