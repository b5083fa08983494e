"""Progressive-phase beam steering for a uniform rectangular lattice.

Element ``(n, m)`` (row ``n`` along x, column ``m`` along y, both counted
from the element-1 corner) receives phase ``n*dphi_x + m*dphi_y`` with::

    dphi_x = -(2*pi*d_x/lambda) * sin(theta0) * cos(phi0)
    dphi_y = -(2*pi*d_y/lambda) * sin(theta0) * sin(phi0)
"""

from __future__ import annotations

import csv
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT, wavelength
from .errors import ArgumentError, DomainError
from .geometry import ArrayLayout

__all__ = [
    "SPEED_OF_LIGHT",
    "Excitation",
    "PhaseIncrements",
    "SteeringCommand",
    "excitation_for",
    "phase_increments",
    "uniform_window",
    "wavelength",
    "wrap_phase",
    "write_excitation_csv",
]


def wrap_phase(phi):
    """Wrap radians into ``(-pi, pi]``; works on scalars and arrays."""
    arr = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"phase must be finite, got {phi!r}")
    out = np.pi - np.mod(np.pi - arr, 2 * np.pi)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SteeringCommand:
    """Main-beam direction (radians) and operating frequency (Hz)."""

    theta0: float
    phi0: float
    frequency: float

    def __post_init__(self):
        if not (math.isfinite(self.theta0) and 0 <= self.theta0 <= math.pi / 2):
            raise DomainError(f"theta0 must lie in [0, pi/2] rad, got {self.theta0!r}")
        if not math.isfinite(self.phi0):
            raise DomainError(f"phi0 must be finite, got {self.phi0!r}")
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise DomainError(f"frequency must be positive, got {self.frequency!r} Hz")

    @classmethod
    def from_degrees(cls, theta0_deg: float, phi0_deg: float, frequency: float) -> SteeringCommand:
        return cls(math.radians(theta0_deg), math.radians(phi0_deg), frequency)


@dataclass(frozen=True)
class PhaseIncrements:
    dphi_x: float
    dphi_y: float


def phase_increments(pitch_x: float, command: SteeringCommand, pitch_y: float | None = None) -> PhaseIncrements:
    """Unwrapped inter-element phase steps (radians) for pitches in metres.

    ``pitch_y`` defaults to ``pitch_x`` (square lattice).
    """
    pitch_y = pitch_x if pitch_y is None else pitch_y
    for name, v in (("pitch_x", pitch_x), ("pitch_y", pitch_y)):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive, got {v!r} m")
    k = 2 * math.pi / wavelength(command.frequency)
    s = math.sin(command.theta0)
    return PhaseIncrements(
        dphi_x=-k * pitch_x * s * math.cos(command.phi0),
        dphi_y=-k * pitch_y * s * math.sin(command.phi0),
    )


def uniform_window(rows: int, cols: int) -> np.ndarray:
    return np.ones((rows, cols))


@dataclass(frozen=True, eq=False)
class Excitation:
    """Per-element amplitude (linear) and wrapped phase (rad), in element-number order."""

    layout: ArrayLayout
    amplitude: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitude, dtype=float).reshape(-1)
        ph = np.array(self.phase, dtype=float).reshape(-1)
        n = self.layout.size
        if amp.shape != (n,) or ph.shape != (n,):
            raise ArgumentError(f"excitation needs {n} amplitudes and phases, got {amp.size} and {ph.size}")
        if not (np.all(np.isfinite(amp)) and np.all(np.isfinite(ph))):
            raise DomainError("excitation values must be finite")
        if np.any(amp < 0):
            raise DomainError("excitation amplitudes must be non-negative")
        ph = wrap_phase(ph)
        ph = np.atleast_1d(ph)
        amp.setflags(write=False)
        ph.setflags(write=False)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)

    @property
    def weights(self) -> np.ndarray:
        """Complex weights ``a * exp(j*phase)``."""
        return self.amplitude * np.exp(1j * self.phase)

    def grid(self, which: str = "phase") -> np.ndarray:
        """Reshape ``amplitude`` or ``phase`` to ``(rows, cols)``."""
        return getattr(self, which).reshape(self.layout.rows, self.layout.cols)

    @classmethod
    def uniform(cls, layout: ArrayLayout) -> Excitation:
        return cls(layout, np.ones(layout.size), np.zeros(layout.size))


def excitation_for(
    layout: ArrayLayout,
    command: SteeringCommand,
    window: Callable[[int, int], np.ndarray] = uniform_window,
) -> Excitation:
    """Excitation that points the main beam at ``command``.

    Lattice pitches are taken from ``layout`` (mm). ``window`` returns a
    ``(rows, cols)`` amplitude taper; the default is uniform.
    """
    inc = phase_increments(layout.pitch_x * 1e-3, command, layout.pitch_y * 1e-3)
    n, m = layout.indices()
    phase = n * inc.dphi_x + m * inc.dphi_y
    amp = np.asarray(window(layout.rows, layout.cols), dtype=float)
    if amp.shape != (layout.rows, layout.cols):
        raise ArgumentError(f"window returned shape {amp.shape}, expected {(layout.rows, layout.cols)}")
    return Excitation(layout, amp.reshape(-1), phase)


def write_excitation_csv(excitation: Excitation, path, digits: int = 9) -> None:
    """CSV with columns ``element_index,row,col,amplitude,phase_rad,phase_deg``."""
    from .fileio import atomic_writer

    fmt = f"{{:.{digits}g}}"
    row, col = excitation.layout.indices()
    with atomic_writer(path, newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["element_index", "row", "col", "amplitude", "phase_rad", "phase_deg"])
        for k in range(excitation.layout.size):
            ph = float(excitation.phase[k])
            out.writerow(
                [
                    k + 1,
                    int(row[k]),
                    int(col[k]),
                    fmt.format(float(excitation.amplitude[k])),
                    fmt.format(ph),
                    fmt.format(math.degrees(ph)),
                ]
            )
