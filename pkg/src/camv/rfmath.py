"""Reflection coefficient, return loss and VSWR conversions.

Return loss is stored positive: 15 means |S11| = -15 dB.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from .errors import ArgumentError, DomainError, PatternFormatError

RL_CLAMP_DB = 300.0


@dataclass(frozen=True)
class ReflectionPoint:
    frequency: float
    gamma_mag: float

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise DomainError(f"frequency must be positive, got {self.frequency!r} Hz")
        if not (0 <= self.gamma_mag < 1):
            raise DomainError(f"|gamma| must lie in [0, 1), got {self.gamma_mag!r}")

    @classmethod
    def from_rl_db(cls, frequency: float, rl_db: float) -> ReflectionPoint:
        return cls(frequency, gamma_from_rl_db(rl_db))

    @property
    def rl_db(self) -> float:
        return rl_db_from_gamma(self.gamma_mag)

    @property
    def vswr(self) -> float:
        return vswr_from_gamma(self.gamma_mag)


def vswr_from_gamma(gamma_mag: float) -> float:
    if not (math.isfinite(gamma_mag) and 0 <= gamma_mag < 1):
        raise DomainError(f"|gamma| must lie in [0, 1), got {gamma_mag!r}")
    return (1 + gamma_mag) / (1 - gamma_mag)


def gamma_from_vswr(vswr: float) -> float:
    if not (math.isfinite(vswr) and vswr >= 1):
        raise DomainError(f"VSWR must be finite and >= 1, got {vswr!r}")
    return (vswr - 1) / (vswr + 1)


def gamma_from_rl_db(rl_db: float, with_flag: bool = False):
    """``10**(-rl_db/20)``; inputs of 300 dB or more clamp to 0.

    With ``with_flag`` the result is ``(gamma, clamped)``.
    """
    if math.isnan(rl_db) or rl_db < 0:
        raise DomainError(f"return loss must be >= 0 dB, got {rl_db!r}")
    clamped = rl_db >= RL_CLAMP_DB
    gamma = 0.0 if clamped else 10 ** (-rl_db / 20)
    return (gamma, clamped) if with_flag else gamma


def rl_db_from_gamma(gamma_mag: float) -> float:
    if not (math.isfinite(gamma_mag) and 0 <= gamma_mag <= 1):
        raise DomainError(f"|gamma| must lie in [0, 1], got {gamma_mag!r}")
    return math.inf if gamma_mag == 0 else -20 * math.log10(gamma_mag)


def vswr_threshold(rl_db: float) -> float:
    """VSWR equivalent to a return-loss threshold."""
    return vswr_from_gamma(gamma_from_rl_db(rl_db))


def _intervals(freqs: Sequence[float], values: Sequence[float], threshold: float, above: bool):
    """Maximal intervals where ``values`` is >= (``above``) or <= threshold, crossings interpolated."""
    if len(freqs) < 2:
        raise ArgumentError("band extraction needs at least 2 points")
    if any(b <= a for a, b in zip(freqs, freqs[1:])):
        raise ArgumentError("points must be sorted by strictly increasing frequency")
    ok = [(v >= threshold) if above else (v <= threshold) for v in values]
    bands: list[tuple[float, float]] = []
    start = freqs[0] if ok[0] else None
    for i in range(1, len(freqs)):
        if ok[i] == ok[i - 1]:
            continue
        f0, f1, v0, v1 = freqs[i - 1], freqs[i], values[i - 1], values[i]
        fc = f0 + (threshold - v0) * (f1 - f0) / (v1 - v0)
        if ok[i]:
            start = fc
        else:
            bands.append((start, fc))
            start = None
    if start is not None:
        bands.append((start, freqs[-1]))
    return bands


def band_below_threshold(points: Sequence[ReflectionPoint], threshold_rl_db: float) -> list[tuple[float, float]]:
    """Frequency intervals where return loss is at least ``threshold_rl_db``.

    Crossings are linearly interpolated in the dB domain. A point with
    ``|gamma| = 0`` counts as infinitely good and is treated as 300 dB.
    """
    if threshold_rl_db < 0:
        raise DomainError(f"threshold must be >= 0 dB, got {threshold_rl_db!r}")
    freqs = [p.frequency for p in points]
    rl = [min(p.rl_db, RL_CLAMP_DB) for p in points]
    return _intervals(freqs, rl, threshold_rl_db, above=True)


def band_below_vswr(points: Sequence[ReflectionPoint], vswr_max: float) -> list[tuple[float, float]]:
    """Intervals where VSWR <= ``vswr_max``.

    Both sides are mapped back to return loss so crossings interpolate in dB,
    matching :func:`band_below_threshold`.
    """
    threshold = rl_db_from_gamma(gamma_from_vswr(vswr_max))
    freqs = [p.frequency for p in points]
    rl = [min(rl_db_from_gamma(gamma_from_vswr(p.vswr)), RL_CLAMP_DB) for p in points]
    return _intervals(freqs, rl, min(threshold, RL_CLAMP_DB), above=True)


def read_rl_csv(path) -> list[ReflectionPoint]:
    """Two-column ``freq_hz,rl_db`` CSV; a non-numeric first row is taken as a header."""
    path = Path(path)
    points = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise PatternFormatError(f"expected 2 columns (freq_hz, rl_db), got {len(row)}", row=lineno)
            try:
                f, rl = float(row[0]), float(row[1])
            except ValueError:
                if lineno == 1:
                    continue
                raise PatternFormatError(f"non-numeric entry in {row!r}", row=lineno) from None
            try:
                points.append(ReflectionPoint.from_rl_db(f, rl))
            except DomainError as exc:
                raise PatternFormatError(str(exc), row=lineno) from None
    return points
