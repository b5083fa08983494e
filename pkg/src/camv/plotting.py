"""Static figures: element outlines (SVG, mm axes) and dB-vs-angle pattern cuts."""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Polygon

from .errors import ArgumentError
from .fileio import atomic_writer
from .geometry import ProfilePolyline

# fixed ids and no timestamps so repeated runs give identical files
_RC = {"svg.hashsalt": "camv", "svg.fonttype": "none", "path.simplify": False}
_META = {"svg": {"Date": None}, "png": {"Software": None}, "pdf": {"CreationDate": None, "ModDate": None}}


def _save(fig, path) -> Path:
    path = Path(path)
    fmt = path.suffix.lstrip(".").lower() or "png"
    try:
        with atomic_writer(path, "wb") as fh:
            fig.savefig(fh, format=fmt, metadata=_META.get(fmt))
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)
    return path


def profile_figure(profile: ProfilePolyline, title: str | None = None):
    if not profile.closed or len(profile) < 3:
        raise ArgumentError("profile plot needs a closed outline")
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4, 7))
        body = Polygon(profile.points, closed=True, facecolor="#c8a85a", edgecolor="black", linewidth=0.6)
        body.set_gid("element-outline")
        ax.add_patch(body)
        for slot in profile.slots:
            patch = Polygon(slot.corners, closed=True, facecolor="none", edgecolor="tab:red", linewidth=0.6)
            patch.set_gid(f"corrugation-slot-{slot.index}")
            ax.add_patch(patch)
        x0, y0, x1, y1 = profile.bbox
        pad = 0.05 * max(x1 - x0, y1 - y0)
        ax.set_xlim(x0 - pad, x1 + pad)
        ax.set_ylim(y0 - pad, y1 + pad)
        ax.set_aspect("equal")
        ax.set_xlabel("x (mm)")
        ax.set_ylabel("y (mm)")
        if title:
            ax.set_title(title)
        ax.grid(True, linewidth=0.3)
        fig.tight_layout()
    return fig


def write_profile_svg(profile: ProfilePolyline, path, title: str | None = None) -> Path:
    with matplotlib.rc_context(_RC):
        return _save(profile_figure(profile, title), path)


def _traces(source):
    """(label, angles_deg, dB) triples from a pattern or a sequence of sweep rows."""
    from .farfield import FarFieldPattern, principal_cut

    if isinstance(source, FarFieldPattern):
        if source.power.size == 0 or not np.any(source.power > 0):
            raise ArgumentError("pattern is empty")
        out = []
        for cut in (0.0, 90.0):
            angles, p = principal_cut(source, math.radians(cut))
            out.append((f"phi = {cut:g} deg", angles, 10 * np.log10(np.maximum(p, 1e-30))))
        return out, source.kind
    rows = list(source) if source is not None else []
    if not rows:
        raise ArgumentError("nothing to plot: empty sweep table")
    out = [
        (f"{r.frequency / 1e9:g} GHz, scan {math.degrees(r.theta0):g}°", r.cut_angles_deg, r.cut_db) for r in rows
    ]
    return out, "gain_estimate"


def pattern_figure(source, title: str | None = None):
    """Rectangular dB-vs-angle cuts; one trace per cut or per sweep row."""
    traces, kind = _traces(source)
    ylabel = {
        "gain_estimate": "Estimated gain (dBi, relative model)",
        "array_factor": "|AF|^2 (dB)",
        "imported_embedded": "Imported pattern (dB)",
    }[kind]
    with matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for label, angles, db in traces:
            ax.plot(angles, db, label=label, linewidth=1.0)
        top = max(float(np.max(db)) for _, _, db in traces)
        ax.set_ylim(top - 40, top + 3)
        ax.set_xlabel("theta (deg)")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.grid(True, linewidth=0.3)
        ax.legend(fontsize=7, loc="lower center")
        fig.tight_layout()
    return fig


def write_pattern_plot(source, path, title: str | None = None) -> Path:
    with matplotlib.rc_context(_RC):
        return _save(pattern_figure(source, title), path)


def trace_labels(fig) -> Sequence[str]:
    return [line.get_label() for line in fig.axes[0].get_lines()]
