"""JSON scenario files for the batch CLI.

Every problem is reported as :class:`ConfigError` with the JSON path of the
offending field, e.g. ``$.scans[1].theta_deg``.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .farfield import AngleGrid, ElementModel
from .geometry import ArrayLayout, ElementParams, load_preset

_KEYS = {
    "element",
    "array",
    "frequencies_hz",
    "scans",
    "element_model",
    "output_dir",
    "grid",
    "corrugated",
    "thickness_mm",
    "stl_mode",
    "taper_samples",
    "rf",
}


@dataclass(frozen=True)
class Scan:
    theta_deg: float
    phi_deg: float

    @property
    def theta(self) -> float:
        return math.radians(self.theta_deg)

    @property
    def phi(self) -> float:
        return math.radians(self.phi_deg)


@dataclass(frozen=True)
class RfSettings:
    input_csv: Path
    threshold_rl_db: float = 15.0


@dataclass(frozen=True)
class Scenario:
    params: ElementParams
    layout: ArrayLayout
    frequencies: tuple[float, ...]
    scans: tuple[Scan, ...]
    model: ElementModel
    output_dir: Path
    theta_step_deg: float = 0.25
    phi_step_deg: float = 1.0
    corrugated: bool = True
    thickness_mm: float | None = None
    stl_mode: str = "binary"
    taper_samples: int = 256
    rf: RfSettings | None = None
    source: Path | None = field(default=None, compare=False)

    def grid(self) -> AngleGrid:
        return AngleGrid.regular(self.theta_step_deg, self.phi_step_deg)

    @property
    def thickness(self) -> float:
        return self.params.t if self.thickness_mm is None else self.thickness_mm


def _num(value, where: str, positive: bool = False, minimum: float | None = None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(where, f"expected a finite number, got {value!r}")
    if positive and value <= 0:
        raise ConfigError(where, f"must be positive, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(where, f"must be >= {minimum:g}, got {value!r}")
    return float(value)


def _list(data, key, where):
    value = data[key]
    if not isinstance(value, list) or not value:
        raise ConfigError(where, "expected a non-empty list")
    return value


def _element(raw, where: str) -> ElementParams:
    if isinstance(raw, str):
        try:
            return load_preset(raw)
        except ConfigError as exc:
            raise ConfigError(where, exc.message) from None
    if not isinstance(raw, Mapping):
        raise ConfigError(where, "expected a preset name or an object")
    if "preset" in raw:
        for key in raw:
            if key not in ("preset", "overrides"):
                raise ConfigError(f"{where}.{key}", "unknown field next to 'preset'")
        base = _element(raw["preset"], f"{where}.preset")
        overrides = raw.get("overrides", {})
        if not isinstance(overrides, Mapping):
            raise ConfigError(f"{where}.overrides", "expected an object")
        merged = {**base.to_dict(), **overrides}
        return ElementParams.from_dict(merged, f"{where}.overrides")
    return ElementParams.from_dict(raw, where)


def _model(raw, where: str) -> ElementModel:
    if isinstance(raw, str):
        raw = {"kind": raw}
    if not isinstance(raw, Mapping):
        raise ConfigError(where, "expected a model name or {kind, q}")
    kind = raw.get("kind", "cosine_q")
    if kind not in ("isotropic", "cosine_q"):
        raise ConfigError(f"{where}.kind", f"unknown element model {kind!r}")
    for key in raw:
        if key not in ("kind", "q"):
            raise ConfigError(f"{where}.{key}", "unknown element-model field")
    if kind == "isotropic":
        return ElementModel("isotropic", 0.0)
    q = _num(raw.get("q", 1.0), f"{where}.q", minimum=0.0)
    return ElementModel("cosine_q", q)


def parse_scenario(data: Any, base_dir: Path = Path(".")) -> Scenario:
    """Validate a decoded scenario object; relative paths resolve against ``base_dir``."""
    if not isinstance(data, Mapping):
        raise ConfigError("$", "scenario must be a JSON object")
    for key in data:
        if key not in _KEYS:
            raise ConfigError(f"$.{key}", "unknown scenario field")
    if "element" not in data:
        raise ConfigError("$.element", "missing element (preset name or parameter object)")
    params = _element(data["element"], "$.element")

    if "array" in data:
        layout = ArrayLayout.from_dict(data["array"], "$.array", default_pitch=params.d)
    else:
        layout = ArrayLayout.square(4, params.d)

    freqs: tuple[float, ...] = (params.f_design,)
    if "frequencies_hz" in data:
        raw = _list(data, "frequencies_hz", "$.frequencies_hz")
        freqs = tuple(_num(v, f"$.frequencies_hz[{i}]", positive=True) for i, v in enumerate(raw))

    scans: tuple[Scan, ...] = (Scan(0.0, 0.0),)
    if "scans" in data:
        out = []
        for i, item in enumerate(_list(data, "scans", "$.scans")):
            where = f"$.scans[{i}]"
            if not isinstance(item, Mapping):
                raise ConfigError(where, "expected {theta_deg, phi_deg}")
            for key in item:
                if key not in ("theta_deg", "phi_deg"):
                    raise ConfigError(f"{where}.{key}", "unknown scan field")
            if "theta_deg" not in item:
                raise ConfigError(f"{where}.theta_deg", "missing scan angle")
            theta = _num(item["theta_deg"], f"{where}.theta_deg")
            if not 0 <= theta <= 90:
                raise ConfigError(f"{where}.theta_deg", f"must lie in [0, 90] deg, got {theta:g}")
            out.append(Scan(theta, _num(item.get("phi_deg", 0.0), f"{where}.phi_deg")))
        scans = tuple(out)

    model = _model(data.get("element_model", {"kind": "cosine_q", "q": 1.0}), "$.element_model")

    theta_step, phi_step = 0.25, 1.0
    if "grid" in data:
        g = data["grid"]
        if not isinstance(g, Mapping):
            raise ConfigError("$.grid", "expected {theta_step_deg, phi_step_deg}")
        for key in g:
            if key not in ("theta_step_deg", "phi_step_deg"):
                raise ConfigError(f"$.grid.{key}", "unknown grid field")
        theta_step = _num(g.get("theta_step_deg", theta_step), "$.grid.theta_step_deg", positive=True)
        phi_step = _num(g.get("phi_step_deg", phi_step), "$.grid.phi_step_deg", positive=True)

    out_raw = data.get("output_dir", "out")
    if not isinstance(out_raw, str) or not out_raw:
        raise ConfigError("$.output_dir", "expected a non-empty path string")

    corrugated = data.get("corrugated", True)
    if not isinstance(corrugated, bool):
        raise ConfigError("$.corrugated", "expected true or false")
    thickness = None
    if "thickness_mm" in data:
        thickness = _num(data["thickness_mm"], "$.thickness_mm", positive=True)
    stl_mode = data.get("stl_mode", "binary")
    if stl_mode not in ("binary", "ascii"):
        raise ConfigError("$.stl_mode", f"expected 'binary' or 'ascii', got {stl_mode!r}")
    samples = data.get("taper_samples", 256)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 2:
        raise ConfigError("$.taper_samples", f"expected an integer >= 2, got {samples!r}")

    rf = None
    if "rf" in data:
        r = data["rf"]
        if not isinstance(r, Mapping):
            raise ConfigError("$.rf", "expected {input_csv, threshold_rl_db}")
        for key in r:
            if key not in ("input_csv", "threshold_rl_db"):
                raise ConfigError(f"$.rf.{key}", "unknown rf field")
        if not isinstance(r.get("input_csv"), str):
            raise ConfigError("$.rf.input_csv", "expected a path string")
        thr = _num(r.get("threshold_rl_db", 15.0), "$.rf.threshold_rl_db", minimum=0.0)
        rf = RfSettings(base_dir / r["input_csv"], thr)

    return Scenario(
        params=params,
        layout=layout,
        frequencies=freqs,
        scans=scans,
        model=model,
        output_dir=base_dir / out_raw,
        theta_step_deg=theta_step,
        phi_step_deg=phi_step,
        corrugated=corrugated,
        thickness_mm=thickness,
        stl_mode=stl_mode,
        taper_samples=samples,
        rf=rf,
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("$", f"cannot read scenario {path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    scenario = parse_scenario(data, path.parent)
    return Scenario(**{**scenario.__dict__, "source": path})
