"""Toolkit configuration: supply voltage, device overrides, solver limits.

Stored as a flat JSON object; any key may be omitted::

    {"vdd": 1.0, "r_hrs": 1e6, "r_lrs": 1e4, "v_set": 0.5, "v_reset": -0.35,
     "r_on": 100.0, "r_off": 1e8, "v_th_low": 0.8, "v_th_high": 1.5,
     "max_iter": 32, "kcl_tol": 1e-9, "format": "text"}
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .analog import SolverSettings
from .devices import MemristorModel
from .errors import ConfigError
from .gates import DeviceParams
from .trit import LevelMap

FORMATS = ("text", "csv")


@dataclass(frozen=True)
class ToolkitConfig:
    vdd: float = 1.0
    r_hrs: float = 1e6
    r_lrs: float = 1e4
    v_set: float = 0.5
    v_reset: float = -0.35
    r_on: float = 100.0
    r_off: float = 1e8
    v_th_low: float = 0.8
    v_th_high: float = 1.5
    max_iter: int = 32
    kcl_tol: float = 1e-9
    format: str = "text"

    def __post_init__(self):
        for f in fields(self):
            if f.name in ("format", "max_iter"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{f.name} must be a finite number, got {v!r}")
        for name in ("vdd", "r_hrs", "r_lrs", "r_on", "r_off", "kcl_tol", "v_th_low", "v_th_high"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.r_hrs <= self.r_lrs:
            raise ConfigError("r_hrs must exceed r_lrs")
        if self.r_off <= self.r_on:
            raise ConfigError("r_off must exceed r_on")
        if not self.v_set > 0 > self.v_reset:
            raise ConfigError("need v_set > 0 > v_reset")
        if isinstance(self.max_iter, bool) or not isinstance(self.max_iter, int) or self.max_iter < 1:
            raise ConfigError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")

    # -------------------------------------------------------------- views

    @property
    def levels(self) -> LevelMap:
        return LevelMap(self.vdd)

    @property
    def devices(self) -> DeviceParams:
        mem = MemristorModel(self.r_hrs, self.r_lrs, self.v_set, self.v_reset)
        return DeviceParams(mem, self.r_on, self.r_off, self.v_th_low, self.v_th_high)

    @property
    def solver(self) -> SolverSettings:
        return SolverSettings(self.max_iter, self.kcl_tol)

    # -------------------------------------------------------------- file form

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ToolkitConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ToolkitConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON (line {exc.lineno}): {exc.msg}") from None
        return cls.from_dict(data)


def load_config(path) -> ToolkitConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return ToolkitConfig.from_json(text)


def save_config(cfg: ToolkitConfig, path) -> None:
    Path(path).write_text(cfg.to_json())
