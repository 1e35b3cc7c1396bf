"""Run configuration: flat ``key = value`` files plus flag overrides."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

THREADS_ENV = "ZETAGAP_THREADS"


class UsageError(ValueError):
    pass


@dataclass
class VerifyBounds:
    """Desk-scale surrogate constants for the unquantified O(1) terms."""

    lemma1_residual_max: float = 2.5
    lemma1_tail_max: float = 0.5
    density_max: float = 1.0
    lipschitz_max: float = 0.2
    ratio_desk_max: float = 5.0
    s_abs_max: float = 2.5
    s_mean_max: float = 0.05


@dataclass
class ScanConfig:
    t_min: float = 14.0
    t_max: float = 100.0
    sigma_max: float = 4.0
    abs_tol: float = 1e-10
    threads: int = 1
    output_format: str = "csv"
    seed: int = 42
    out: str = "."
    verify_bounds: VerifyBounds = field(default_factory=VerifyBounds)

    def validate(self) -> "ScanConfig":
        if not (14 <= self.t_min < self.t_max <= 1e4):
            raise UsageError(f"need 14 <= t_min < t_max <= 1e4, got {self.t_min}, {self.t_max}")
        if not (1e-14 <= self.abs_tol <= 1e-3):
            raise UsageError(f"abs_tol {self.abs_tol} outside [1e-14, 1e-3]")
        if not (2 <= self.sigma_max <= 6):
            raise UsageError("sigma_max must lie in [2, 6]")
        if self.threads < 1:
            raise UsageError("threads must be >= 1")
        if self.output_format not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        return self


_FIELDS = {f.name: f.type for f in dataclasses.fields(ScanConfig) if f.name != "verify_bounds"}
_BOUNDS = {f.name for f in dataclasses.fields(VerifyBounds)}
_ALIASES = {"format": "output_format", "tol": "abs_tol"}


def parse_config_text(text: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        values[_ALIASES.get(key.replace("-", "_"), key.replace("-", "_"))] = value
    return values


def _coerce(cfg: ScanConfig, key: str, value) -> None:
    if key in _BOUNDS:
        setattr(cfg.verify_bounds, key, float(value))
        return
    if key not in _FIELDS:
        raise UsageError(f"unknown config key {key!r}")
    kind = type(getattr(ScanConfig(), key))
    try:
        setattr(cfg, key, kind(value))
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc


def resolve_config(config_path: Optional[str] = None, overrides: Optional[dict] = None,
                   environ=os.environ) -> ScanConfig:
    """Defaults < environment thread count < config file < command-line flags."""
    cfg = ScanConfig()
    if environ.get(THREADS_ENV):
        _coerce(cfg, "threads", environ[THREADS_ENV])
    if config_path is not None:
        try:
            text = Path(config_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read config {config_path}: {exc}") from exc
        for key, value in parse_config_text(text).items():
            _coerce(cfg, key, value)
    for key, value in (overrides or {}).items():
        if value is not None:
            _coerce(cfg, _ALIASES.get(key, key), value)
    return cfg.validate()


def dump_config(cfg: ScanConfig) -> str:
    """Resolved config as ``key = value`` lines; ``out`` is omitted so echoes compare equal."""
    lines = [f"{name} = {getattr(cfg, name)!r}" if isinstance(getattr(cfg, name), float)
             else f"{name} = {getattr(cfg, name)}" for name in _FIELDS if name != "out"]
    lines += [f"{name} = {getattr(cfg.verify_bounds, name)!r}" for name in sorted(_BOUNDS)]
    return "\n".join(lines) + "\n"
