"""Flat key=value run configuration with CLI override precedence.

Defaults mirror the control and training constants used across the stack.
Unknown keys are rejected so typos fail loudly. Values given on the command
line override values from a config file, which override the defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class RunConfig:
    fs: float = 100.0
    window_ms: float = 2000.0
    hop_ms: float = 250.0
    thresh_deg: float = 15.0
    dead_zone_deg: float = 5.0
    alpha: float = 0.2
    gamma_index: float = 1.10
    gamma_middle: float = 0.90
    flex_threshold: int = 600
    hysteresis: int = 50
    debounce_ms: float = 300.0
    v_max: float = 0.50
    v_lo: float = 0.10
    v_hi: float = 1.00
    w_max: float = 0.50
    w_lo: float = 0.10
    w_hi: float = 1.00
    epochs: int = 30
    base_lr: float = 5e-4
    batch_size: int = 32
    val_fraction: float = 0.20
    seed: int = 0
    per_class_ms: float = 300_000.0
    noise_sigma: float = 0.15
    amplitude: float = 1.5
    freq: float = 2.0
    tick_ms: float = 10.0
    safe_stop_ms: float = 500.0
    conf_threshold: float = 0.6

    def merged_with_file(self, path: str | Path) -> "RunConfig":
        return replace(self, **parse_config_file(path))

    def to_file_text(self) -> str:
        return "\n".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self)) + "\n"


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_config_file(path: str | Path) -> dict:
    """Read `key=value` lines; '#' comments and blank lines are ignored."""
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        try:
            caster = int if _FIELD_TYPES[key] in ("int", int) else float
            values[key] = caster(value)
        except ValueError:
            raise ConfigError(f"config line {lineno}: bad value for {key}: {value!r}") from None
    return values
