"""Experiment configuration: one flat model shared by the CLI, the config
file format, and the service request bodies.

The on-disk format is plain ``key = value`` text.  A run's resolved
configuration is written next to its outputs, and feeding that file back
reproduces the run bit for bit: floats are rendered with shortest
round-trip formatting, so nothing is lost in either direction.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from .errors import ConfigurationError

__all__ = [
    "ExperimentConfig",
    "dumps_config",
    "load_config",
    "loads_config",
    "resolve_config",
]

COMMANDS = ("run", "compare", "refine", "order", "stability", "fig1", "fig2")

FIG2_SCALES = {"desk": (1e-4, 1e-5), "paper": (1e-6, 1e-7)}


class ExperimentConfig(BaseModel):
    """All knobs of every experiment; unused fields stay None.

    ``resolve_config`` fills command-specific defaults and checks that
    the required fields for that command are present.
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    command: Optional[str] = None
    model: Optional[str] = None
    u0: Optional[list[float]] = None
    method: Optional[str] = None
    method2: Optional[str] = None
    dt: Optional[float] = None
    dt2: Optional[float] = None
    dt_ladder: Optional[list[float]] = None
    t_end: Optional[float] = None
    out_interval: Optional[float] = None
    norm: Optional[str] = None
    epsilon: Optional[float] = None
    threshold: Optional[float] = None
    ratio: Optional[int] = None
    max_levels: Optional[int] = None
    t_probe: Optional[float] = None
    scale: Optional[str] = None
    growth_floor: Optional[float] = None
    growth_ceiling: Optional[float] = None
    out_dir: Optional[str] = None

    @field_validator("u0", "dt_ladder", mode="before")
    @classmethod
    def _split_csv(cls, value):
        if isinstance(value, str):
            return [float(part) for part in value.split(",") if part.strip()]
        return value


_GENERIC_DEFAULTS = {
    "norm": "inf",
    "epsilon": 1e-6,
    "threshold": 1e-2,
    "growth_floor": 1e-12,
    "growth_ceiling": 1e-2,
}

# which fields each command must end up with, and its specific defaults
_COMMAND_RULES: dict[str, dict] = {
    "run": {
        "required": ("model", "method", "dt", "t_end"),
        "defaults": {},
    },
    "compare": {
        "required": ("model", "dt", "t_end"),
        "defaults": {"method": "taylor:5", "method2": "rk4"},
    },
    "refine": {
        "required": ("model", "method", "dt", "t_end"),
        "defaults": {"ratio": 2, "max_levels": 20},
    },
    "order": {
        "required": ("model", "method"),
        "defaults": {
            "dt_ladder": [1e-2, 5e-3, 2.5e-3, 1.25e-3],
            "t_probe": 0.1,
        },
    },
    "stability": {
        "required": ("model", "method", "dt", "t_end"),
        "defaults": {},
    },
    "fig1": {
        "required": (),
        "defaults": {
            "model": "linear-decay",
            "method": "euler",
            "dt": 0.05,
            "dt2": 0.06,
            "t_end": 0.6,
        },
    },
    "fig2": {
        "required": (),
        "defaults": {
            "model": "lorenz1990",
            "method": "taylor:5",
            "scale": "desk",
            "t_end": 50.0,
            "out_interval": 0.01,
            "norm": "component:0",
        },
    },
}


def resolve_config(cfg: ExperimentConfig, command: str) -> ExperimentConfig:
    """Fill command defaults and validate required fields.

    Returns a new, fully-resolved config with ``command`` set; raises
    ConfigurationError when a required field is missing or inconsistent.
    """
    if command not in _COMMAND_RULES:
        raise ConfigurationError(f"unknown command {command!r}")
    rules = _COMMAND_RULES[command]
    data = cfg.model_dump()
    data["command"] = command
    for key, value in rules["defaults"].items():
        if data.get(key) is None:
            data[key] = value
    for key, value in _GENERIC_DEFAULTS.items():
        if data.get(key) is None:
            data[key] = value
    if command == "fig2":
        scale = data["scale"]
        if scale not in FIG2_SCALES:
            raise ConfigurationError(
                f"unknown fig2 scale {scale!r}; expected one of {sorted(FIG2_SCALES)}"
            )
        if data.get("dt") is None and data.get("dt2") is None:
            data["dt"], data["dt2"] = FIG2_SCALES[scale]
        elif data.get("dt") is None or data.get("dt2") is None:
            raise ConfigurationError("fig2 needs both dt and dt2 when overriding the scale pair")
    missing = [key for key in rules["required"] if data.get(key) is None]
    if missing:
        raise ConfigurationError(
            f"command {command!r} is missing required settings: {', '.join(missing)}"
        )
    if data.get("out_interval") is None and data.get("dt") is not None:
        data["out_interval"] = data["dt"]
    return ExperimentConfig.model_validate(data)


def _render_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ",".join(repr(float(x)) for x in value)
    return str(value)


def dumps_config(cfg: ExperimentConfig) -> str:
    lines = ["# odeverify configuration"]
    for name in type(cfg).model_fields:
        value = getattr(cfg, name)
        if value is None:
            continue
        lines.append(f"{name} = {_render_value(value)}")
    return "\n".join(lines) + "\n"


def loads_config(text: str) -> ExperimentConfig:
    data: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        data[key.strip()] = value.strip()
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"bad config: {exc}") from None


def load_config(path) -> ExperimentConfig:
    return loads_config(Path(path).read_text())


def save_config(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(dumps_config(cfg))
