"""Run configuration: one versioned file, flags override, env seed fallback."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

SEED_ENV_VAR = "AMR_BENCH_SEED"
CONFIG_VERSION = 1

DEFAULT_SYSTEM_PROMPT = (
    "You are an AMR parser. Convert each English sentence into an "
    "Abstract Meaning Representation graph written in Penman notation."
)


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by scoring, extraction, sampling, and evaluation.

    ``workers = 0`` means one worker per logical core.  ``invalid_mode``
    decides whether structurally invalid predictions are excluded from
    semantic means ("exclude", the default) or scored as zero ("zero").
    ``ci_mode`` picks the population the confidence interval is computed
    over: per-depth means or individual sentences.
    """

    version: int = CONFIG_VERSION
    seed: int = 0
    restarts: int = 4
    exact_threshold: int = 8
    family: str = "plain"
    delimiter_overrides: dict[str, tuple[str, str]] = field(default_factory=dict)
    strip_think: bool = True
    invalid_mode: str = "exclude"
    ci_mode: str = "per-depth"
    ci_level: float = 0.95
    per_depth: int = 30
    depth_range: tuple[int, int] = (1, 10)
    workers: int = 0
    label: str = "run"
    system_prompt: str = DEFAULT_SYSTEM_PROMPT

    def __post_init__(self) -> None:
        if self.version != CONFIG_VERSION:
            raise ValueError(f"unsupported config version {self.version}")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")
        if not 0 <= self.exact_threshold <= 8:
            raise ValueError("exact_threshold must be between 0 and 8")
        if self.invalid_mode not in ("exclude", "zero"):
            raise ValueError(f"unknown invalid_mode {self.invalid_mode!r}")
        if self.ci_mode not in ("per-depth", "per-sentence"):
            raise ValueError(f"unknown ci_mode {self.ci_mode!r}")
        if self.per_depth < 1:
            raise ValueError("per_depth must be >= 1")
        lo, hi = self.depth_range
        if lo < 0 or hi < lo:
            raise ValueError(f"bad depth_range {self.depth_range}")
        if self.workers < 0:
            raise ValueError("workers must be >= 0")

    def effective_workers(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)


_FIELD_NAMES = {f.name for f in dataclasses.fields(RunConfig)}


def _coerce(name: str, value: Any) -> Any:
    if name == "depth_range" and isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    if name == "delimiter_overrides" and isinstance(value, Mapping):
        return {k: (str(v[0]), str(v[1])) for k, v in value.items()}
    return value


def load_config(
    path: str | Path | None = None,
    overrides: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> RunConfig:
    """Build a RunConfig with precedence flag > file > environment > default.

    ``overrides`` holds flag values (None entries are ignored).  The
    environment only supplies the seed, via AMR_BENCH_SEED.  Unknown keys
    in the file or overrides are an error.
    """
    env = os.environ if env is None else env
    values: dict[str, Any] = {}
    if SEED_ENV_VAR in env:
        try:
            values["seed"] = int(env[SEED_ENV_VAR])
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer") from None
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = set(data) - _FIELD_NAMES
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update(data)
    for name, value in (overrides or {}).items():
        if name not in _FIELD_NAMES:
            raise ValueError(f"unknown config override {name!r}")
        if value is not None:
            values[name] = value
    values = {name: _coerce(name, value) for name, value in values.items()}
    return RunConfig(**values)


def config_dict(config: RunConfig) -> dict[str, Any]:
    """JSON-ready view of a config, stable field order."""
    out = dataclasses.asdict(config)
    out["depth_range"] = list(config.depth_range)
    out["delimiter_overrides"] = {
        k: list(v) for k, v in config.delimiter_overrides.items()
    }
    return out
