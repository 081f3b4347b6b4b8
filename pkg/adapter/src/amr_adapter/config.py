"""Adapter run settings from a JSON config file plus the environment.

Config file shape::

    {
      "endpoint": {"kind": "http", "url": "http://host/v1/completions"},
      "params": {"temperature": 0.7, "top_p": 1.0,
                 "repetition_penalty": 1.0, "max_length": 2048},
      "concurrency": 4,
      "retries": 2,
      "backoff": 0.25
    }

Endpoint kinds: ``http`` (url, headers, timeout), ``local`` (model,
device), ``mock`` (completions, default, wrap).  Environment overrides:
``AMR_ADAPTER_URL`` replaces the http url and ``AMR_ADAPTER_API_KEY``
is sent as a bearer token, so credentials never live in the file and
never reach the manifest.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .endpoints import (
    AdapterError,
    Endpoint,
    HttpEndpoint,
    LocalEndpoint,
    MockEndpoint,
)
from .params import GenerationParams

_TOP_KEYS = {"endpoint", "params", "concurrency", "retries", "backoff"}


@dataclass(frozen=True)
class AdapterConfig:
    endpoint: Endpoint | None
    params: GenerationParams
    concurrency: int = 4
    retries: int = 2
    backoff: float = 0.25


def _reject_unknown(present: set[str], allowed: set[str], what: str) -> None:
    unknown = sorted(present - allowed)
    if unknown:
        raise AdapterError(f"unknown {what} keys: {', '.join(unknown)}")


def build_endpoint(
    block: Mapping[str, Any], env: Mapping[str, str] | None = None
) -> Endpoint:
    """Construct an endpoint from its config block."""
    env = os.environ if env is None else env
    if "kind" not in block:
        raise AdapterError("endpoint config needs a 'kind'")
    kind = block["kind"]
    keys = {k for k in block if k != "kind"}
    if kind == "mock":
        _reject_unknown(keys, {"completions", "default", "wrap"}, "mock endpoint")
        wrap = tuple(block.get("wrap", ("", "")))
        if len(wrap) != 2:
            raise AdapterError("mock wrap must be a [start, end] pair")
        return MockEndpoint(
            block.get("completions"), default=block.get("default"), wrap=wrap
        )
    if kind == "http":
        _reject_unknown(keys, {"url", "headers", "timeout"}, "http endpoint")
        url = env.get("AMR_ADAPTER_URL") or block.get("url")
        if not url:
            raise AdapterError(
                "http endpoint needs a url (config key or AMR_ADAPTER_URL)"
            )
        headers = dict(block.get("headers") or {})
        api_key = env.get("AMR_ADAPTER_API_KEY")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        return HttpEndpoint(url, headers=headers, timeout=float(block.get("timeout", 60.0)))
    if kind == "local":
        _reject_unknown(keys, {"model", "device"}, "local endpoint")
        if "model" not in block:
            raise AdapterError("local endpoint needs a model name")
        return LocalEndpoint(block["model"], device=block.get("device", "cpu"))
    raise AdapterError(f"unknown endpoint kind {kind!r}")


def load_adapter_config(
    path: str | Path, env: Mapping[str, str] | None = None
) -> AdapterConfig:
    """Read a config file; unknown keys are errors, not typo sinks."""
    env = os.environ if env is None else env
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise AdapterError(f"{path}: bad JSON: {exc}") from None
    if not isinstance(data, dict):
        raise AdapterError(f"{path}: config must be a JSON object")
    _reject_unknown(set(data), _TOP_KEYS, "config")
    try:
        params = GenerationParams(**data.get("params", {}))
    except TypeError:
        known = ", ".join(GenerationParams().as_dict())
        raise AdapterError(f"{path}: params accepts only: {known}") from None
    except ValueError as exc:
        raise AdapterError(f"{path}: {exc}") from None
    endpoint = None
    if "endpoint" in data:
        endpoint = build_endpoint(data["endpoint"], env)
    return AdapterConfig(
        endpoint=endpoint,
        params=params,
        concurrency=int(data.get("concurrency", 4)),
        retries=int(data.get("retries", 2)),
        backoff=float(data.get("backoff", 0.25)),
    )
