"""Batch-inference adapter for the AMR evaluation harness.

Turns prepared prompt records (``amrbench prepare --inference``) into
raw-generation records that ``amrbench eval`` can score.  The two
packages share only file formats and CLIs: nothing here imports
amrbench, and nothing in amrbench imports this.
"""

from .config import AdapterConfig, build_endpoint, load_adapter_config
from .endpoints import (
    AdapterError,
    Endpoint,
    EndpointError,
    HttpEndpoint,
    LocalEndpoint,
    MockEndpoint,
    PromptRecord,
)
from .params import GenerationParams
from .runner import RunResult, read_prompts, run_batch

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "Endpoint",
    "EndpointError",
    "GenerationParams",
    "HttpEndpoint",
    "LocalEndpoint",
    "MockEndpoint",
    "PromptRecord",
    "RunResult",
    "build_endpoint",
    "load_adapter_config",
    "read_prompts",
    "run_batch",
]
