"""Generation endpoints.

One interface, three implementations: an HTTP completion service, a
local transformers model, and a deterministic mock so the test suite
never needs a model or the network.  ``LocalEndpoint`` pulls in its
heavyweight dependencies on first use only; importing this module never
loads torch or transformers.

Endpoints return the raw continuation with template tokens left in
place.  The scoring side strips delimiters itself, so stripping them
here would lose information it needs.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Mapping

import requests

from .params import GenerationParams


class AdapterError(Exception):
    """Configuration or data-integrity problem; not retried."""


class EndpointError(AdapterError):
    """A single generation request failed; the runner may retry it."""


@dataclass(frozen=True)
class PromptRecord:
    """One prompt to complete.  ``prompt`` is the fully rendered text;
    ``system`` and ``user`` ride along for endpoints that want the parts."""

    id: str
    prompt: str
    system: str = ""
    user: str = ""


class Endpoint(ABC):
    @abstractmethod
    def generate(self, record: PromptRecord, params: GenerationParams) -> str:
        """Return the raw continuation for ``record.prompt``.

        Raises EndpointError on a per-request failure.
        """

    @abstractmethod
    def describe(self) -> dict[str, object]:
        """Manifest entry for this endpoint.  Must not leak credentials."""


class MockEndpoint(Endpoint):
    """Canned completions, optionally wrapped in template delimiters.

    ``flaky`` maps ids to the number of times they fail before
    succeeding; ids in ``fail_ids`` never succeed.  Every call is
    logged so tests can assert exactly what was requested.  Thread-safe.
    """

    def __init__(
        self,
        completions: Mapping[str, str] | None = None,
        *,
        default: str | None = None,
        wrap: tuple[str, str] = ("", ""),
        fail_ids: tuple[str, ...] = (),
        flaky: Mapping[str, int] | None = None,
    ) -> None:
        self.completions = dict(completions or {})
        self.default = default
        self.wrap = (wrap[0], wrap[1])
        self.fail_ids = frozenset(fail_ids)
        self.calls: list[str] = []
        self._remaining = dict(flaky or {})
        self._lock = threading.Lock()

    def generate(self, record: PromptRecord, params: GenerationParams) -> str:
        with self._lock:
            self.calls.append(record.id)
            if record.id in self.fail_ids:
                raise EndpointError(f"mock failure for {record.id}")
            left = self._remaining.get(record.id, 0)
            if left > 0:
                self._remaining[record.id] = left - 1
                raise EndpointError(f"mock transient failure for {record.id}")
        text = self.completions.get(record.id, self.default)
        if text is None:
            raise EndpointError(f"no canned completion for {record.id}")
        start, end = self.wrap
        return f"{start}{text}{end}"

    def describe(self) -> dict[str, object]:
        return {"kind": "mock", "completions": len(self.completions)}


class HttpEndpoint(Endpoint):
    """POSTs one JSON request per prompt to a completion service.

    Request body: ``prompt`` plus the sampling fields, with max_length
    sent as ``max_tokens``.  Accepts either ``{"text": ...}`` or an
    OpenAI-style ``{"choices": [{"text": ...}]}`` response.
    """

    def __init__(
        self,
        url: str,
        headers: Mapping[str, str] | None = None,
        timeout: float = 60.0,
    ) -> None:
        self.url = url
        self.headers = dict(headers or {})
        self.timeout = timeout
        self._session = requests.Session()

    def generate(self, record: PromptRecord, params: GenerationParams) -> str:
        body = {
            "prompt": record.prompt,
            "temperature": params.temperature,
            "top_p": params.top_p,
            "repetition_penalty": params.repetition_penalty,
            "max_tokens": params.max_length,
        }
        try:
            resp = self._session.post(
                self.url, json=body, headers=self.headers, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise EndpointError(f"request to {self.url} failed: {exc}") from exc
        if resp.status_code != 200:
            raise EndpointError(
                f"HTTP {resp.status_code} from {self.url}: {resp.text[:200]}"
            )
        try:
            data = resp.json()
        except ValueError:
            raise EndpointError(f"non-JSON response from {self.url}") from None
        if isinstance(data, dict):
            if isinstance(data.get("text"), str):
                return data["text"]
            choices = data.get("choices")
            if (
                isinstance(choices, list)
                and choices
                and isinstance(choices[0], dict)
                and isinstance(choices[0].get("text"), str)
            ):
                return choices[0]["text"]
        raise EndpointError("response carries neither 'text' nor 'choices[0].text'")

    def describe(self) -> dict[str, object]:
        # headers stay out of the manifest, they can carry auth tokens
        return {"kind": "http", "url": self.url}


class LocalEndpoint(Endpoint):
    """Runs a causal LM in-process via transformers.

    Decoding keeps special tokens so downstream extraction sees the
    template markers.  The model loads lazily on the first call.
    """

    def __init__(self, model_name: str, device: str = "cpu") -> None:
        self.model_name = model_name
        self.device = device
        self._tokenizer = None
        self._model = None

    def _load(self) -> None:
        try:
            import torch  # noqa: F401  (generate below runs under no_grad)
            from transformers import AutoModelForCausalLM, AutoTokenizer
        except ImportError as exc:
            raise AdapterError(
                "local endpoint needs transformers and torch; "
                "install with: pip install 'amr-adapter[local]'"
            ) from exc
        self._tokenizer = AutoTokenizer.from_pretrained(self.model_name)
        model = AutoModelForCausalLM.from_pretrained(self.model_name)
        self._model = model.to(self.device)
        self._model.eval()

    def _run_model(self, prompt: str, params: GenerationParams) -> str:
        import torch

        inputs = self._tokenizer(prompt, return_tensors="pt").to(self.device)
        with torch.no_grad():
            output = self._model.generate(
                **inputs,
                do_sample=True,
                temperature=params.temperature,
                top_p=params.top_p,
                repetition_penalty=params.repetition_penalty,
                max_length=params.max_length,
            )
        full = self._tokenizer.decode(output[0], skip_special_tokens=False)
        prefix = self._tokenizer.decode(
            inputs["input_ids"][0], skip_special_tokens=False
        )
        return full[len(prefix):]

    def generate(self, record: PromptRecord, params: GenerationParams) -> str:
        if self._model is None:
            self._load()
        return self._run_model(record.prompt, params)

    def describe(self) -> dict[str, object]:
        return {"kind": "local", "model": self.model_name, "device": self.device}
