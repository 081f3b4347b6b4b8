"""Decoding parameters shared by every endpoint."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class GenerationParams:
    """Sampling settings sent with every generation request.

    The defaults are what the evaluation runs assume; override them per
    run through the adapter config file or CLI flags.
    """

    temperature: float = 0.7
    top_p: float = 1.0
    repetition_penalty: float = 1.0
    max_length: int = 2048

    def __post_init__(self) -> None:
        if not self.temperature > 0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        if not 0 < self.top_p <= 1:
            raise ValueError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.repetition_penalty <= 0:
            raise ValueError(
                f"repetition_penalty must be > 0, got {self.repetition_penalty}"
            )
        if self.max_length < 1:
            raise ValueError(f"max_length must be >= 1, got {self.max_length}")

    def as_dict(self) -> dict[str, float | int]:
        """JSON-ready form, recorded verbatim in the run manifest."""
        return asdict(self)
