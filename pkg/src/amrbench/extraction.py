"""Pulling AMR text out of raw chat-model generations.

Each model family marks the assistant turn with its own delimiters.  The
extraction rule: take the substring after the LAST assistant-start marker,
truncate at the first turn-end marker after it, trim whitespace.  When the
start marker is absent the raw text is used, still truncated at a turn-end
marker if one occurs, so no family delimiter ever survives extraction.

The same delimiter knowledge renders chat records for fine-tuning and for
inference prompts; for every delimited family a transcript rendered here
round-trips through ``extract_amr`` back to its assistant payload.  The
Plain family has no markers: its raw generation is the payload, and
extraction just trims it.
"""

from __future__ import annotations

import enum
from typing import Mapping


class TemplateFamily(enum.Enum):
    LLAMA32 = "llama32"
    DEEPSEEK_R1_LLAMA_DISTILLED = "deepseek-r1-llama-distilled"
    PHI35 = "phi35"
    GEMMA2 = "gemma2"
    PLAIN = "plain"

    @classmethod
    def from_string(cls, name: str) -> "TemplateFamily":
        key = name.strip().lower().replace("_", "-")
        for family in cls:
            if key == family.value or key == family.value.replace("-", ""):
                return family
        aliases = {
            "llama": cls.LLAMA32,
            "llama-3.2": cls.LLAMA32,
            "deepseek": cls.DEEPSEEK_R1_LLAMA_DISTILLED,
            "deepseek-r1": cls.DEEPSEEK_R1_LLAMA_DISTILLED,
            "phi": cls.PHI35,
            "phi-3.5": cls.PHI35,
            "gemma": cls.GEMMA2,
        }
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown template family {name!r}")


_LLAMA_PAIR = ("<|start_header_id|>assistant<|end_header_id|>", "<|eot_id|>")

# (assistant-start, turn-end) per family; Plain passes text through.
DELIMITER_TABLE: dict[TemplateFamily, tuple[str, str]] = {
    TemplateFamily.LLAMA32: _LLAMA_PAIR,
    TemplateFamily.DEEPSEEK_R1_LLAMA_DISTILLED: _LLAMA_PAIR,
    TemplateFamily.PHI35: ("<|assistant|>", "<|end|>"),
    TemplateFamily.GEMMA2: ("<start_of_turn>model", "<end_of_turn>"),
    TemplateFamily.PLAIN: ("", ""),
}

DEFAULT_THINK_TAGS = ("<think>", "</think>")


def delimiters(
    family: TemplateFamily,
    overrides: Mapping[str, tuple[str, str]] | None = None,
) -> tuple[str, str]:
    """The (assistant-start, turn-end) pair, with config overrides applied.

    Override keys are family value strings, e.g. ``"llama32"``.
    """
    if overrides:
        pair = overrides.get(family.value)
        if pair is not None:
            return (pair[0], pair[1])
    return DELIMITER_TABLE[family]


def strip_think_block(text: str, tags: tuple[str, str] = DEFAULT_THINK_TAGS) -> str:
    """Drop one leading reasoning block.  An unterminated block is left
    alone rather than discarding the whole generation."""
    opened = text.lstrip()
    if opened.startswith(tags[0]):
        end = opened.find(tags[1])
        if end != -1:
            return opened[end + len(tags[1]) :]
    return text

def extract_amr(
    raw: str,
    family: TemplateFamily,
    overrides: Mapping[str, tuple[str, str]] | None = None,
    strip_think: bool = True,
    think_tags: tuple[str, str] = DEFAULT_THINK_TAGS,
) -> str:
    """Extract the assistant payload from a raw generation.

    Idempotent: re-extracting the result changes nothing.  With no start
    marker present the trimmed raw text is returned (minus anything after
    a turn-end marker).
    """
    start, end = delimiters(family, overrides)
    text = raw
    if start:
        at = text.rfind(start)
        if at != -1:
            text = text[at + len(start) :]
    if end:
        at = text.find(end)
        if at != -1:
            text = text[:at]
    if strip_think:
        text = strip_think_block(text, think_tags)
    return text.strip()


def render_chat(
    family: TemplateFamily,
    system: str,
    user: str,
    assistant: str | None = None,
    overrides: Mapping[str, tuple[str, str]] | None = None,
) -> str:
    """One chat transcript in the family's template, messages in
    system, user, assistant order.

    ``assistant=None`` leaves the assistant turn open: the inference
    prompt form.  Gemma has no system role, so the system text leads the
    first user turn.
    """
    start, end = delimiters(family, overrides)
    if family in (TemplateFamily.LLAMA32, TemplateFamily.DEEPSEEK_R1_LLAMA_DISTILLED):
        text = (
            "<|begin_of_text|><|start_header_id|>system<|end_header_id|>\n\n"
            f"{system}{end}<|start_header_id|>user<|end_header_id|>\n\n"
            f"{user}{end}{start}\n\n"
        )
        if assistant is not None:
            text += f"{assistant}{end}"
        return text
    if family is TemplateFamily.PHI35:
        text = f"<|system|>\n{system}{end}\n<|user|>\n{user}{end}\n{start}\n"
        if assistant is not None:
            text += f"{assistant}{end}"
        return text
    if family is TemplateFamily.GEMMA2:
        text = f"<bos><start_of_turn>user\n{system}\n\n{user}{end}\n{start}\n"
        if assistant is not None:
            text += f"{assistant}{end}"
        return text
    text = f"{system}\n\n{user}\n\n"
    if assistant is not None:
        text += assistant
    return text
