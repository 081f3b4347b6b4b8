"""Chat-template delimiters, payload extraction, transcript rendering."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from amrbench.extraction import (
    DELIMITER_TABLE,
    TemplateFamily,
    delimiters,
    extract_amr,
    render_chat,
    strip_think_block,
)

FAMILIES = list(TemplateFamily)
DELIMITED = [f for f in FAMILIES if f is not TemplateFamily.PLAIN]
PAYLOAD = "(w / want-01\n    :arg0 (b / boy))"

# Payload text that cannot collide with any family delimiter or think tag.
safe_text = st.text(
    alphabet=st.characters(blacklist_characters="<>|", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=60,
).map(str.strip).filter(bool)


def test_delimiter_table_exact_values():
    llama = ("<|start_header_id|>assistant<|end_header_id|>", "<|eot_id|>")
    assert DELIMITER_TABLE[TemplateFamily.LLAMA32] == llama
    assert DELIMITER_TABLE[TemplateFamily.DEEPSEEK_R1_LLAMA_DISTILLED] == llama
    assert DELIMITER_TABLE[TemplateFamily.PHI35] == ("<|assistant|>", "<|end|>")
    assert DELIMITER_TABLE[TemplateFamily.GEMMA2] == (
        "<start_of_turn>model",
        "<end_of_turn>",
    )
    assert DELIMITER_TABLE[TemplateFamily.PLAIN] == ("", "")


@pytest.mark.parametrize(
    "name,family",
    [
        ("llama32", TemplateFamily.LLAMA32),
        ("Llama_3.2", TemplateFamily.LLAMA32),
        ("llama", TemplateFamily.LLAMA32),
        ("deepseek-r1-llama-distilled", TemplateFamily.DEEPSEEK_R1_LLAMA_DISTILLED),
        ("deepseek", TemplateFamily.DEEPSEEK_R1_LLAMA_DISTILLED),
        ("phi35", TemplateFamily.PHI35),
        ("Phi-3.5", TemplateFamily.PHI35),
        ("gemma2", TemplateFamily.GEMMA2),
        ("gemma", TemplateFamily.GEMMA2),
        ("plain", TemplateFamily.PLAIN),
    ],
)
def test_family_from_string(name, family):
    assert TemplateFamily.from_string(name) is family


def test_family_from_string_rejects_unknown():
    with pytest.raises(ValueError):
        TemplateFamily.from_string("mystery-model")


def test_delimiter_overrides_keyed_by_family_value():
    pair = ("<<A>>", "<<Z>>")
    assert delimiters(TemplateFamily.LLAMA32, {"llama32": pair}) == pair
    assert delimiters(TemplateFamily.PHI35, {"llama32": pair}) == ("<|assistant|>", "<|end|>")


# --------------------------------------------------------------- extraction


@pytest.mark.parametrize("family", DELIMITED)
def test_extract_round_trips_rendered_transcripts(family):
    raw = render_chat(family, "system text", "Parse this.", PAYLOAD)
    assert extract_amr(raw, family) == PAYLOAD


def test_plain_generation_is_its_own_payload():
    # No markers to search for: a raw-completion model's output goes
    # through trimmed, whatever transcript it was prompted with.
    assert extract_amr(f"  {PAYLOAD}\n\n", TemplateFamily.PLAIN) == PAYLOAD


def test_extract_takes_last_assistant_block():
    start, end = DELIMITER_TABLE[TemplateFamily.PHI35]
    raw = f"{start}\nfirst{end}\nchatter\n{start}\nsecond{end}"
    assert extract_amr(raw, TemplateFamily.PHI35) == "second"


def test_extract_truncates_at_first_end_after_start():
    start, end = DELIMITER_TABLE[TemplateFamily.GEMMA2]
    raw = f"{start}\npayload{end}\ntrailing{end}"
    assert extract_amr(raw, TemplateFamily.GEMMA2) == "payload"


def test_extract_without_start_still_truncates():
    end = DELIMITER_TABLE[TemplateFamily.LLAMA32][1]
    raw = f"(r / rain-01){end}garbage"
    assert extract_amr(raw, TemplateFamily.LLAMA32) == "(r / rain-01)"


def test_extract_plain_passthrough():
    assert extract_amr("  (r / rain-01)\n", TemplateFamily.PLAIN) == "(r / rain-01)"


def test_extract_with_override_pair():
    overrides = {"plain": ("[AMR]", "[/AMR]")}
    raw = "noise [AMR] (r / rain-01) [/AMR] noise"
    assert extract_amr(raw, TemplateFamily.PLAIN, overrides) == "(r / rain-01)"


# ------------------------------------------------------------ think blocks


def test_strip_think_block():
    assert strip_think_block("<think>steps</think>(r / rain-01)") == "(r / rain-01)"


def test_strip_think_only_leading():
    text = "(r / rain-01) <think>later</think>"
    assert strip_think_block(text) == text


def test_unterminated_think_left_alone():
    text = "<think>never closed (r / rain-01)"
    assert strip_think_block(text) == text


def test_extract_strips_think_inside_assistant_turn():
    raw = render_chat(
        TemplateFamily.DEEPSEEK_R1_LLAMA_DISTILLED,
        "sys",
        "user",
        "<think>chain of steps</think>\n(r / rain-01)",
    )
    family = TemplateFamily.DEEPSEEK_R1_LLAMA_DISTILLED
    assert extract_amr(raw, family) == "(r / rain-01)"
    kept = extract_amr(raw, family, strip_think=False)
    assert kept.startswith("<think>")


def test_extract_custom_think_tags():
    raw = "[reason]ing[/reason](r / rain-01)"
    got = extract_amr(
        raw, TemplateFamily.PLAIN, think_tags=("[reason]", "[/reason]")
    )
    assert got == "(r / rain-01)"


# ---------------------------------------------------------------- rendering


def test_render_llama_shape():
    text = render_chat(TemplateFamily.LLAMA32, "S", "U", "A")
    assert text.startswith("<|begin_of_text|><|start_header_id|>system<|end_header_id|>\n\nS<|eot_id|>")
    assert "<|start_header_id|>user<|end_header_id|>\n\nU<|eot_id|>" in text
    assert text.endswith("<|start_header_id|>assistant<|end_header_id|>\n\nA<|eot_id|>")


def test_render_gemma_merges_system_into_user_turn():
    text = render_chat(TemplateFamily.GEMMA2, "S", "U", "A")
    assert "<start_of_turn>user\nS\n\nU<end_of_turn>" in text
    assert "system" not in text


def test_render_open_assistant_turn():
    for family in FAMILIES:
        prompt = render_chat(family, "S", "U", None)
        closed = render_chat(family, "S", "U", "A")
        assert closed.startswith(prompt)
    for family in DELIMITED:
        prompt = render_chat(family, "S", "U", None)
        closed = render_chat(family, "S", "U", "A")
        assert DELIMITER_TABLE[family][0] not in closed[len(prompt):]


def test_render_plain_concatenates():
    assert render_chat(TemplateFamily.PLAIN, "S", "U", "A") == "S\n\nU\n\nA"
    assert render_chat(TemplateFamily.PLAIN, "S", "U", None) == "S\n\nU\n\n"


# --------------------------------------------------------------- properties


@given(st.sampled_from(DELIMITED), safe_text, safe_text, safe_text)
def test_extraction_round_trip_property(family, system, user, payload):
    raw = render_chat(family, system, user, payload)
    assert extract_amr(raw, family) == payload


@given(st.sampled_from(FAMILIES), st.text(max_size=200))
def test_extraction_idempotent(family, raw):
    once = extract_amr(raw, family)
    assert extract_amr(once, family) == once


@given(st.sampled_from(FAMILIES), st.text(max_size=120), st.text(max_size=120))
def test_no_delimiter_survives_extraction(family, before, after):
    start, end = DELIMITER_TABLE[family]
    if family is TemplateFamily.PLAIN:
        return
    raw = f"{before}{start}{after}"
    got = extract_amr(raw, family)
    assert start not in got
    raw2 = f"{before}{start}\npayload{end}{after}"
    got2 = extract_amr(raw2, family)
    assert start not in got2 and end not in got2
