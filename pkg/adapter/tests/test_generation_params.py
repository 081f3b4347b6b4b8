import dataclasses

import pytest

from amr_adapter import GenerationParams


def test_defaults():
    p = GenerationParams()
    assert (p.temperature, p.top_p, p.repetition_penalty, p.max_length) == (
        0.7,
        1.0,
        1.0,
        2048,
    )


def test_as_dict_is_json_ready():
    assert GenerationParams().as_dict() == {
        "temperature": 0.7,
        "top_p": 1.0,
        "repetition_penalty": 1.0,
        "max_length": 2048,
    }


@pytest.mark.parametrize(
    "kwargs",
    [
        {"temperature": 0.0},
        {"temperature": -1.0},
        {"top_p": 0.0},
        {"top_p": 1.5},
        {"repetition_penalty": 0.0},
        {"max_length": 0},
    ],
)
def test_rejects_out_of_range(kwargs):
    with pytest.raises(ValueError):
        GenerationParams(**kwargs)


def test_boundary_top_p_allowed():
    assert GenerationParams(top_p=1.0).top_p == 1.0
    assert GenerationParams(top_p=0.01).top_p == 0.01


def test_frozen():
    with pytest.raises(dataclasses.FrozenInstanceError):
        GenerationParams().temperature = 0.1
