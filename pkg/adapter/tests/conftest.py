import pytest

from amr_adapter import GenerationParams, PromptRecord

from adapter_helpers import write_jsonl


@pytest.fixture
def params():
    return GenerationParams()


@pytest.fixture
def record():
    return PromptRecord(id="p1", prompt="PROMPT 1:", system="sys", user="sentence 1")


@pytest.fixture
def prompt_rows():
    return [
        {
            "id": f"p{i}",
            "system": "sys",
            "user": f"sentence {i}",
            "prompt": f"PROMPT {i}:",
        }
        for i in range(1, 6)
    ]


@pytest.fixture
def prompts_file(tmp_path, prompt_rows):
    return write_jsonl(tmp_path / "prompts.jsonl", prompt_rows)
