from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from amrbench import corpus, penman

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_CORPUS = DATA_DIR / "fixture_corpus.txt"


@pytest.fixture(scope="session")
def fixture_corpus_path() -> Path:
    return FIXTURE_CORPUS


@pytest.fixture(scope="session")
def fixture_entries():
    return corpus.load_corpus(FIXTURE_CORPUS)


@pytest.fixture(scope="session")
def fixture_graphs(fixture_entries):
    graphs = {}
    for entry in fixture_entries:
        parsed = penman.parse(entry.amr_text)
        assert isinstance(parsed, penman.AmrGraph), entry.id
        graphs[entry.id] = parsed
    return graphs


@pytest.fixture
def verdict(capsys):
    """Print one live pass/fail line per acceptance check, then assert."""

    def emit(name: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}"
        if detail:
            line += f" :: {detail}"
        with capsys.disabled():
            print(line, flush=True)
        assert ok, f"{name}: {detail}"

    return emit
