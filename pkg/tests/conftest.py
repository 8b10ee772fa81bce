from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from tropical_rubber.cli import corpus_dir  # noqa: E402
from tropical_rubber.document import load_input  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

CORPUS = corpus_dir()
FIXTURES = HERE / "fixtures"
RANDOM_COUNT = 110


def corpus_path(name: str) -> Path:
    return CORPUS / f"{name}.json"


@pytest.fixture(scope="session")
def corpus():
    """Loaded models of every bundled input, keyed by file stem."""
    return {p.stem: load_input(p) for p in sorted(CORPUS.glob("*.json"))}


@pytest.fixture(scope="session")
def random_expansions():
    from generators import valid_expansions

    expansions, _ = valid_expansions(RANDOM_COUNT)
    return expansions


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, title = results[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}")
