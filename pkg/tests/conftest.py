import sys
from pathlib import Path

import pytest

import hcdfg_metrics
from hcdfg_metrics.analysis import analyze_paths
from hcdfg_metrics.metrics import Profile

sys.path.insert(0, str(Path(__file__).parent))

CORPUS = Path(hcdfg_metrics.__file__).parent / "corpus"
CORPUS_FILES = sorted(str(p) for p in CORPUS.glob("*.c"))
CORPUS_PROFILE = CORPUS / "profile.toml"

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
CRITERIA: dict = {}


@pytest.fixture(scope="session")
def corpus_profile():
    return Profile.load(CORPUS_PROFILE)


@pytest.fixture(scope="session")
def corpus_analyses(corpus_profile):
    analyses, failures = analyze_paths(CORPUS_FILES, profile=corpus_profile)
    assert not failures, failures
    return {a.name: a for a in analyses}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
