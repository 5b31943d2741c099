from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import pair  # noqa: E402
from semsim.corpus import Corpus  # noqa: E402
from semsim.wordsim import Taxonomy  # noqa: E402


@pytest.fixture
def toy_taxonomy() -> Taxonomy:
    # root -> animal -> {dog, cat}
    return Taxonomy({"animal": ["root"], "dog": ["animal"], "cat": ["animal"]},
                    {"dog": ["dog"], "cat": ["cat"], "animal": ["animal"]})


@pytest.fixture
def easy_corpus() -> Corpus:
    """Positives are identical, negatives share nothing."""
    return Corpus((
        pair("p1", "a b c", "a b c", True),
        pair("p2", "d e", "d e", True),
        pair("n1", "a b", "x y", False),
        pair("n2", "c d", "z w", False),
    ), "easy")


@pytest.fixture
def hard_corpus() -> Corpus:
    """Positives share nothing, negatives are identical."""
    return Corpus((
        pair("p1", "a b c", "x y z", True),
        pair("p2", "d e", "u v", True),
        pair("n1", "a b", "a b", False),
        pair("n2", "c d", "c d", False),
    ), "hard")


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LOG

    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LOG:
        terminalreporter.write_line(line)
