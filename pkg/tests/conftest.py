"""Shared fixtures: one worked tied pair exercised throughout the suite.

SHORT has 7 ranks in 5 groups, LONG has 13 ranks in 7 groups; they share
five items (a, c, d, e, f), their union has 15, and both contain groups
that cross interesting depths.  Every hand-computed golden in the tests
refers to this pair.
"""

from pathlib import Path

import pytest

from rbo_kit import Ranking, ranking_from_groups

SHORT_GROUPS = (("f",), ("b",), ("a",), ("e", "c", "d"), ("n",))
LONG_GROUPS = (
    ("a",),
    ("d",),
    ("i",),
    ("m", "c"),
    ("e",),
    ("g", "h", "f"),
    ("j", "k", "o", "q"),
)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def short_tied() -> Ranking:
    return ranking_from_groups(SHORT_GROUPS)


@pytest.fixture
def long_tied() -> Ranking:
    return ranking_from_groups(LONG_GROUPS)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
