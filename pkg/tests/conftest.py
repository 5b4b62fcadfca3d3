import pytest

from rauzy.pruning import prune_fixed_point
from rauzy.sweep import EvalMode, build_table


@pytest.fixture(scope="session")
def table13():
    return build_table(13, EvalMode("edges"))


@pytest.fixture(scope="session")
def table13_vertices():
    return build_table(13, EvalMode("vertices"))


@pytest.fixture(scope="session")
def pruned13(table13):
    return prune_fixed_point(table13)
