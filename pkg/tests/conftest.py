import numpy as np
import pytest

from gadgetgraph.graphs import build_graph
from gadgetgraph.instances import minimal_game, triangle_coloring_game

import helpers


@pytest.fixture(scope="session")
def min_game():
    return minimal_game()


@pytest.fixture(scope="session")
def min_graph(min_game):
    return build_graph(min_game)


@pytest.fixture(scope="session")
def tri_game():
    return triangle_coloring_game()


@pytest.fixture(scope="session")
def tri_graph(tri_game):
    return build_graph(tri_game)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not helpers.ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, verdict, description, seconds in sorted(helpers.ACCEPTANCE_RESULTS):
        terminalreporter.write_line(
            f"ACCEPTANCE {number} {verdict}: {description} ({seconds:.1f}s)"
        )
