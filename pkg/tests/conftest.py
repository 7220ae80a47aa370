import numpy as np
import pytest

from bbuclust import model


@pytest.fixture
def rng():
    return np.random.default_rng(np.random.SeedSequence(12345))


@pytest.fixture
def line_points():
    """Five points on a line at x = 0, 1, 2, 10, 30."""
    return model.build_distance_matrix([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0],
                                        [10.0, 0.0], [30.0, 0.0]])


def random_clustering(rng, n):
    """A random contiguous-labelled clustering of n points."""
    labels = rng.integers(1, n + 1, size=n)
    return model.Clustering(labels=model.renumber(labels))


# One line per acceptance criterion, echoed into the terminal summary so the
# verdicts survive output capturing.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
