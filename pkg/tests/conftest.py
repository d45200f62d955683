import numpy as np
import pytest

from threshnet.netgraph import ThresholdGraph


def complete(n):
    return ThresholdGraph.from_dense(~np.eye(n, dtype=bool))


def empty(n):
    return ThresholdGraph.from_dense(np.zeros((n, n), dtype=bool))


def path(n):
    return ThresholdGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return ThresholdGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(m):
    return ThresholdGraph.from_edges(m + 1, [(0, i) for i in range(1, m + 1)])


def bowtie():
    # vertex 2 is shared by triangles {0,1,2} and {2,3,4}
    return ThresholdGraph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


@pytest.fixture
def graphs():
    return {"complete": complete, "empty": empty, "path": path, "cycle": cycle, "star": star, "bowtie": bowtie}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
