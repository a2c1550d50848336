import numpy as np
import pytest

from graphsubsample import GeneratorSpec, GraphTemplate, build_generator, build_graph, normalized_laplacian

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def record(number, name, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number:>2}: {name}  {detail}".rstrip())
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_connected_graph(rng, n_range=(4, 12), kinds=("erdos_renyi", "complete", "bipartite")):
    while True:
        n = int(rng.integers(*n_range))
        kind = kinds[int(rng.integers(len(kinds)))]
        g = build_graph(GraphTemplate(kind=kind, n=n, seed=int(rng.integers(2**31))))
        if g.is_connected():
            return g


def random_generator(rng, lap, max_order=5):
    spec = GeneratorSpec(order=int(rng.integers(1, max_order + 1)), coefficient_seed=int(rng.integers(2**31)))
    return build_generator(lap, spec)


@pytest.fixture
def two_node_b():
    g = build_graph(GraphTemplate(kind="custom", weights=[[0, 2.5], [2.5, 0]]))
    return build_generator(normalized_laplacian(g), GeneratorSpec(1, (1.0,)))
