import random

import pytest

from qgrass.qarith import QParams

GRID = [(2, 7, 3, 2), (2, 9, 4, 2), (2, 9, 4, 3), (3, 7, 3, 2)]


@pytest.fixture(scope="session")
def p273():
    return QParams(2, 7, 3)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def native_graph_file(tmp_path_factory, p273):
    from qgrass.explorer import export_native

    path = tmp_path_factory.mktemp("graphs") / "j273.txt"
    export_native(path, p273, 50_000)
    return path


@pytest.fixture(scope="session")
def native_graph(native_graph_file):
    from qgrass.explorer import load_graph

    return load_graph(native_graph_file)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
