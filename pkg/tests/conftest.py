import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twincausal.datasets import load_graph, simpson_table  # noqa: E402


@pytest.fixture
def case1():
    return load_graph("case1")


@pytest.fixture
def case2():
    return load_graph("case2")


@pytest.fixture
def confounded():
    return load_graph("confounded")


@pytest.fixture
def frontdoor():
    return load_graph("frontdoor")


@pytest.fixture
def simpson(case1):
    return simpson_table(case1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
