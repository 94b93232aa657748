import sys
from pathlib import Path

import pytest
from hypothesis import settings

from hdatopo.simplicial import FIXTURES, from_facets, load_fixture

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ALL = ("point",) + tuple(FIXTURES)


@pytest.fixture(scope="session")
def complexes():
    return {name: load_fixture(name) for name in ALL}


@pytest.fixture(scope="session")
def k_edge():
    return from_facets(2, [(1, 2)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
