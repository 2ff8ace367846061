import sys

import pytest

from psl2spectrum.cayley import build_ball


@pytest.fixture(scope="session")
def ball_cache():
    cache = {}

    def get(radius):
        if radius not in cache:
            cache[radius] = build_ball(radius)
        return cache[radius]

    return get


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
