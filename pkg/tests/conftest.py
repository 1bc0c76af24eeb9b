import random

import pytest

from smcstats.engine import EngineConfig, PartyNetwork

ACCEPTANCE_LINES = []


@pytest.fixture
def net():
    return PartyNetwork(EngineConfig(seed=1234))


@pytest.fixture
def picco_net():
    return PartyNetwork(EngineConfig(seed=1234, cost_profile="picco"))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
