import pytest

from symbreak.knowledge import Model, random_ports
from symbreak.randomness import RandomnessConfiguration, set_partitions


def configs_up_to(n_max):
    for n in range(1, n_max + 1):
        yield from set_partitions(n)


def models_for(n, seeds=range(3)):
    yield Model.blackboard()
    if n >= 2:
        for s in seeds:
            yield Model.message_passing(random_ports(n, s))


@pytest.fixture
def alpha():
    return lambda *counts: RandomnessConfiguration.from_counts(counts)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
