import sys

import pytest

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


@pytest.fixture(scope="session")
def size8_classification(tmp_path_factory):
    """Full size-8 orbit classification, computed once per session (about a minute)."""
    from dp1.orbits import classify_size8_orbits
    ck = tmp_path_factory.mktemp("size8-checkpoint")
    return classify_size8_orbits(checkpoint=str(ck))


@pytest.fixture(scope="session")
def maximal_orbits():
    from dp1.orbits import classify_maximal_cliques
    return classify_maximal_cliques(9)


@pytest.fixture(scope="session")
def fixtures():
    from dp1.examples import FIXTURES, load_fixture
    return {name: load_fixture(name) for name in FIXTURES}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
