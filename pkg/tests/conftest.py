import pytest

from multiphoton import ModelSpec, SusyConfig


@pytest.fixture
def ho():
    return ModelSpec.harmonic()


@pytest.fixture
def pt2():
    return ModelSpec.poschl_teller(2.0)


@pytest.fixture
def eps_half():
    return SusyConfig([-0.5])


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
