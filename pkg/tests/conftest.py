import pytest

from wifiplan.oracle import inst_a
from wifiplan.topology import build_topology

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion of the build")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and rep.when == "call":
        _ACCEPTANCE.append(("PASS" if rep.passed else "FAIL", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for status, label in _ACCEPTANCE:
            terminalreporter.write_line(f"{status}  {label}")


@pytest.fixture
def inst():
    return inst_a()


@pytest.fixture
def topo(inst):
    return build_topology(inst)
