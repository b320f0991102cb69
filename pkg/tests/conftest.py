import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def ideal_p():
    from dimwit.circuit import ideal_probability_matrix

    return ideal_probability_matrix()


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    state = {}

    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        state["number"] = number
        _ACCEPTANCE[number] = f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}: {detail}"
        return passed

    yield record
    marker = request.node.get_closest_marker("criterion")
    number = marker.args[0] if marker else None
    if number is not None and "number" not in state:
        _ACCEPTANCE[number] = f"[FAIL] {number:2d}. {marker.args[1]}: raised before reporting"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])
