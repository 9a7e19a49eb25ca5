import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=100, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture
def unit():
    from lvnsfd import Params
    return Params(1.0, 1.0, 1.0, 1.0)


# acceptance criteria report one line each in the terminal summary
_CRITERIA = {}


@pytest.fixture
def criterion(request):
    def record(label, passed, detail=""):
        _CRITERIA[label] = (bool(passed), detail)
        assert passed, f"{label}: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA):
        passed, detail = _CRITERIA[label]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}")
