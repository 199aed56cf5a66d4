import pytest
from hypothesis import HealthCheck, settings

from zicdgr._backend import compiled_available, set_backend

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record a one-line criterion verdict for the terminal summary."""
    def add(text: str) -> None:
        _ACCEPTANCE_LINES.append(text)
        print(text)
    return add


@pytest.fixture(params=["python", "compiled"])
def each_backend(request):
    if request.param == "compiled" and not compiled_available():
        pytest.skip("compiled kernels not built")
    set_backend(request.param)
    yield request.param
    set_backend("compiled" if compiled_available() else "python")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
