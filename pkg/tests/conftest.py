import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one summary line per acceptance criterion: criterion(k, passed, detail)."""
    def record(k: int, passed: bool, detail: str) -> bool:
        _ACCEPTANCE[k] = f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(_ACCEPTANCE[k])
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])
