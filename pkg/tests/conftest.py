import os

import pytest
from hypothesis import HealthCheck, settings

from fbcat import exactla as la

settings.register_profile(
    "fbcat",
    deadline=None,
    max_examples=int(os.environ.get("FBCAT_HYPOTHESIS_EXAMPLES", "40")),
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("fbcat")


@pytest.fixture(autouse=True)
def _default_prime():
    """Every test starts and ends over F_101."""
    la.set_prime(la.DEFAULT_PRIME)
    yield
    la.set_prime(la.DEFAULT_PRIME)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_line(request, capsys):
    """Print one ``PASS``/``FAIL`` line for an acceptance criterion and keep it for the summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        with capsys.disabled():
            print("\n" + line)

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
