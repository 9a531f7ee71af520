import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parents[1]
_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def record_criterion(request):
    """Record one PASS/FAIL/SKIP line for the acceptance summary."""

    def record(number, status, detail):
        request.config.stash[_VERDICTS].append((number, status, detail))

    return record


def pytest_terminal_summary(terminalreporter, config):
    verdicts = sorted(config.stash.get(_VERDICTS, []))
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, detail in verdicts:
        terminalreporter.write_line(f"criterion {number:>2}: {status:<4} {detail}")


@pytest.fixture
def uci_dir():
    return ROOT / "data" / "uci"
