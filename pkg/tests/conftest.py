import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dftpaving.construction import FrameParams, build_stack  # noqa: E402

CRITERIA: dict[str, str] = {}


@pytest.fixture(scope="session")
def frames():
    cache = {}

    def get(r, n):
        if (r, n) not in cache:
            cache[(r, n)] = build_stack(FrameParams(r, n))
        return cache[(r, n)]
    return get


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{name}: {CRITERIA[name]}")
