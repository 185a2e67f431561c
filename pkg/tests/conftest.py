import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from steinervdc.inputs import builtin  # noqa: E402


@pytest.fixture(scope="session")
def bump128():
    return builtin("bump", 128)


@pytest.fixture(scope="session")
def bump64():
    return builtin("bump", 64)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
