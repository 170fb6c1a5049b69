import math

import pytest

from lfriccati.core_numerics import CANTOR_ZETA

ZETAS = [1.0, 0.5, CANTOR_ZETA]
SQRT5 = math.sqrt(5.0)


@pytest.fixture(params=ZETAS, ids=["zeta=1", "zeta=1/2", "zeta=cantor"])
def zeta(request):
    return request.param

# lines recorded by the acceptance suite, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
