from fractions import Fraction as F

import pytest

from awcalc.algebra import QParam
from awcalc.opseq import RecurrencePair

T_VALUES = [F(1, 2), F(1, 3), F(3, 5)]


def q_hermite_rec(qp: QParam, N: int = 20) -> RecurrencePair:
    q = qp.q
    return RecurrencePair([0] * N, [(1 - q ** (n + 1)) / 4 for n in range(N)])


@pytest.fixture
def qp():
    return QParam(F(1, 2))


@pytest.fixture(params=T_VALUES, ids=lambda t: f"t={t}")
def any_qp(request):
    return QParam(request.param)


@pytest.fixture
def hermite(qp):
    return q_hermite_rec(qp)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
