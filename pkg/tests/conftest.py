import pytest

from higherq.coeff import IntPolyQ, LevelCtx, RatFuncQ


def qp(*coeffs) -> IntPolyQ:
    """Integer polynomial in q from ascending coefficients."""
    return IntPolyQ(list(coeffs))


def qf(*coeffs) -> RatFuncQ:
    return RatFuncQ(qp(*coeffs))


@pytest.fixture
def ctx21():
    return LevelCtx(2, 1, 1)


@pytest.fixture
def ctx20():
    return LevelCtx(2, 0, 1)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
