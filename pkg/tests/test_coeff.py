from fractions import Fraction

import pytest

from conftest import qf, qp
from higherq.coeff import (
    IntPolyQ,
    LevelCtx,
    LocalizationError,
    LocalizedQ,
    RatFuncQ,
    angle_int,
    brace_int,
    clmus_unit,
    hl_angle,
    hl_angle_multi,
    hl_brace,
    hl_brace_multi,
    in_localized,
    is_unit_localized,
    q_binom_factorial,
    q_binom_multi,
    q_binom_pascal,
    q_factorial,
    q_int,
)

P21 = LevelCtx(2, 1, 1)


def test_q_int():
    assert q_int(3, 0) == qp(1, 1, 1)
    assert q_int(0, 5, p=2) == 0
    assert q_int(2, 1, p=2) == qp(1, 0, 1)
    with pytest.raises(ValueError):
        q_int(2, 1)


def test_q_factorial():
    assert q_factorial(0) == 1
    assert q_factorial(2) == qp(1, 1)
    assert q_factorial(3) == qp(1, 1) * qp(1, 1, 1)


def test_q_binom_pascal():
    assert q_binom_pascal(2, 1) == qp(1, 1)
    assert q_binom_pascal(0, 3) == 0
    assert q_binom_pascal(4, 2) == qp(1, 1, 2, 1, 1)
    assert q_binom_pascal(0, 0) == 1
    assert q_binom_pascal(3, -1) == 0


def test_q_binom_factorial():
    assert q_binom_factorial(4, 2) == qf(1, 1, 2, 1, 1)
    assert q_binom_factorial(5, 0) == 1
    assert q_binom_factorial(5, 5) == 1
    with pytest.raises(ValueError):
        q_binom_factorial(2, 3)


def test_hl_brace():
    assert hl_brace(4, 2, P21) == qp(1, 0, 1)
    assert hl_brace(2, 1, P21) == 1
    for k in range(9):
        assert hl_brace(k, 0, P21) == 1
    with pytest.raises(ValueError):
        hl_brace(1, 2, P21)


def test_hl_angle():
    assert hl_angle(4, 2, P21) == qf(1, 1, 1)
    assert hl_angle(2, 1, P21) == qf(1, 1)
    for k in range(9):
        assert hl_angle(k, k, P21) == 1


def test_multi_versions():
    ctx = LevelCtx(2, 1, 2)
    assert hl_angle_multi((4, 2), (2, 1), ctx) == qf(1, 1, 1) * qf(1, 1)
    assert hl_brace_multi((3, 5), (3, 5), ctx) == 1
    assert hl_angle_multi((3, 5), (0, 0), ctx) == 1
    assert q_binom_multi((3, 1), (0, 0)) == 1
    with pytest.raises(ValueError):
        hl_angle_multi((1, 2), (2, 1), ctx)
    with pytest.raises(ValueError):
        q_binom_multi((1, 2), (1,))


def test_in_localized():
    assert in_localized(RatFuncQ(1) / qf(1, 1), 2) is None
    assert in_localized(RatFuncQ(1) / qf(1, 1, 1), 2) is not None
    assert in_localized(qf(3, -1, 7), 2) is not None
    with pytest.raises(LocalizationError):
        LocalizedQ(RatFuncQ(1) / qf(1, 1), 2)


def test_is_unit_localized():
    for j in range(3):
        assert is_unit_localized(LocalizedQ(q_int(3, j, p=2), 2))
    assert not is_unit_localized(LocalizedQ(q_int(2), 2))
    assert is_unit_localized(LocalizedQ(1, 2))


def test_clmus_unit():
    assert clmus_unit(2, 1, P21) == q_int(5)
    assert clmus_unit(0, 1, P21) == 1
    u = clmus_unit(1, 2, LevelCtx(3, 1))
    assert u == RatFuncQ(q_int(5)) / RatFuncQ(q_int(2))
    assert u.is_unit()
    with pytest.raises(ValueError):
        clmus_unit(1, 2, P21)


def test_ratfunc_normal_form():
    a = RatFuncQ(qp(2, 2), qp(-4))
    assert a.num == qp(-1, -1) and a.den == qp(2)
    assert (qf(1, 1) / qf(1, 1)).is_one()
    with pytest.raises(ZeroDivisionError):
        RatFuncQ(1, 0)


def test_classical_integers():
    assert brace_int(6, 3, P21) == 6
    # C(6, 3)/3! is not an integer but lies in Z_(2)
    assert angle_int(6, 3, P21) == Fraction(10, 3)
    num, den = hl_angle(6, 3, P21).value.at(1)
    assert Fraction(num, den) == Fraction(10, 3)


def test_bad_context():
    with pytest.raises(ValueError):
        LevelCtx(4, 1)
    with pytest.raises(ValueError):
        LevelCtx(2, -1)
    with pytest.raises(ValueError):
        LevelCtx(2, 1, 0)
