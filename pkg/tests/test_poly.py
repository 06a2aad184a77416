import pytest

from conftest import qf
from higherq.coeff import ONE, Q, LevelCtx, LocalizationError, RatFuncQ
from higherq.poly import (
    FullPoly,
    Poly,
    XPoly,
    certify_integral,
    certify_localized,
    delta,
    divide_exact,
    frobenius,
    quantum_binomial_expand,
    twisted_power,
    twisted_power_multi,
)

P21 = LevelCtx(2, 1, 1)
X, XI = FullPoly.x(0, 1), FullPoly.xi(0, 1)


def test_twisted_power_small():
    assert twisted_power(0, 0, None, P21) == 1
    assert twisted_power(0, 1, None, P21) == XI
    assert twisted_power(0, 2, None, P21) == XI * XI + (X * XI).scale(ONE - Q)


def test_twisted_power_recursion():
    for k in range(6):
        nxt = twisted_power(0, k, None, P21) * (XI + X.scale(ONE - Q ** k))
        assert twisted_power(0, k + 1, None, P21) == nxt


def test_twisted_power_multi():
    ctx = LevelCtx(2, 1, 2)
    assert twisted_power_multi((0, 0), None, ctx) == 1
    assert twisted_power_multi((1, 1), None, ctx) == FullPoly.xi(0, 2) * FullPoly.xi(1, 2)
    assert twisted_power_multi((2,), None, P21) == twisted_power(0, 2, None, P21)
    with pytest.raises(ValueError):
        twisted_power_multi((1,), None, ctx)


def test_frobenius():
    assert frobenius(XPoly.x(0, 1), 1, P21) == XPoly.x(0, 1, 2)
    assert frobenius(XPoly.constant(Q, 1), 1, P21) == XPoly.constant(Q ** 2, 1)
    assert frobenius(XI, 1, P21) == XI * XI + (X * XI).scale(2)
    assert frobenius(XPoly.x(0, 1), 2, LevelCtx(3, 0)) == XPoly.x(0, 1, 9)


def test_delta_integral():
    f = XPoly.x(0, 1).scale(qf(1, 1)) + XPoly.constant(3, 1)
    g = delta(f, P21)
    certify_integral(g)
    assert frobenius(f, 1, P21) == f ** 2 + g.scale(2)


def test_quantum_binomial():
    a, b = Poly.variable(0, 2), Poly.variable(1, 2)
    assert quantum_binomial_expand(a, b, 0) == 1
    assert quantum_binomial_expand(a, b, 1) == a + b
    assert quantum_binomial_expand(a, b, 2) == (a * a).scale(Q) + (a * b).scale(qf(1, 1)) + b * b


def test_certificates():
    f = XPoly.constant(RatFuncQ(1) / qf(1, 1, 1), 1)
    certify_localized(f, 2)
    with pytest.raises(LocalizationError):
        certify_localized(f, 3)
    with pytest.raises(LocalizationError):
        certify_integral(f)
    g = XPoly.x(0, 1).scale(qf(1, 1) * qf(2, 0, 1))
    assert divide_exact(g, qf(1, 1).as_intpoly()) == XPoly.x(0, 1).scale(qf(2, 0, 1))
    assert divide_exact(g, qf(1, 0, 1).as_intpoly()) is None


def test_ring_mismatch():
    with pytest.raises(ValueError):
        X + XPoly.x(0, 1) + XPoly.x(0, 2)


def test_render():
    assert XPoly.x(0, 2).scale(qf(1, 1)).render() == "(1+q)*x1"
    assert (XI * XI - X).render() == "xi1^2 - x1"
