"""Randomised algebraic invariants."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from higherq.coeff import IntPolyQ, LevelCtx, RatFuncQ, hl_angle, hl_brace, q_binom_pascal, q_int
from higherq.derham import DeRhamElem, derham_d
from higherq.dp_algebra import DPElem, comul, dp_embed, dp_mul, face, flip, taylor
from higherq.jet import JetElem, homotopy_h, jet_d, jet_eq_mod_relations, jet_pi
from higherq.poly import XPoly

levels = st.sampled_from([LevelCtx(2, 0), LevelCtx(2, 1), LevelCtx(3, 1), LevelCtx(2, 2)])
polys = st.lists(st.integers(-5, 5), max_size=5).map(IntPolyQ)
nonzero = polys.filter(lambda f: not f.is_zero())


@given(st.integers(0, 30), st.integers(0, 30))
def test_q_binomial_symmetry_and_value(k, kp):
    if kp > k:
        k, kp = kp, k
    b = q_binom_pascal(k, kp)
    assert b == q_binom_pascal(k, k - kp)
    assert RatFuncQ(b).at(1) == (math.comb(k, kp), 1)


@given(st.integers(1, 25), st.integers(1, 25))
def test_q_pascal_second_rule(k, kp):
    # (k\k') = q^{k-k'} (k-1\k'-1) + (k-1\k')
    lhs = q_binom_pascal(k, kp)
    rhs = IntPolyQ.monomial(max(k - kp, 0)) * q_binom_pascal(k - 1, kp - 1) + q_binom_pascal(k - 1, kp)
    assert lhs == rhs


@given(polys, nonzero, polys, nonzero)
def test_ratfunc_field(a, b, c, d):
    x, y = RatFuncQ(a, b), RatFuncQ(c, d)
    assert (x + y) - y == x
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == 1
    assert RatFuncQ(x.num, x.den) == x


@given(levels, st.integers(0, 20), st.data())
def test_angle_times_brace(ctx, k, data):
    kp = data.draw(st.integers(0, k))
    assert hl_angle(k, kp, ctx) * RatFuncQ(hl_brace(k, kp, ctx)) == RatFuncQ(q_binom_pascal(k, kp))


@given(st.integers(1, 10), st.integers(1, 10), st.integers(0, 3))
def test_qint_product_identity(n, n2, j):
    e = 2 ** j
    assert q_int(n * n2, j, p=2) == q_int(n, j, p=2) * IntPolyQ(q_int(n2).coeffs).compose_power(e * n)


idx2 = st.tuples(st.integers(0, 6), st.integers(0, 6))


@settings(max_examples=40, deadline=None)
@given(levels, idx2, idx2, idx2)
def test_dp_ring_axioms(level, a, b, c):
    ctx = level.with_d(2)
    x, y, z = (DPElem.basis(k, ctx) for k in (a, b, c))
    assert dp_mul(x, y) == dp_mul(y, x)
    assert dp_mul(dp_mul(x, y), z) == dp_mul(x, dp_mul(y, z))
    assert dp_embed(dp_mul(x, y)) == dp_embed(x) * dp_embed(y)


@settings(max_examples=40, deadline=None)
@given(levels, idx2)
def test_flip_and_comul(level, k):
    ctx = level.with_d(2)
    a = DPElem.basis(k, ctx)
    assert flip(flip(a)) == a
    c = comul(a)
    assert face(c, 1) == face(c, 2)


@settings(max_examples=30, deadline=None)
@given(levels, st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_taylor_homomorphism(level, e):
    ctx = level.with_d(2)
    f, g = XPoly.monomial(e), XPoly.x(0, 2) + XPoly.x(1, 2)
    assert taylor(f * g, ctx) == dp_mul(taylor(f, ctx), taylor(g, ctx))


@settings(max_examples=30, deadline=None)
@given(levels, idx2, st.sampled_from([(), (0,), (1,), (0, 1)]))
def test_derham_dd(level, k, s):
    ctx = level.with_d(2)
    assert derham_d(derham_d(DeRhamElem.basis(k, s, ctx))).is_zero()


def _factors(ctx, n):
    pm = ctx.pm
    gens = [(a, b) for a in range(pm + 1) for b in range(pm + 1) if 0 < a + b <= pm]
    return st.lists(st.sampled_from(gens), max_size=n)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_homotopy_identity_random(data):
    ctx = data.draw(levels).with_d(2)
    k = data.draw(idx2)
    fs = data.draw(_factors(ctx, 2))
    x = data.draw(st.tuples(st.integers(0, 2), st.integers(0, 2)))
    e = JetElem.word(k, fs, ctx, x=x)
    lhs = homotopy_h(jet_d(e))
    if e.jet_degree:
        lhs = lhs + jet_d(homotopy_h(e))
    rhs = e - jet_pi(e)
    if e.jet_degree >= 2:
        assert jet_eq_mod_relations(lhs, rhs, 8)
    else:
        assert lhs == rhs
    dd = jet_d(jet_d(e))
    assert jet_eq_mod_relations(dd, JetElem(ctx, dd.jet_degree), 8) if dd.jet_degree >= 2 else dd.is_zero()
