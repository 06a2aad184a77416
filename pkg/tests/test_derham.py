import pytest

from conftest import qf
from higherq.coeff import ONE, LevelCtx
from higherq.derham import (
    CopiesElem,
    DeRhamElem,
    beta,
    beta_inverse,
    binomial_product_check,
    binomial_vanishing_check,
    box,
    derham_d,
    derham_reduce,
    flip_identity_check,
    iota,
    stratification_square_check,
    verify_poincare,
    wedge_sort,
)
from higherq.dp_algebra import TensorElem, cosimplicial_d
from higherq.poly import XPoly

P21 = LevelCtx(2, 1, 1)
P22 = LevelCtx(2, 1, 2)


def dr(k, s=(), ctx=P21, c=ONE, x=None):
    return DeRhamElem.basis(k, s, ctx, c, x)


def test_wedge_sort():
    assert wedge_sort((1, 0)) == (-1, (0, 1))
    assert wedge_sort((2, 0, 1)) == (1, (0, 1, 2))
    assert wedge_sort((1, 1)) is None


def test_reduce():
    assert derham_reduce(TensorElem.word([(0,), (1,)], P21), P21).is_zero()
    g1, g2, z = (2, 0), (0, 2), (0, 0)
    assert derham_reduce(TensorElem.word([z, g1, g1], P22), P22).is_zero()
    assert derham_reduce(TensorElem.word([z, g2, g1], P22), P22) == dr(z, (0, 1), P22, -ONE)
    with pytest.raises(ValueError):
        derham_reduce(TensorElem.word([(0,), (0,)], P21), P21)


def test_d_examples():
    assert derham_d(dr((1,))).is_zero()
    assert derham_d(dr((2,))) == dr((0,), (0,))
    assert derham_d(dr((4,))) == dr((2,), (0,), c=qf(1, 1, 1))
    assert derham_d(dr((1, 1), (), P22)).is_zero()


def test_d_is_a_linear():
    e = dr((5,), x=(3,))
    assert derham_d(e) == dr((3,), (0,), c=derham_d(dr((5,))).terms[((0,), (3,), (0,))], x=(3,))


@pytest.mark.parametrize("ctx", [LevelCtx(2, 0, 1), P21, P22, LevelCtx(3, 1, 1)])
def test_quotient_compatibility(ctx):
    """Reducing after the tensor differential equals the de Rham differential after reducing."""
    from itertools import product as iprod
    pm, d = ctx.pm, ctx.d
    gens = [tuple(pm if j == i else 0 for j in range(d)) for i in range(d)]
    heads = [k for k in iprod(range(2 * pm + 2), repeat=d)]
    for head in heads:
        for r in range(min(d, 1) + 1):
            for fs in iprod(gens, repeat=r):
                t = TensorElem.word([head, *fs], ctx)
                lhs = derham_reduce(cosimplicial_d(t, True), ctx)
                rhs = derham_d(derham_reduce(t, ctx), ctx)
                assert lhs == rhs


def test_beta_and_iota():
    e0, e1 = CopiesElem.e((0,), P21), CopiesElem.e((1,), P21)
    x = XPoly.x(0, 1)
    assert beta(e0) == e0
    assert beta(e1) == e1 - e0.times(x)
    for k in box(P21):
        e = CopiesElem.e(k, P21)
        assert beta_inverse(beta(e)) == e
        assert derham_d(iota(e)).is_zero()
    assert iota(e1) == dr((1,)) + dr((0,), x=(1,))


def test_box():
    assert box(P22) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(box(LevelCtx(3, 1, 2))) == 9


@pytest.mark.parametrize("ctx,bound", [(P21, 8), (LevelCtx(2, 0, 1), 6), (P22, 4), (LevelCtx(3, 1, 1), 8)])
def test_poincare(ctx, bound):
    rep = verify_poincare(bound, ctx)
    assert rep.ok, rep.failures[:3]
    assert rep.cases > 0


def test_stratification_identities():
    for l in range(7):
        for lpp in range(l):
            assert binomial_vanishing_check((l,), (lpp,))
        for lpp in range(l + 1):
            assert binomial_product_check((l,), (lpp,))
    for k in box(P21):
        assert flip_identity_check(k, P21)
        assert stratification_square_check(k, P21)
    for k in box(P22):
        assert stratification_square_check(k, P22)
    with pytest.raises(ValueError):
        flip_identity_check((2,), P21)


def test_wedge_validation():
    with pytest.raises(ValueError):
        DeRhamElem(P22, 2, {((0, 0), (0, 0), (1, 0)): ONE})
