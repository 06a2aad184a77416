"""The named verification suites behind ``higherq verify``.

Each suite takes a :class:`RunConfig` and returns a :class:`Report`.  Ranges
that the theory ties to the level (for instance |k| <= 2p^m + 2) are derived
from p and m; ``max_index`` is the free truncation bound N.
"""

from __future__ import annotations

import random
from fractions import Fraction
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable

from .coeff import (
    ONE,
    Q,
    LevelCtx,
    LocalizationError,
    RatFuncQ,
    angle_int,
    brace_int,
    hl_angle,
    hl_brace,
    clmus_unit,
    index_le,
    q_binom_factorial,
    q_binom_pascal,
    q_int,
    q_int_step,
    unit_index,
    zero_index,
)
from .derham import (
    DeRhamElem,
    binomial_product_check,
    binomial_vanishing_check,
    box,
    derham_d,
    derham_reduce,
    flip_identity_check,
    stratification_square_check,
    verify_poincare,
)
from .dp_algebra import (
    DPElem,
    TensorElem,
    certify_dp,
    clpin_check,
    comul,
    cosimplicial_d,
    degeneracy,
    dp_embed,
    dp_mul,
    dp_unembed,
    face,
    rg_basis_change,
    stratification_cocycle_check,
    tensor_mul,
)
from .jet import (
    JetElem,
    coefficient_range,
    generator_words,
    jet_d,
    jet_dd_check,
    verify_h_locality,
    verify_h_relations,
    verify_homotopy_identity,
    verify_jet_poincare,
)
from .linalg import residue
from .poly import Poly, quantum_binomial_expand, twisted_power_multi
from .report import Report


@dataclass(frozen=True)
class RunConfig:
    p: int = 2
    m: int = 1
    d: int = 1
    max_index: int = 8
    max_degree: int = 2
    xdeg_bound: int = 6
    suites: tuple[str, ...] = field(default_factory=tuple)
    format: str = "json"

    def __post_init__(self):
        LevelCtx(self.p, self.m, self.d)  # validates p, m, d
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}")

    @property
    def ctx(self) -> LevelCtx:
        return LevelCtx(self.p, self.m, self.d)


def indices(d: int, total: int) -> list[tuple[int, ...]]:
    """Multi-indices of length d with |k| <= total, graded order."""
    return coefficient_range(total, LevelCtx(2, 0, d))


# coefficient suites

def pascal_factorial(cfg: RunConfig) -> Report:
    rep = Report("pascal_factorial")
    for k in range(cfg.max_index + 1):
        for kp in range(k + 1):
            pas = q_binom_pascal(k, kp)
            fac = q_binom_factorial(k, kp)
            rep.check(fac.is_poly() and fac.as_intpoly() == pas, {"k": k, "k'": kp}, pas, fac)
    return rep.finish()


def integrality(cfg: RunConfig) -> Report:
    rep = Report("integrality")
    ctx = cfg.ctx
    for k in range(3 * ctx.pm + ctx.p + 1):
        for kp in range(k + 1):
            case = {"p": ctx.p, "m": ctx.m, "k": k, "k'": kp}
            try:
                hl_brace(k, kp, ctx)
                hl_angle(k, kp, ctx)
                rep.check(True, case)
            except (AssertionError, LocalizationError) as exc:
                rep.check(False, case, "certified", str(exc))
    return rep.finish()


def angle_congruence(cfg: RunConfig) -> Report:
    rep = Report("angle_congruence")
    ctx = cfg.ctx
    pm, p = ctx.pm, ctx.p
    for k in range(pm, 3 * pm + 1):
        a = residue(hl_angle(k, pm, ctx).value, p)
        rep.check(a == 1 % p, {"k": k, "k'": pm}, 1 % p, a)
    return rep.finish()


def qint_products(cfg: RunConfig) -> Report:
    rep = Report("qint_products")
    ctx = cfg.ctx
    p, pm = ctx.p, ctx.pm
    for j in range(ctx.m + 2):
        e = p ** j
        for n in range(13):
            for n2 in range(13):
                lhs = q_int_step(n * n2, e)
                rhs = q_int_step(n, e) * q_int_step(n2, e * n)
                rep.check(lhs == rhs, {"n": n, "n'": n2, "shift": j}, lhs, rhs)
    for r in range(5):
        for s in range(1, pm):
            case = {"r": r, "s": s}
            try:
                u = clmus_unit(r, s, ctx)
            except AssertionError as exc:
                rep.check(False, case, "unit", str(exc))
                continue
            ok = u.value * RatFuncQ(q_int(s)) == RatFuncQ(q_int(pm * r + s)) and u.is_unit()
            rep.check(ok, case, "(p^m r + s)_q = u (s)_q", u)
    return rep.finish()


# divided powers and comultiplication

def _dp_triples(cfg: RunConfig, rng: random.Random):
    ctx = cfg.ctx
    top = 2 * ctx.pm + 2
    pool = indices(ctx.d, top)
    if ctx.d == 1:
        return list(product(pool, repeat=3))
    return [tuple(rng.choice(pool) for _ in range(3)) for _ in range(200)]


def dp_algebra(cfg: RunConfig) -> Report:
    rep = Report("dp_algebra")
    ctx = cfg.ctx
    one = DPElem.one(ctx)
    basis = {}

    def b(k):
        if k not in basis:
            basis[k] = DPElem.basis(k, ctx)
        return basis[k]

    seen_pairs = set()
    for k1, k2, k3 in _dp_triples(cfg, random.Random(0)):
        a, bb, c = b(k1), b(k2), b(k3)
        ab = dp_mul(a, bb)
        rep.check(dp_mul(ab, c) == dp_mul(a, dp_mul(bb, c)), {"check": "associative", "k": [k1, k2, k3]})
        if (k1, k2) in seen_pairs:
            continue
        seen_pairs.add((k1, k2))
        rep.check(ab == dp_mul(bb, a), {"check": "commutative", "k": [k1, k2]})
        rep.check(dp_embed(ab) == dp_embed(a) * dp_embed(bb), {"check": "embedding", "k": [k1, k2]})
        try:
            certify_dp(ab)
            rep.check(True, {"check": "integral", "k": [k1, k2]})
        except LocalizationError as exc:
            rep.check(False, {"check": "integral", "k": [k1, k2]}, "localised", str(exc))
    for k in indices(ctx.d, 2 * ctx.pm + 2):
        a = b(k)
        rep.check(dp_mul(one, a) == a and dp_mul(a, one) == a, {"check": "unit", "k": k})
        rep.check(dp_unembed(dp_embed(a), ctx) == a, {"check": "unembed", "k": k})
    return rep.finish()


def _comul_product(k, ctx: LevelCtx) -> TensorElem:
    """The twisted power of the diagonal xi (x) 1 + 1 (x) xi, as a ring product in P(2)."""
    d, z = ctx.d, zero_index(ctx.d)
    out = TensorElem.word([z, z], ctx)
    for i, ki in enumerate(k):
        e = unit_index(i, d)
        diag = TensorElem.word([e, z], ctx) + TensorElem.word([z, e], ctx)
        for j in range(ki):
            out = tensor_mul(out, diag + TensorElem.word([z, z], ctx, ONE - Q ** j, x=e))
    return out


def comultiplication(cfg: RunConfig) -> Report:
    rep = Report("comultiplication")
    ctx = cfg.ctx
    for k in indices(ctx.d, 2 * ctx.pm):
        c = comul(DPElem.basis(k, ctx))
        twisted = dp_unembed(twisted_power_multi(k, None, ctx), ctx)
        expect = _comul_product(k, ctx)
        got = comul(twisted)
        rep.check(got == expect, {"check": "multiplicative formula", "k": k}, expect.render(), got.render())
        rep.check(face(c, 1) == face(c, 2), {"check": "coassociative", "k": k})
        ident = TensorElem.word([k], ctx)
        rep.check(degeneracy(c, 0) == ident and degeneracy(c, 1) == ident, {"check": "counit", "k": k})
    return rep.finish()


# complexes

def d_squared(cfg: RunConfig) -> Report:
    rep = Report("d_squared")
    ctx = cfg.ctx
    top = 2 * ctx.pm + 2
    pool = indices(ctx.d, top)
    x1 = unit_index(0, ctx.d)
    for r in range(cfg.max_degree + 1):
        for ks in product(pool, repeat=r):
            for x in (zero_index(ctx.d), x1):
                t = TensorElem.word(ks, ctx, x=x)
                dd = cosimplicial_d(cosimplicial_d(t))
                rep.check(dd.is_zero(), {"complex": "cosimplicial", "word": ks, "x": x}, "0", dd.render())
        for ks in product(pool, repeat=r + 1):
            t = TensorElem.word(ks, ctx)
            dd = cosimplicial_d(cosimplicial_d(t, True), True)
            rep.check(dd.is_zero(), {"complex": "linearised", "word": ks}, "0", dd.render())
    for k in pool:
        for r in range(ctx.d + 1):
            for s in combinations(range(ctx.d), r):
                dd = derham_d(derham_d(DeRhamElem.basis(k, s, ctx)))
                rep.check(dd.is_zero(), {"complex": "de Rham", "k": k, "wedge": s}, "0", dd.render())
    for w in generator_words(top, cfg.max_degree, ctx):
        rep.check(jet_dd_check(w, ctx, cfg.xdeg_bound), {"complex": "jet", "word": w})
    return rep.finish()


def poincare(cfg: RunConfig) -> Report:
    return verify_poincare(cfg.max_index, cfg.ctx)


def stratification(cfg: RunConfig) -> Report:
    rep = Report("stratification")
    ctx = cfg.ctx
    d = ctx.d
    for l in indices(d, 6):
        for lpp in indices(d, sum(l)):
            if index_le(lpp, l) and lpp != l:
                rep.check(binomial_vanishing_check(l, lpp), {"check": "vanishing", "l": l, "l''": lpp})
            if index_le(lpp, l):
                rep.check(binomial_product_check(l, lpp), {"check": "product", "l": l, "l''": lpp})
    for k in box(ctx):
        rep.check(flip_identity_check(k, ctx), {"check": "flip", "l'": k})
        rep.check(stratification_square_check(k, ctx), {"check": "diagram", "k": k})
    for k in indices(d, ctx.pm + 1):
        rep.check(stratification_cocycle_check(k, ctx), {"check": "cocycle", "k": k})
    a, b = Poly.variable(0, 2), Poly.variable(1, 2)
    for k in range(9):
        try:
            quantum_binomial_expand(a, b, k)
            rep.check(True, {"check": "quantum binomial", "k": k})
        except AssertionError as exc:
            rep.check(False, {"check": "quantum binomial", "k": k}, "equal", str(exc))
    return rep.finish()


def basis_change(cfg: RunConfig) -> Report:
    rep = Report("basis_change")
    ctx = cfg.ctx
    for r in indices(ctx.d, 4):
        try:
            rg_basis_change(r, ctx)
            rep.check(True, {"check": "basis change", "r": r})
        except AssertionError as exc:
            rep.check(False, {"check": "basis change", "r": r}, "localised", str(exc))
    one = ctx.with_d(1)
    for n in (1, 2):
        for v in (0, 1):
            rep.check(clpin_check(n, v, one), {"check": "divisibility", "n": n, "v": v})
    return rep.finish()


def h_relations(cfg: RunConfig) -> Report:
    return verify_h_relations(cfg.ctx, xdeg_bound=cfg.xdeg_bound)


def homotopy_identity(cfg: RunConfig) -> Report:
    ctx = cfg.ctx
    return verify_homotopy_identity(2 * ctx.pm + 2, cfg.max_degree, ctx, cfg.xdeg_bound)


def h_locality(cfg: RunConfig) -> Report:
    ctx = cfg.ctx
    return verify_h_locality(2 * ctx.pm + 2, ctx, cfg.xdeg_bound)


def jet_poincare(cfg: RunConfig) -> Report:
    return verify_jet_poincare(cfg.max_index, cfg.ctx, cfg.max_degree)


def cross_level(cfg: RunConfig) -> Report:
    """Level 0 collapse of the two complexes and the q = 1 specialisation."""
    rep = Report("cross_level")
    ctx = cfg.ctx
    zero = LevelCtx(ctx.p, 0, ctx.d)
    top = 2 * zero.pm + 2
    for w in generator_words(top, cfg.max_degree, zero):
        e = JetElem.word(w[0], w[1:], zero)
        lhs = derham_reduce(jet_d(e), zero)
        rhs = derham_d(derham_reduce(e, zero), zero)
        rep.check(lhs == rhs, {"check": "jet vs de Rham", "word": w}, rhs.render(), lhs.render())
    for k in indices(ctx.d, top):
        img = derham_d(DeRhamElem.basis(k, (), zero), zero)
        want = sum(1 for v in k if v > 0)
        rep.check(len(img.terms) == want, {"check": "single term per direction", "k": k}, want, len(img.terms))
    for k in range(cfg.max_index + 1):
        for kp in range(k + 1):
            case = {"check": "q=1", "k": k, "k'": kp}
            brace1 = RatFuncQ(hl_brace(k, kp, ctx)).at(1)
            angle1 = hl_angle(k, kp, ctx).value.at(1)
            want = (brace_int(k, kp, ctx), angle_int(k, kp, ctx))
            got = (Fraction(*brace1), Fraction(*angle1))
            rep.check(got == want, case, [str(v) for v in want], [str(v) for v in got])
        if ctx.m == 0:
            for kp in range(k + 1):
                ok = hl_brace(k, kp, ctx) == q_binom_pascal(k, kp) and hl_angle(k, kp, ctx) == 1
                rep.check(ok, {"check": "level 0 collapse", "k": k, "k'": kp})
    return rep.finish()


SUITES: dict[str, Callable[[RunConfig], Report]] = {
    "pascal_factorial": pascal_factorial,
    "integrality": integrality,
    "angle_congruence": angle_congruence,
    "qint_products": qint_products,
    "dp_algebra": dp_algebra,
    "comultiplication": comultiplication,
    "d_squared": d_squared,
    "poincare": poincare,
    "stratification": stratification,
    "basis_change": basis_change,
    "h_relations": h_relations,
    "homotopy_identity": homotopy_identity,
    "h_locality": h_locality,
    "jet_poincare": jet_poincare,
    "cross_level": cross_level,
}


def run(cfg: RunConfig) -> list[Report]:
    names = cfg.suites or tuple(SUITES)
    return [SUITES[name](cfg) for name in names]
