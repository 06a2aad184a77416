"""The higher q-de Rham complex, its Poincare lemma and the box copies of A.

A ``DeRhamElem`` of degree r is a sum of  f(x) xi^{{k}} (x)' wedge_{i in S} dxi_i
with S a strictly increasing tuple of coordinates (0-based) of length r.
In the non-linearised complex only k = 0 occurs.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Mapping, Sequence

from .coeff import (
    ONE,
    Q,
    LevelCtx,
    MultiIndex,
    RatFuncQ,
    angle_value,
    index_add,
    index_le,
    index_sub,
    indices_below,
    q_binom_multi,
    q_binom_pascal,
    ratfunc,
    unit_index,
    zero_index,
)
from .dp_algebra import DPElem, TensorElem, _add_into, _flip_basis, stratification_eps, taylor
from .linalg import rank, rank_mod_p
from .poly import XPoly
from .report import Report


class DeRhamElem:
    __slots__ = ("ctx", "degree", "terms")

    def __init__(self, ctx: LevelCtx, degree: int, terms: Mapping | None = None):
        self.ctx = ctx
        self.degree = degree
        self.terms = {}
        for (e, k, s), c in (terms or {}).items():
            c = ratfunc(c)
            s = tuple(s)
            if len(s) != degree or list(s) != sorted(set(s)) or any(not 0 <= i < ctx.d for i in s):
                raise ValueError(f"wedge index {s} is not strictly increasing of length {degree}")
            if not c.is_zero():
                self.terms[(tuple(e), tuple(k), s)] = c

    @classmethod
    def _raw(cls, ctx, degree, terms):
        out = object.__new__(cls)
        out.ctx, out.degree, out.terms = ctx, degree, terms
        return out

    @classmethod
    def basis(cls, k: Sequence[int], s: Sequence[int], ctx: LevelCtx, coeff=ONE, x=None) -> "DeRhamElem":
        e = tuple(x) if x is not None else zero_index(ctx.d)
        return cls(ctx, len(s), {(e, tuple(k), tuple(s)): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if other.ctx != self.ctx or other.degree != self.degree:
            raise TypeError("degree mismatch")
        out = dict(self.terms)
        for key, c in other.terms.items():
            _add_into(out, key, c)
        return self._raw(self.ctx, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.ctx, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = ratfunc(c)
        if c.is_zero():
            return self._raw(self.ctx, self.degree, {})
        return self._raw(self.ctx, self.degree, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, DeRhamElem):
            return NotImplemented
        return (self.ctx, self.degree, self.terms) == (other.ctx, other.degree, other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (e, k, s), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i + 1}" if n == 1 else f"x{i + 1}^{n}" for i, n in enumerate(e) if n)
            word = "xi^{{" + ",".join(map(str, k)) + "}}"
            if s:
                word += " (x)' " + " ^ ".join(f"dxi{i + 1}" for i in s)
            coeff = str(c) if not mono else (mono if c.is_one() else f"({c})*{mono}")
            parts.append(f"({coeff}) * {word}")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"DeRhamElem[{self.degree}]({self.render()})"


def wedge_sort(s: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """(sign, sorted tuple) for a wedge word, or None if an index repeats."""
    s = list(s)
    if len(set(s)) != len(s):
        return None
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return sign, tuple(s)


def derham_reduce(t: TensorElem, ctx: LevelCtx | None = None, linearized: bool = True) -> DeRhamElem:
    """Quotient map from the normalised (linearised) tensor complex.

    In the linearised case the first factor of each word is the divided
    power coefficient; the remaining factors must all be nonzero.
    """
    ctx = ctx or t.ctx
    d, pm = ctx.d, ctx.pm
    z = zero_index(d)
    deg = t.degree - 1 if linearized else t.degree
    if deg < 0:
        raise ValueError("linearised input needs a coefficient factor")
    gens = {tuple(pm if j == i else 0 for j in range(d)): i for i in range(d)}
    out: dict = {}
    for (e, ks), c in t.terms.items():
        head, factors = (ks[0], ks[1:]) if linearized else (z, ks)
        if z in factors:
            raise ValueError(f"word {ks} is not in the normalised complex")
        if any(f not in gens for f in factors):
            continue
        ws = wedge_sort([gens[f] for f in factors])
        if ws is None:
            continue
        sign, s = ws
        _add_into(out, (e, head, s), c if sign > 0 else -c)
    return DeRhamElem._raw(ctx, deg, out)


def derham_d(w: DeRhamElem, ctx: LevelCtx | None = None) -> DeRhamElem:
    """d(xi^{{k}} (x)' omega) = sum_{k_i >= p^m} <k_i\\p^m> xi^{{k - p^m 1_i}} (x)' dxi_i ^ omega."""
    ctx = ctx or w.ctx
    pm = ctx.pm
    out: dict = {}
    for (e, k, s), c in w.terms.items():
        for i in range(ctx.d):
            if k[i] < pm or i in s:
                continue
            sign, s2 = wedge_sort((i,) + s)
            k2 = tuple(v - pm if j == i else v for j, v in enumerate(k))
            coeff = c * angle_value((k[i],), (pm,), ctx)
            _add_into(out, (e, k2, s2), coeff if sign > 0 else -coeff)
    return DeRhamElem._raw(ctx, w.degree + 1, out)


# the box copies of A

def box(ctx: LevelCtx) -> list[MultiIndex]:
    return [tuple(k) for k in product(range(ctx.pm), repeat=ctx.d)]


class CopiesElem:
    """Element of the free A-module on e_k, k in the box {0 <= k_i < p^m}."""

    __slots__ = ("ctx", "parts")

    def __init__(self, ctx: LevelCtx, parts: Mapping[Sequence[int], XPoly] | None = None):
        self.ctx = ctx
        self.parts = {}
        for k, f in (parts or {}).items():
            k = tuple(k)
            if len(k) != ctx.d or any(not 0 <= v < ctx.pm for v in k):
                raise ValueError(f"index {k} is outside the box")
            if not f.is_zero():
                self.parts[k] = f

    @classmethod
    def e(cls, k: Sequence[int], ctx: LevelCtx) -> "CopiesElem":
        return cls(ctx, {tuple(k): XPoly.constant(1, ctx.d)})

    def __add__(self, other):
        parts = dict(self.parts)
        for k, f in other.parts.items():
            parts[k] = parts[k] + f if k in parts else f
        return CopiesElem(self.ctx, {k: f for k, f in parts.items() if not f.is_zero()})

    def times(self, f: XPoly) -> "CopiesElem":
        return CopiesElem(self.ctx, {k: g * f for k, g in self.parts.items()})

    def __neg__(self):
        return self.times(XPoly.constant(-1, self.ctx.d))

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, CopiesElem) and self.ctx == other.ctx and self.parts == other.parts

    def __hash__(self):
        return hash(frozenset(self.parts.items()))

    def __repr__(self):
        inner = " + ".join(f"({f})*e{list(k)}" for k, f in sorted(self.parts.items())) or "0"
        return f"CopiesElem({inner})"


@lru_cache(maxsize=None)
def minus_x_power(k: MultiIndex, d: int) -> XPoly:
    """(-x)^{(k)_q} = prod_i prod_{j<k_i} (-q^j x_i)."""
    c = ONE
    for ki in k:
        for j in range(ki):
            c = c * (-(Q ** j))
    return XPoly.monomial(tuple(k), c)


def _beta_basis(k: MultiIndex, ctx: LevelCtx) -> CopiesElem:
    parts = {}
    for kp in indices_below(k):
        parts[index_sub(k, kp)] = minus_x_power(kp, ctx.d).scale(RatFuncQ(q_binom_multi(k, kp)))
    return CopiesElem(ctx, parts)


def _apply(images, e: CopiesElem) -> CopiesElem:
    out = CopiesElem(e.ctx)
    for k, f in e.parts.items():
        out = out + images(k, e.ctx).times(f)
    return out


def beta(e: CopiesElem, ctx: LevelCtx | None = None) -> CopiesElem:
    return _apply(_beta_basis, e)


@lru_cache(maxsize=None)
def _beta_inverse_basis(k: MultiIndex, ctx: LevelCtx) -> CopiesElem:
    # beta is unitriangular: e_k = beta(e_k) - sum_{k' > 0} (k\k')(-x)^{(k')} e_{k-k'}
    out = CopiesElem.e(k, ctx)
    for kp in indices_below(k):
        if sum(kp) == 0:
            continue
        coeff = minus_x_power(kp, ctx.d).scale(RatFuncQ(q_binom_multi(k, kp)))
        out = out - _beta_inverse_basis(index_sub(k, kp), ctx).times(coeff)
    return out


def beta_inverse(e: CopiesElem, ctx: LevelCtx | None = None) -> CopiesElem:
    return _apply(_beta_inverse_basis, e)


def iota_prime(e: CopiesElem, ctx: LevelCtx | None = None) -> DeRhamElem:
    """e_k -> xi^{{k}} in degree 0 of the linearised complex."""
    ctx = ctx or e.ctx
    out: dict = {}
    for k, f in e.parts.items():
        for x, c in f.terms.items():
            _add_into(out, (x, k, ()), c)
    return DeRhamElem._raw(ctx, 0, out)


def iota(e: CopiesElem, ctx: LevelCtx | None = None) -> DeRhamElem:
    return iota_prime(beta_inverse(e, ctx), ctx)


# Poincare lemma

def _weights(n: int, d: int):
    for total in range(n + 1):
        for w in product(range(total + 1), repeat=d):
            if sum(w) == total:
                yield w


def _slice_basis(w: MultiIndex, r: int, ctx: LevelCtx) -> list[tuple]:
    out = []
    for s in combinations(range(ctx.d), r):
        k = tuple(v - (ctx.pm if i in s else 0) for i, v in enumerate(w))
        if min(k, default=0) >= 0:
            out.append((k, s))
    return out


def verify_poincare(bound: int, ctx: LevelCtx) -> Report:
    """Exactness of  0 -> (+)_box A e_k -> L-de Rham(0) -> ... -> L-de Rham(d) -> 0.

    The differential preserves the weight k + p^m 1_S and is A-linear with
    constant matrix entries, so each weight slice |w| <= bound is a finite
    complex over Q(q).  Ranks are also taken after reduction mod (p, q-1):
    equal ranks over both fields make the localised complex split exact.
    """
    rep = Report("poincare")
    d, p, pm = ctx.d, ctx.p, ctx.pm
    z = zero_index(d)
    for w in _weights(bound, d):
        bases = [_slice_basis(w, r, ctx) for r in range(d + 1)]
        ranks, ranks_p = [], []
        for r in range(d):
            rows = []
            for k, s in bases[r]:
                img = derham_d(DeRhamElem.basis(k, s, ctx), ctx)
                rows.append({(k2, s2): c for (_, k2, s2), c in img.terms.items()})
                dd = derham_d(img, ctx)
                rep.check(dd.is_zero(), {"weight": w, "basis": [k, s], "check": "d∘d"}, "0", dd.render())
            ranks.append(rank(rows))
            ranks_p.append(rank_mod_p(rows, p))
        in_box = all(v < pm for v in w)
        for r in range(d + 1):
            dim = len(bases[r])
            out_rank = ranks[r] if r < d else 0
            in_rank = ranks[r - 1] if r > 0 else 0
            h = dim - out_rank - in_rank
            expected = 1 if (r == 0 and in_box) else 0
            rep.check(h == expected, {"weight": w, "degree": r, "check": "homology"}, expected, h)
        rep.check(ranks == ranks_p, {"weight": w, "check": "ranks mod (p,q-1)"}, ranks, ranks_p)
    for k in box(ctx):
        e = CopiesElem.e(k, ctx)
        rep.check(beta_inverse(beta(e)) == e and beta(beta_inverse(e)) == e,
                  {"box": k, "check": "beta round trip"})
        img = iota(e, ctx)
        rep.check(derham_d(img, ctx).is_zero(), {"box": k, "check": "d∘iota"}, "0", derham_d(img, ctx).render())
        # iota(e_k) = xi^{{k}} + lower box terms: the images span ker d^0 in A-rank
        top = img.terms.get((z, k, ()))
        rep.check(top is not None and top.is_one() and all(index_le(k2, k) for (_, k2, _) in img.terms),
                  {"box": k, "check": "iota unitriangular"})
    return rep.finish()


# compatibility of iota with the stratifications

def _plain_copies(e_index: MultiIndex, left: XPoly, right: DPElem) -> dict:
    out: dict = {}
    for x1, c1 in left.terms.items():
        for (x2, j), c2 in right.terms.items():
            _add_into(out, (index_add(x1, x2), (e_index, j)), c1 * c2)
    return out


def stratification_square_check(k: Sequence[int], ctx: LevelCtx) -> bool:
    """The two paths of the square  iota vs stratifications  agree on 1 (x)' beta(e_k).

    Path one: apply iota to the coefficient and stratify with the divided
    power algebra's own stratification.  Path two: stratify F_A, where
    y (x)' a e_k -> e_k (x) taylor(a) y, then apply iota (x) 1.
    """
    k = tuple(k)
    d = ctx.d
    via_iota = stratification_eps(TensorElem.word([zero_index(d), k], ctx), ctx)
    path2: dict = {}
    for j, f in _beta_basis(k, ctx).parts.items():
        image = iota(CopiesElem.e(j, ctx), ctx)
        right = taylor(f, ctx)
        for (x1, kk, _), c1 in image.terms.items():
            prod = {}
            for (x2, j2), c2 in right.terms.items():
                _add_into(prod, (index_add(x1, x2), (kk, j2)), c1 * c2)
            for key, c in prod.items():
                _add_into(path2, key, c)
    return via_iota.terms == path2


def flip_identity_check(lp: Sequence[int], ctx: LevelCtx) -> bool:
    """tau(xi^{{l'}}) = sum_{l''<=l'} (l'\\l'')_q taylor((-x)^{(l'')}) x^{l'-l''} for l' in the box."""
    lp = tuple(lp)
    if any(v >= ctx.pm for v in lp):
        raise ValueError("index must lie in the box")
    rhs = DPElem(ctx)
    for lpp in indices_below(lp):
        term = taylor(minus_x_power(lpp, ctx.d), ctx).times_x(index_sub(lp, lpp))
        rhs = rhs + term.scale(RatFuncQ(q_binom_multi(lp, lpp)))
    return _flip_basis(lp, ctx) == rhs


def _interval(lo: MultiIndex, hi: MultiIndex):
    return (tuple(v) for v in product(*(range(a, b + 1) for a, b in zip(lo, hi))))


def binomial_vanishing_check(l: Sequence[int], lpp: Sequence[int]) -> bool:
    """sum_{l''<=l'<=l} (l\\l')(l'\\l'')(-x)^{(l-l')} x^{l'-l''} vanishes when l'' < l."""
    l, lpp = tuple(l), tuple(lpp)
    d = len(l)
    total = XPoly(d)
    for lp in _interval(lpp, l):
        c = RatFuncQ(q_binom_multi(l, lp)) * RatFuncQ(q_binom_multi(lp, lpp))
        total = total + (minus_x_power(index_sub(l, lp), d) * XPoly.monomial(index_sub(lp, lpp))).scale(c)
    return total.is_zero()


def binomial_product_check(l: Sequence[int], lpp: Sequence[int]) -> bool:
    """prod_i prod_{j < l_i - l''_i} (x_i - q^j x_i) equals its q-binomial expansion."""
    l, lpp = tuple(l), tuple(lpp)
    d = len(l)
    lhs = XPoly.constant(1, d)
    for i, (a, b) in enumerate(zip(l, lpp)):
        for j in range(a - b):
            lhs = lhs * XPoly.x(i, d).scale(ONE - Q ** j)
    rhs = XPoly(d)
    top = index_sub(l, lpp)
    for lp in _interval(lpp, l):
        c = RatFuncQ(q_binom_multi(top, index_sub(l, lp)))
        rhs = rhs + (minus_x_power(index_sub(l, lp), d) * XPoly.monomial(index_sub(lp, lpp))).scale(c)
    return lhs == rhs
