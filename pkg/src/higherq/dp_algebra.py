"""The level-m divided power polynomial algebra and its tensor powers.

A ``DPElem`` is a finite sum  sum f_k(x) xi^{{k}}  over multi-indices k,
stored flat as {(x-exponent, k): coefficient}.  A ``TensorElem`` of degree
r is a finite sum  f(x) xi^{{k_1}} (x)' ... (x)' xi^{{k_r}}  with every
x-coefficient moved to the far left; non-normalised words (coefficients
sitting on inner factors) are brought to this form by :func:`tensor_word`,
which slides a coefficient g across a factor as the Taylor image of g.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .coeff import (
    ONE,
    Q,
    ZERO,
    LevelCtx,
    LocalizationError,
    MultiIndex,
    RatFuncQ,
    angle_value,
    hl_brace,
    index_add,
    index_sub,
    indices_below,
    q_binom_pascal,
    q_factorial,
    q_int_step,
    ratfunc,
    unit_index,
    zero_index,
)
from .poly import (
    FullPoly,
    XPoly,
    certify_localized,
    divide_exact,
    frobenius,
    twisted_power,
    twisted_power_multi,
)

Key = tuple[tuple[int, ...], tuple]


def _add_into(out: dict, key, c: RatFuncQ) -> None:
    s = out.get(key)
    if s is None:
        out[key] = c
    else:
        s = s + c
        if s.is_zero():
            del out[key]
        else:
            out[key] = s


class _Linear:
    """Shared linear-combination plumbing; ``terms`` maps keys to RatFuncQ."""

    __slots__ = ("ctx", "terms")

    def _new(self, terms):
        out = object.__new__(type(self))
        out.ctx = self.ctx
        out.terms = terms
        self._copy_extra(out)
        return out

    def _copy_extra(self, out) -> None:
        pass

    def zero(self):
        return self._new({})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = ratfunc(c)
        if c.is_zero():
            return self.zero()
        return self._new({k: v * c for k, v in self.terms.items()})

    def times_x(self, e: Sequence[int]):
        """Multiply by the monomial x^e of the base ring (left structure)."""
        e = tuple(e)
        return self._new({(index_add(xe, e), k): c for (xe, k), c in self.terms.items()})

    def _check(self, other) -> None:
        if type(other) is not type(self) or other.ctx != self.ctx:
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


class DPElem(_Linear):
    """Element of the level-m divided power algebra A<xi>."""

    __slots__ = ()

    def __init__(self, ctx: LevelCtx, terms: Mapping[Key, RatFuncQ] | None = None):
        self.ctx = ctx
        self.terms = {}
        for key, c in (terms or {}).items():
            c = ratfunc(c)
            if not c.is_zero():
                self.terms[(tuple(key[0]), tuple(key[1]))] = c

    @classmethod
    def basis(cls, k: Sequence[int], ctx: LevelCtx, coeff=ONE) -> "DPElem":
        return cls(ctx, {(zero_index(ctx.d), tuple(k)): coeff})

    @classmethod
    def from_x(cls, f: XPoly, ctx: LevelCtx) -> "DPElem":
        z = zero_index(ctx.d)
        return cls(ctx, {(e, z): c for e, c in f.terms.items()})

    @classmethod
    def one(cls, ctx: LevelCtx) -> "DPElem":
        return cls.basis(zero_index(ctx.d), ctx)

    def by_index(self) -> dict[MultiIndex, XPoly]:
        """{k: x-coefficient of xi^{{k}}}."""
        out: dict = {}
        for (e, k), c in self.terms.items():
            out.setdefault(k, {})[e] = c
        return {k: XPoly(self.ctx.d, v, _clean=True) for k, v in out.items()}

    def coefficient(self, k: Sequence[int]) -> XPoly:
        return self.by_index().get(tuple(k), XPoly(self.ctx.d))

    def augmentation(self) -> XPoly:
        return self.coefficient(zero_index(self.ctx.d))

    def __mul__(self, other):
        if isinstance(other, DPElem):
            return dp_mul(self, other, self.ctx)
        return self.scale(other)

    __rmul__ = __mul__

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, f in sorted(self.by_index().items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
            parts.append(f"({f.render()}) * xi^{{{{{','.join(map(str, k))}}}}}")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"DPElem({self.render()})"


class TensorElem(_Linear):
    """Element of the r-fold tensor power P(r) of A<xi> under (x)'.

    Keys are (x-exponent, (k_1, ..., k_r)).  With ``plain=True`` the words are
    read in the ordinary tensor product over A instead, where coefficients
    pass freely between factors; only the stratification map produces these.
    """

    __slots__ = ("degree", "plain")

    def __init__(self, ctx: LevelCtx, degree: int, terms: Mapping[Key, RatFuncQ] | None = None,
                 plain: bool = False):
        self.ctx = ctx
        self.degree = degree
        self.plain = plain
        self.terms = {}
        for (e, ks), c in (terms or {}).items():
            c = ratfunc(c)
            if c.is_zero():
                continue
            ks = tuple(tuple(k) for k in ks)
            if len(ks) != degree:
                raise ValueError(f"word {ks} does not have degree {degree}")
            self.terms[(tuple(e), ks)] = c

    def _copy_extra(self, out) -> None:
        out.degree = self.degree
        out.plain = self.plain

    def _check(self, other) -> None:
        super()._check(other)
        if other.degree != self.degree or other.plain != self.plain:
            raise TypeError("tensor degree or type mismatch")

    @classmethod
    def word(cls, ks: Sequence[Sequence[int]], ctx: LevelCtx, coeff=ONE, x: Sequence[int] | None = None):
        e = tuple(x) if x is not None else zero_index(ctx.d)
        return cls(ctx, len(ks), {(e, tuple(tuple(k) for k in ks)): coeff})

    @classmethod
    def scalar(cls, f: XPoly, ctx: LevelCtx) -> "TensorElem":
        return cls(ctx, 0, {(e, ()): c for e, c in f.terms.items()})

    def words(self) -> dict[tuple, XPoly]:
        out: dict = {}
        for (e, ks), c in self.terms.items():
            out.setdefault(ks, {})[e] = c
        return {ks: XPoly(self.ctx.d, v, _clean=True) for ks, v in out.items()}

    def is_normalized(self) -> bool:
        z = zero_index(self.ctx.d)
        return all(z not in ks for (_, ks) in self.terms)

    def __mul__(self, other):
        if isinstance(other, TensorElem):
            return tensor_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def render(self) -> str:
        if not self.terms:
            return "0"
        sep = " (x) " if self.plain else " (x)' "
        parts = []
        for ks, f in sorted(self.words().items(), reverse=True):
            w = sep.join("xi^{{" + ",".join(map(str, k)) + "}}" for k in ks) or "1"
            parts.append(f"({f.render()}) * {w}")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"TensorElem[{self.degree}]({self.render()})"


# products

@lru_cache(maxsize=None)
def _basis_mul_1(k: int, kp: int, pm: int, p: int, m: int) -> tuple[tuple[int, int, RatFuncQ], ...]:
    """One-variable rule: xi^{{k}} xi^{{k'}} = sum_j c_j x^j xi^{{k+k'-j}}."""
    ctx = LevelCtx(p, m)
    out = []
    for j in range(min(k, kp) + 1):
        num = RatFuncQ(q_factorial(j)) / RatFuncQ(q_factorial(j // pm, pm))
        c = (num * Q ** (j * (j - 1) // 2) * RatFuncQ(hl_brace(k + kp - j, k, ctx))
             * RatFuncQ(q_binom_pascal(k, j)) * angle_value((kp,), (j,), ctx) * (Q - 1) ** j)
        if not c.is_zero():
            out.append((j, k + kp - j, c))
    return tuple(out)


@lru_cache(maxsize=None)
def basis_mul(k: MultiIndex, kp: MultiIndex, ctx: LevelCtx) -> tuple[tuple[MultiIndex, MultiIndex, RatFuncQ], ...]:
    """xi^{{k}} xi^{{k'}} as ((x-exponent, index, coefficient), ...)."""
    per = [_basis_mul_1(a, b, ctx.pm, ctx.p, ctx.m) for a, b in zip(k, kp)]
    out = []
    for combo in product(*per):
        c = ONE
        for t in combo:
            c = c * t[2]
        out.append((tuple(t[0] for t in combo), tuple(t[1] for t in combo), c))
    return tuple(out)


def dp_mul(a: DPElem, b: DPElem, ctx: LevelCtx | None = None) -> DPElem:
    ctx = ctx or a.ctx
    out: dict = {}
    for (e1, k1), c1 in a.terms.items():
        for (e2, k2), c2 in b.terms.items():
            c12 = c1 * c2
            e12 = index_add(e1, e2)
            for j, k, c in basis_mul(k1, k2, ctx):
                _add_into(out, (index_add(e12, j), k), c12 * c)
    return a._new(out)


def dp_pow(a: DPElem, n: int) -> DPElem:
    out = DPElem.one(a.ctx)
    for _ in range(n):
        out = out * a
    return out


# embedding into Q(q)[x, xi]

@lru_cache(maxsize=None)
def _normalizer(k: MultiIndex, ctx: LevelCtx) -> RatFuncQ:
    """prod_i (floor(k_i/p^m))_{q^{p^m}}!."""
    out = ONE
    for ki in k:
        out = out * RatFuncQ(q_factorial(ki // ctx.pm, ctx.pm))
    return out


@lru_cache(maxsize=None)
def embed_basis(k: MultiIndex, ctx: LevelCtx) -> FullPoly:
    return twisted_power_multi(k, None, ctx).scale(_normalizer(k, ctx).inverse())


def dp_embed(a: DPElem, ctx: LevelCtx | None = None) -> FullPoly:
    ctx = ctx or a.ctx
    d = ctx.d
    out = FullPoly(2 * d)
    for k, f in a.by_index().items():
        out = out + FullPoly.from_x(f) * embed_basis(k, ctx)
    return out


def dp_unembed(f: FullPoly, ctx: LevelCtx) -> DPElem:
    """Invert the embedding by peeling off the top xi-degree term repeatedly."""
    d = ctx.d
    rest = dict(f.terms)
    out: dict = {}
    while rest:
        e = max(rest, key=lambda t: (sum(t[d:]), t[d:], t[:d]))
        c = rest[e]
        xe, k = e[:d], e[d:]
        coeff = c * _normalizer(k, ctx)
        _add_into(out, (xe, k), coeff)
        for e2, c2 in embed_basis(k, ctx).terms.items():
            key = tuple(a + b for a, b in zip(e2, xe + (0,) * d))
            _add_into(rest, key, -coeff * c2)
    return DPElem(ctx, out)


# Taylor map, flip, Frobenius

@lru_cache(maxsize=None)
def _taylor_monomial(e: MultiIndex, ctx: LevelCtx) -> DPElem:
    d = ctx.d
    if sum(e) == 0:
        return DPElem.one(ctx)
    i = max(j for j in range(d) if e[j])
    lower = tuple(v - 1 if j == i else v for j, v in enumerate(e))
    step = DPElem(ctx, {(unit_index(i, d), zero_index(d)): ONE, (zero_index(d), unit_index(i, d)): ONE})
    return dp_mul(_taylor_monomial(lower, ctx), step, ctx)


def taylor(f: XPoly, ctx: LevelCtx) -> DPElem:
    """The level-m q-Taylor map: the ring map x_i -> x_i + xi^{{1_i}}."""
    out = DPElem(ctx)
    for e, c in f.terms.items():
        out = out + _taylor_monomial(tuple(e), ctx).scale(c)
    return out


def _flip_images(d: int) -> list[FullPoly]:
    xs = [FullPoly.x(i, d) + FullPoly.xi(i, d) for i in range(d)]
    return xs + [-FullPoly.xi(i, d) for i in range(d)]


@lru_cache(maxsize=None)
def _flip_basis(k: MultiIndex, ctx: LevelCtx) -> DPElem:
    return dp_unembed(embed_basis(k, ctx).substitute(_flip_images(ctx.d)), ctx)


def flip(a: DPElem, ctx: LevelCtx | None = None) -> DPElem:
    """The flip involution: f -> taylor(f) on A, xi -> -xi."""
    ctx = ctx or a.ctx
    out = DPElem(ctx)
    for k, f in a.by_index().items():
        out = out + taylor(f, ctx) * _flip_basis(k, ctx)
    return out


def certify_dp(a: DPElem) -> DPElem:
    p = a.ctx.p
    for key, c in a.terms.items():
        if c.at(1)[1] % p == 0:
            raise LocalizationError(f"coefficient {c} of {key} is not in Z[q]_({p},q-1)")
    return a


def dp_frobenius(a: DPElem, ctx: LevelCtx | None = None) -> DPElem:
    ctx = ctx or a.ctx
    out = dp_unembed(frobenius(dp_embed(a, ctx), 1, ctx), ctx)
    try:
        return certify_dp(out)
    except LocalizationError as exc:
        raise AssertionError("Frobenius left the divided power algebra") from exc


# comultiplication and the cosimplicial structure

@lru_cache(maxsize=None)
def comul_basis(k: MultiIndex, ctx: LevelCtx) -> tuple[tuple[MultiIndex, MultiIndex, RatFuncQ], ...]:
    return tuple((kp, index_sub(k, kp), angle_value(k, kp, ctx)) for kp in indices_below(k))


def comul(a: DPElem, ctx: LevelCtx | None = None) -> TensorElem:
    """xi^{{k}} -> sum <k\\k'> xi^{{k'}} (x)' xi^{{k-k'}}, A-linear on the left."""
    ctx = ctx or a.ctx
    out: dict = {}
    for (e, k), c in a.terms.items():
        for k1, k2, v in comul_basis(k, ctx):
            _add_into(out, (e, (k1, k2)), c * v)
    return TensorElem(ctx, 2, out)


@lru_cache(maxsize=None)
def iterated_comul_basis(k: MultiIndex, n: int, ctx: LevelCtx) -> tuple[tuple[tuple, RatFuncQ], ...]:
    """xi^{{k}} spread over n factors: ((k_1..k_n), coefficient) pairs."""
    if n == 1:
        return (((k,), ONE),)
    out = []
    for k1, rest, v in comul_basis(k, ctx):
        for ks, w in iterated_comul_basis(rest, n - 1, ctx):
            out.append(((k1,) + ks, v * w))
    return tuple(out)


def tensor_word(left: XPoly | None, factors: Sequence[DPElem], ctx: LevelCtx) -> TensorElem:
    """Normal form of  left * y_1 (x)' y_2 (x)' ... (x)' y_n.

    Coefficients are moved leftwards with  y (x)' g z = y*taylor(g) (x)' z.
    """
    d = ctx.d
    n = len(factors)
    if n == 0:
        return TensorElem.scalar(left if left is not None else XPoly.constant(1, d), ctx)
    # pending: suffix of clean indices -> DPElem still carrying coefficients
    pending: dict[tuple, DPElem] = {(): factors[-1]}
    for j in range(n - 2, -1, -1):
        nxt: dict[tuple, DPElem] = {}
        for suffix, y in pending.items():
            for k, g in y.by_index().items():
                moved = factors[j] * _slide(g, ctx)
                key = (k,) + suffix
                nxt[key] = nxt[key] + moved if key in nxt else moved
        pending = nxt
    out: dict = {}
    lterms = left.terms if left is not None else {zero_index(d): ONE}
    for suffix, y in pending.items():
        for (e, k), c in y.terms.items():
            for le, lc in lterms.items():
                _add_into(out, (index_add(e, le), (k,) + suffix), c * lc)
    return TensorElem(ctx, n, out)


def _slide(g: XPoly, ctx: LevelCtx) -> DPElem:
    if all(sum(e) == 0 for e in g.terms):
        return DPElem.one(ctx).scale(g.coeff(zero_index(ctx.d)))
    return taylor(g, ctx)


def tensor_mul(a: TensorElem, b: TensorElem) -> TensorElem:
    """Ring product of P(r): factorwise products, then normal form."""
    if a.degree != b.degree:
        raise ValueError("ring product needs equal degrees")
    ctx = a.ctx
    out = TensorElem(ctx, a.degree)
    for (e1, ks1), c1 in a.terms.items():
        for (e2, ks2), c2 in b.terms.items():
            factors = [DPElem.basis(k1, ctx) * DPElem.basis(k2, ctx) for k1, k2 in zip(ks1, ks2)]
            left = XPoly.monomial(index_add(e1, e2), c1 * c2)
            out = out + tensor_word(left, factors, ctx)
    return out


def face(t: TensorElem, i: int, ctx: LevelCtx | None = None) -> TensorElem:
    """Coface delta^r_i : P(r) -> P(r+1)."""
    ctx = ctx or t.ctx
    r = t.degree
    if not 0 <= i <= r + 1:
        raise ValueError(f"face index {i} out of range for degree {r}")
    z = zero_index(ctx.d)
    if i == 0:
        out = TensorElem(ctx, r + 1)
        for ks, f in t.words().items():
            factors = [taylor(f, ctx)] + [DPElem.basis(k, ctx) for k in ks]
            out = out + tensor_word(None, factors, ctx)
        return out
    if i == r + 1:
        return TensorElem(ctx, r + 1, {(e, ks + (z,)): c for (e, ks), c in t.terms.items()})
    out: dict = {}
    for (e, ks), c in t.terms.items():
        for k1, k2, v in comul_basis(ks[i - 1], ctx):
            _add_into(out, (e, ks[:i - 1] + (k1, k2) + ks[i:]), c * v)
    return TensorElem(ctx, r + 1, out)


def degeneracy(t: TensorElem, i: int, ctx: LevelCtx | None = None) -> TensorElem:
    """Codegeneracy sigma^r_i : P(r) -> P(r-1).

    Multiplying tensor positions i and i+1 of A^{(x)(r+1)} augments the
    (i+1)-th divided power factor.
    """
    ctx = ctx or t.ctx
    r = t.degree
    if not 0 <= i <= r - 1:
        raise ValueError(f"degeneracy index {i} out of range for degree {r}")
    z = zero_index(ctx.d)
    out = {(e, ks[:i] + ks[i + 1:]): c for (e, ks), c in t.terms.items() if ks[i] == z}
    return TensorElem(ctx, r - 1, out)


def cosimplicial_d(t: TensorElem, linearized: bool = False, ctx: LevelCtx | None = None) -> TensorElem:
    """Alternating sum of cofaces; the linearised variant skips delta_0.

    In the linearised complex an element of degree r is a TensorElem of
    degree r+1 whose first factor is the A<xi>-coefficient.
    """
    ctx = ctx or t.ctx
    n = t.degree
    out = TensorElem(ctx, n + 1)
    if linearized:
        for i in range(1, n + 2):
            term = face(t, i, ctx)
            out = out + (term if i % 2 == 1 else -term)
    else:
        for i in range(n + 2):
            term = face(t, i, ctx)
            out = out + (term if i % 2 == 0 else -term)
    return out


# stratification

def stratification_eps(t: TensorElem, ctx: LevelCtx | None = None) -> TensorElem:
    """The stratification  1 (x)' xi^{{k}} -> sum <k\\k'> xi^{{k'}} (x) tau(xi^{{k-k'}}).

    Extended multiplicatively with  y (x)' 1 -> y (x) 1.  The input is a
    degree-2 tensor; the output is a plain tensor over A, where
    x-coefficients are shared between the two factors.
    """
    ctx = ctx or t.ctx
    if t.degree != 2:
        raise ValueError("stratification acts on degree-2 tensors")
    out: dict = {}
    for (e, (y, k)), c in t.terms.items():
        for k1, k2, v in comul_basis(k, ctx):
            left = DPElem(ctx, {(e, y): c * v}) * DPElem.basis(k1, ctx)
            right = _flip_basis(k2, ctx)
            for (e1, j1), c1 in left.terms.items():
                for (e2, j2), c2 in right.terms.items():
                    _add_into(out, (index_add(e1, e2), (j1, j2)), c1 * c2)
    return TensorElem(ctx, 2, out, plain=True)


# the basis change and its divisibility claim

def frobenius_power_xi(i: int, ctx: LevelCtx) -> FullPoly:
    """phi^m(xi_i) = (xi_i + x_i)^{p^m} - x_i^{p^m}."""
    d = ctx.d
    x, xi = FullPoly.x(i, d), FullPoly.xi(i, d)
    return (xi + x) ** ctx.pm - x ** ctx.pm


def rg_basis_change(r: Sequence[int], ctx: LevelCtx) -> DPElem:
    """prod_i (phi^m xi_i)^{(r_i)} / (r_i)_{q^{p^m}}! expressed in the xi^{{k}} basis.

    The twisted power is taken at q^{p^m} with twist (1 - q^{p^m}) x_i^{p^m}.
    All coefficients must land in Z[q]_(p, q-1).
    """
    d, pm = ctx.d, ctx.pm
    f = FullPoly.constant(1, 2 * d)
    for i, ri in enumerate(r):
        base = frobenius_power_xi(i, ctx)
        xpm = FullPoly.x(i, d, pm)
        for j in range(ri):
            f = f * (base + xpm.scale(ONE - Q ** (j * pm)))
        f = f.scale(RatFuncQ(q_factorial(ri, pm)).inverse())
    out = dp_unembed(f, ctx)
    try:
        return certify_dp(out)
    except LocalizationError as exc:
        raise AssertionError(f"basis change for r={tuple(r)} is not integral") from exc


def clpin_check(n: int, v: int, ctx: LevelCtx) -> bool:
    """Divisibility of  prod_u (phi^m xi + (1 - q^{u p^m + v p^{m+n}}) x^{p^m}) - xi^{(p^{m+n})_q}."""
    if ctx.d != 1:
        raise ValueError("clpin_check is a one-variable statement")
    if n < 1:
        raise ValueError("n must be positive")
    p, m, pm = ctx.p, ctx.m, ctx.pm
    base = frobenius_power_xi(0, ctx)
    xpm = FullPoly.x(0, 1, pm)
    lhs = FullPoly.constant(1, 2)
    for u in range(p ** n):
        lhs = lhs * (base + xpm.scale(ONE - Q ** (u * pm + v * p ** (m + n))))
    diff = lhs - twisted_power(0, p ** (m + n), None, ctx)
    return divide_exact(diff, q_int_step(p, p ** (m + n - 1))) is not None


def _plain_prefix(first: DPElem, rest: TensorElem) -> dict:
    """first (x) rest for a DPElem and a normalised tensor, sharing x-coefficients."""
    out: dict = {}
    for (e1, k1), c1 in first.terms.items():
        for (e2, ks), c2 in rest.terms.items():
            _add_into(out, (index_add(e1, e2), (k1,) + ks), c1 * c2)
    return out


def stratification_cocycle_check(k: Sequence[int], ctx: LevelCtx) -> bool:
    """Cocycle condition of the stratification, evaluated on 1 (x)' xi^{{k}}.

    Both sides are computed in A<xi> (x) (A<xi> (x)' A<xi>).
    """
    k = tuple(k)
    lhs: dict = {}
    rhs: dict = {}
    for k1, k2, v in comul_basis(k, ctx):
        tail = _flip_basis(k2, ctx)
        for j1, j2, w in comul_basis(k1, ctx):
            inner = tensor_word(None, [_flip_basis(j2, ctx), tail], ctx)
            for key, c in _plain_prefix(DPElem.basis(j1, ctx, v * w), inner).items():
                _add_into(lhs, key, c)
        for key, c in _plain_prefix(DPElem.basis(k1, ctx, v), comul(tail, ctx)).items():
            _add_into(rhs, key, c)
    return lhs == rhs
