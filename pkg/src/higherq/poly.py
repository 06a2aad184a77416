"""Sparse multivariate polynomials with coefficients in Q(q).

``XPoly`` lives in the base ring A = Q(q)[x_1..x_d]; ``FullPoly`` in
Q(q)[x_1..x_d, xi_1..xi_d], with exponent tuples laid out as
(x-exponents, xi-exponents).  Coefficients are ``RatFuncQ``; integrality
claims are checked afterwards with :func:`certify_localized`.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .coeff import (
    ONE,
    Q,
    ZERO,
    IntPolyQ,
    LevelCtx,
    LocalizationError,
    RatFuncQ,
    q_binom_pascal,
    q_int_step,
    ratfunc,
)

Exponent = tuple[int, ...]


class Poly:
    """A finitely supported map from exponent tuples to ``RatFuncQ``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, RatFuncQ] | None = None, *, _clean=False):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = dict(terms)
        else:
            self.terms = {e: ratfunc(c) for e, c in terms.items() if not ratfunc(c).is_zero()}

    def _new(self, terms, clean=True):
        out = object.__new__(type(self))
        out.nvars = self.nvars
        out.terms = terms if clean else {e: c for e, c in terms.items() if not c.is_zero()}
        return out

    @classmethod
    def constant(cls, c, nvars: int):
        return cls(nvars, {(0,) * nvars: ratfunc(c)})

    @classmethod
    def variable(cls, i: int, nvars: int, power: int = 1):
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): ONE})

    def zero(self):
        return self._new({})

    def one(self):
        return self._new({(0,) * self.nvars: ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, e: Exponent) -> RatFuncQ:
        return self.terms.get(e, ZERO)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials in different rings")
            return other
        c = ratfunc(other)
        return self._new({(0,) * self.nvars: c} if not c.is_zero() else {})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = ratfunc(c)
        if c.is_zero():
            return self.zero()
        return self._new({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exponent, RatFuncQ] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                s = out.get(e)
                out[e] = v if s is None else s + v
        return self._new(out, clean=False)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def map_coeffs(self, fn: Callable[[RatFuncQ], RatFuncQ]):
        return self._new({e: fn(c) for e, c in self.terms.items()}, clean=False)

    def substitute(self, images: Sequence["Poly"], coeff_map: Callable[[RatFuncQ], RatFuncQ] | None = None):
        """Ring map sending variable i to images[i], coefficients through coeff_map."""
        target = images[0] if images else self
        out = target.zero()
        powers: list[dict[int, Poly]] = [{0: target.one()} for _ in images]

        def power(i, n):
            cache = powers[i]
            if n not in cache:
                cache[n] = power(i, n - 1) * images[i]
            return cache[n]

        for e, c in self.terms.items():
            term = target.constant(coeff_map(c) if coeff_map else c, target.nvars)
            for i, n in enumerate(e):
                if n:
                    term = term * power(i, n)
            out = out + term
        return out

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exponent, RatFuncQ]]:
        """Graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def names(self) -> list[str]:
        return [f"v{i + 1}" for i in range(self.nvars)]

    def render(self) -> str:
        if not self.terms:
            return "0"
        names = self.names()
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            parts.append(_term_text(c, mono))
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") and not part.startswith("-(") else f" + {part}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"{type(self).__name__}({self.render()})"


def _term_text(c: RatFuncQ, mono: str) -> str:
    cs = str(c)
    if not mono:
        return cs
    if c.is_one():
        return mono
    if cs == "-1":
        return "-" + mono
    if not c.is_poly() or any(ch in cs[1:] for ch in "+-"):
        cs = f"({cs})"
    return f"{cs}*{mono}"


class XPoly(Poly):
    """Element of A = Q(q)[x_1..x_d]."""

    __slots__ = ()

    @property
    def d(self) -> int:
        return self.nvars

    def names(self):
        return [f"x{i + 1}" for i in range(self.nvars)]

    @classmethod
    def x(cls, i: int, d: int, power: int = 1) -> "XPoly":
        return cls.variable(i, d, power)

    @classmethod
    def monomial(cls, e: Exponent, c=ONE) -> "XPoly":
        return cls(len(e), {tuple(e): ratfunc(c)})


class FullPoly(Poly):
    """Element of Q(q)[x_1..x_d, xi_1..xi_d]."""

    __slots__ = ()

    @property
    def d(self) -> int:
        return self.nvars // 2

    def names(self):
        d = self.d
        return [f"x{i + 1}" for i in range(d)] + [f"xi{i + 1}" for i in range(d)]

    @classmethod
    def x(cls, i: int, d: int, power: int = 1) -> "FullPoly":
        return cls.variable(i, 2 * d, power)

    @classmethod
    def xi(cls, i: int, d: int, power: int = 1) -> "FullPoly":
        return cls.variable(d + i, 2 * d, power)

    @classmethod
    def from_x(cls, f: XPoly) -> "FullPoly":
        d = f.nvars
        return cls(2 * d, {e + (0,) * d: c for e, c in f.terms.items()}, _clean=True)

    def split(self) -> dict[Exponent, XPoly]:
        """Group by xi-exponent: {xi-exponent: x-coefficient}."""
        d = self.d
        out: dict[Exponent, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(e[d:], {})[e[:d]] = c
        return {k: XPoly(d, v, _clean=True) for k, v in out.items()}


def default_twist(i: int, d: int) -> XPoly:
    """(1 - q) x_i, the twist giving the standard twisted powers."""
    return XPoly.x(i, d).scale(ONE - Q)


def twisted_power(i: int, k: int, y: XPoly | None, ctx: LevelCtx) -> FullPoly:
    """prod_{j<k} (xi_i + (j)_q y); y defaults to (1-q) x_i."""
    d = ctx.d
    if y is None:
        y = default_twist(i, d)
    yy = FullPoly.from_x(y)
    xi = FullPoly.xi(i, d)
    out = xi.one()
    for j in range(k):
        out = out * (xi + yy.scale(q_int_step(j, 1)))
    return out


def twisted_power_multi(k: Sequence[int], ys: Sequence[XPoly] | None, ctx: LevelCtx) -> FullPoly:
    if len(k) != ctx.d or (ys is not None and len(ys) != ctx.d):
        raise ValueError("multi-index length must equal d")
    out = FullPoly.constant(1, 2 * ctx.d)
    for i, ki in enumerate(k):
        out = out * twisted_power(i, ki, None if ys is None else ys[i], ctx)
    return out


def coeff_frobenius(c: RatFuncQ, p: int) -> RatFuncQ:
    """c(q) -> c(q^p)."""
    return c.compose_power(p)


def frobenius(f: Poly, iterations: int, ctx: LevelCtx) -> Poly:
    """The Frobenius lift x -> x^p, xi -> (xi + x)^p - x^p, q -> q^p, iterated.

    Works on XPoly (x-variables only) and FullPoly.
    """
    p = ctx.p
    for _ in range(iterations):
        if isinstance(f, FullPoly):
            d = f.d
            xs = [FullPoly.x(i, d) for i in range(d)]
            images = [x ** p for x in xs]
            images += [(FullPoly.xi(i, d) + xs[i]) ** p - images[i] for i in range(d)]
        else:
            images = [type(f).variable(i, f.nvars, p) for i in range(f.nvars)]
        f = f.substitute(images, lambda c: coeff_frobenius(c, p))
    return f


def delta(f: Poly, ctx: LevelCtx) -> Poly:
    """(phi(f) - f^p) / p; integral coefficients stay integral."""
    p = ctx.p
    out = (frobenius(f, 1, ctx) - f ** p).scale(RatFuncQ(1, p))
    if all(c.is_poly() for c in f.terms.values()):
        for c in out.terms.values():
            if not c.is_poly():
                raise AssertionError(f"delta left Z[q]: coefficient {c}")
    return out


def quantum_binomial_expand(a: Poly, b: Poly, k: int) -> Poly:
    """prod_{j<k} (q^j a + b), checked against the q-binomial closed form."""
    direct = a.one()
    for j in range(k):
        direct = direct * (a.scale(Q ** j) + b)
    closed = a.zero()
    for kp in range(k + 1):
        c = (Q ** (kp * (kp - 1) // 2)) * RatFuncQ(q_binom_pascal(k, kp))
        closed = closed + (a ** kp * b ** (k - kp)).scale(c)
    if direct != closed:
        raise AssertionError(f"quantum binomial formula fails at k={k}")
    return direct


def certify_localized(f: Poly, p: int) -> None:
    """Raise LocalizationError unless every coefficient lies in Z[q]_(p,q-1)."""
    for e, c in f.terms.items():
        if c.at(1)[1] % p == 0:
            raise LocalizationError(f"coefficient {c} at {e} is not in Z[q]_({p},q-1)")


def certify_integral(f: Poly) -> None:
    for e, c in f.terms.items():
        if not c.is_poly():
            raise LocalizationError(f"coefficient {c} at {e} is not in Z[q]")


def divide_exact(f: Poly, g: IntPolyQ) -> Poly | None:
    """f / g when every coefficient of f is a Z[q]-multiple of g, else None."""
    out = {}
    for e, c in f.terms.items():
        if not c.is_poly():
            return None
        quo, rem = c.as_intpoly().divmod(g)
        if not rem.is_zero():
            return None
        out[e] = RatFuncQ(quo)
    return f._new(out)


def monomials(nvars: int, degree: int) -> Iterable[Exponent]:
    """All exponent tuples of the given total degree."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for head in range(degree, -1, -1):
        for tail in monomials(nvars - 1, degree - head):
            yield (head,) + tail
