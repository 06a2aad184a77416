"""Exact q-integers, q-binomials and their level-m refinements.

Everything here lives in Z[q], its fraction field Q(q), or the local ring
Z[q]_(p, q-1).  Integer polynomials are backed by FLINT; the classes below
add the normalisation rules that make equality a syntactic check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import flint

MultiIndex = tuple[int, ...]


class IntPolyQ:
    """Integer polynomial in q.  Immutable."""

    __slots__ = ("_f", "_hash")

    def __init__(self, coeffs: Union[Iterable[int], flint.fmpz_poly, int] = ()):
        if isinstance(coeffs, flint.fmpz_poly):
            self._f = coeffs
        elif isinstance(coeffs, int):
            self._f = flint.fmpz_poly([coeffs])
        else:
            self._f = flint.fmpz_poly([int(c) for c in coeffs])
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "IntPolyQ":
        return cls([0] * exp + [coeff])

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self._f.coeffs())

    @property
    def flint(self) -> flint.fmpz_poly:
        return self._f

    def degree(self) -> int:
        return self._f.degree()

    def is_zero(self) -> bool:
        return self._f.is_zero()

    def is_one(self) -> bool:
        return self._f.is_one()

    def __call__(self, value: int) -> int:
        return int(self._f(value))

    def content(self) -> int:
        return int(self._f.content())

    def leading(self) -> int:
        if self._f.is_zero():
            return 0
        return int(self._f[self._f.degree()])

    def compose_power(self, e: int) -> "IntPolyQ":
        """c(q) -> c(q^e)."""
        if e == 1:
            return self
        out = [0] * (max(self.degree(), 0) * e + 1)
        for i, c in enumerate(self.coeffs):
            out[i * e] = c
        return IntPolyQ(out)

    def divmod(self, other: "IntPolyQ") -> tuple["IntPolyQ", "IntPolyQ"]:
        # only meaningful when other is monic up to sign, which is all we need
        q_, r_ = divmod(self._f, other._f)
        return IntPolyQ(q_), IntPolyQ(r_)

    def __add__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return IntPolyQ(self._f + other._f)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return IntPolyQ(self._f - other._f)

    def __rsub__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return IntPolyQ(other._f - self._f)

    def __mul__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return IntPolyQ(self._f * other._f)

    __rmul__ = __mul__

    def __neg__(self):
        return IntPolyQ(-self._f)

    def __pow__(self, n: int):
        return IntPolyQ(self._f ** n)

    def __eq__(self, other):
        other = _as_intpoly(other)
        if other is None:
            return NotImplemented
        return self._f == other._f

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"IntPolyQ({self})"

    def __str__(self):
        return render_qpoly(self.coeffs)


def _as_intpoly(x) -> IntPolyQ | None:
    if isinstance(x, IntPolyQ):
        return x
    if isinstance(x, int):
        return IntPolyQ(x)
    return None


def render_qpoly(coeffs: Sequence[int]) -> str:
    """Ascending-degree text form, e.g. ``1+q+2*q^2``."""
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


_ONE_F = flint.fmpz_poly([1])


class RatFuncQ:
    """Element of Q(q) stored as a reduced quotient of integer polynomials.

    The numerator and denominator share no factor in Z[q] (contents
    included) and the denominator has a positive leading coefficient.
    """

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, num=0, den=1, *, _reduced: bool = False):
        n = _as_fmpz_poly(num)
        d = _as_fmpz_poly(den)
        if not _reduced:
            if d.is_zero():
                raise ZeroDivisionError("zero denominator")
            if n.is_zero():
                d = _ONE_F
            elif not d.is_one():
                g = n.gcd(d)
                if not g.is_one():
                    n = n // g
                    d = d // g
                if d[d.degree()] < 0:
                    n, d = -n, -d
        self._n = n
        self._d = d
        self._hash = None

    @property
    def num(self) -> IntPolyQ:
        return IntPolyQ(self._n)

    @property
    def den(self) -> IntPolyQ:
        return IntPolyQ(self._d)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_one(self) -> bool:
        return self._d.is_one() and self._n.is_one()

    def is_poly(self) -> bool:
        return self._d.is_one()

    def as_intpoly(self) -> IntPolyQ:
        if not self._d.is_one():
            raise ValueError(f"{self} is not a polynomial")
        return IntPolyQ(self._n)

    def at(self, value: int) -> tuple[int, int]:
        """Numerator and denominator evaluated at q = value."""
        return int(self._n(value)), int(self._d(value))

    def compose_power(self, e: int) -> "RatFuncQ":
        return RatFuncQ(IntPolyQ(self._n).compose_power(e).flint,
                        IntPolyQ(self._d).compose_power(e).flint, _reduced=True)

    def __add__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self._d.is_one() and other._d.is_one():
            return RatFuncQ(self._n + other._n, _ONE_F, _reduced=True)
        if self._d == other._d:
            return RatFuncQ(self._n + other._n, self._d)
        return RatFuncQ(self._n * other._d + other._n * self._d, self._d * other._d)

    __radd__ = __add__

    def __neg__(self):
        return RatFuncQ(-self._n, self._d, _reduced=True)

    def __sub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        if self._n.is_zero() or other._n.is_zero():
            return ZERO
        if self._d.is_one() and other._d.is_one():
            return RatFuncQ(self._n * other._n, _ONE_F, _reduced=True)
        # cross-cancel so the product is already reduced
        g1 = self._n.gcd(other._d)
        g2 = other._n.gcd(self._d)
        n = (self._n // g1) * (other._n // g2)
        d = (self._d // g2) * (other._d // g1)
        if d[d.degree()] < 0:
            n, d = -n, -d
        return RatFuncQ(n, d, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncQ":
        if self._n.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n, d = self._d, self._n
        if d[d.degree()] < 0:
            n, d = -n, -d
        return RatFuncQ(n, d, _reduced=True)

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFuncQ(self._n ** n, self._d ** n, _reduced=True)

    def __eq__(self, other):
        other = _as_ratfunc(other)
        if other is None:
            return NotImplemented
        return self._n == other._n and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(int(c) for c in self._n.coeffs()),
                               tuple(int(c) for c in self._d.coeffs())))
        return self._hash

    def __repr__(self):
        return f"RatFuncQ({self})"

    def __str__(self):
        num = render_qpoly([int(c) for c in self._n.coeffs()])
        if self._d.is_one():
            return num
        den = render_qpoly([int(c) for c in self._d.coeffs()])
        if len(self._n.coeffs()) > 1:
            num = f"({num})"
        return f"{num}/({den})"


def _as_fmpz_poly(x) -> flint.fmpz_poly:
    if isinstance(x, flint.fmpz_poly):
        return x
    if isinstance(x, IntPolyQ):
        return x.flint
    if isinstance(x, int):
        return flint.fmpz_poly([x])
    return flint.fmpz_poly([int(c) for c in x])


def _as_ratfunc(x) -> RatFuncQ | None:
    if isinstance(x, RatFuncQ):
        return x
    if isinstance(x, int):
        return RatFuncQ(flint.fmpz_poly([x]), _ONE_F, _reduced=True)
    if isinstance(x, IntPolyQ):
        return RatFuncQ(x.flint, _ONE_F, _reduced=True)
    if isinstance(x, LocalizedQ):
        return x.value
    return None


def ratfunc(x) -> RatFuncQ:
    out = _as_ratfunc(x)
    if out is None:
        raise TypeError(f"cannot coerce {x!r} to RatFuncQ")
    return out


ZERO = RatFuncQ(0)
ONE = RatFuncQ(1)
Q = RatFuncQ(flint.fmpz_poly([0, 1]), _ONE_F, _reduced=True)


class LocalizationError(ArithmeticError):
    """A value expected in Z[q]_(p,q-1) (or Z[q], or its units) is not there."""


class LocalizedQ:
    """A rational function certified to lie in Z[q]_(p, q-1)."""

    __slots__ = ("value", "p")

    def __init__(self, value, p: int):
        value = ratfunc(value)
        if value.at(1)[1] % p == 0:
            raise LocalizationError(f"{value} is not in Z[q]_({p},q-1)")
        self.value = value
        self.p = p

    def is_unit(self) -> bool:
        return self.value.at(1)[0] % self.p != 0

    def inverse(self) -> "LocalizedQ":
        if not self.is_unit():
            raise LocalizationError(f"{self.value} is not a unit at ({self.p},q-1)")
        return LocalizedQ(self.value.inverse(), self.p)

    def at_one(self) -> int:
        """Value at q=1; an integer up to a p-adic unit denominator."""
        n, d = self.value.at(1)
        if n % d:
            raise ValueError(f"{self.value} has non-integral value at q=1")
        return n // d

    def _coerce(self, other) -> RatFuncQ | None:
        if isinstance(other, LocalizedQ):
            if other.p != self.p:
                raise ValueError("mixing localizations at different primes")
            return other.value
        return _as_ratfunc(other)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else LocalizedQ(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else LocalizedQ(self.value - o, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else LocalizedQ(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return LocalizedQ(-self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, LocalizedQ):
            return self.p == other.p and self.value == other.value
        o = _as_ratfunc(other)
        return NotImplemented if o is None else self.value == o

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"LocalizedQ({self.value}, p={self.p})"

    def __str__(self):
        return str(self.value)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % f for f in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class LevelCtx:
    p: int
    m: int
    d: int = 1

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.m < 0:
            raise ValueError(f"level m={self.m} must be non-negative")
        if self.d < 1:
            raise ValueError(f"dimension d={self.d} must be positive")

    @property
    def pm(self) -> int:
        return self.p ** self.m

    def with_d(self, d: int) -> "LevelCtx":
        return LevelCtx(self.p, self.m, d)


# multi-index helpers

def zero_index(d: int) -> MultiIndex:
    return (0,) * d


def unit_index(i: int, d: int, n: int = 1) -> MultiIndex:
    return tuple(n if j == i else 0 for j in range(d))


def index_le(a: MultiIndex, b: MultiIndex) -> bool:
    return all(x <= y for x, y in zip(a, b))


def index_add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def index_sub(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x - y for x, y in zip(a, b))


def indices_below(k: MultiIndex):
    """All k' with 0 <= k' <= k, in lexicographic order."""
    if not k:
        yield ()
        return
    for head in range(k[0] + 1):
        for tail in indices_below(k[1:]):
            yield (head,) + tail


def _check_pair(k: MultiIndex, kp: MultiIndex) -> None:
    if len(k) != len(kp):
        raise ValueError(f"multi-index lengths differ: {k} vs {kp}")
    if not index_le(kp, k):
        raise ValueError(f"{kp} is not <= {k}")


# q-integers and q-binomials

@lru_cache(maxsize=None)
def q_int_step(n: int, e: int) -> IntPolyQ:
    """(n)_{q^e} = 1 + q^e + ... + q^{e(n-1)}."""
    out = [0] * (e * (n - 1) + 1) if n > 0 else []
    for j in range(n):
        out[j * e] = 1
    return IntPolyQ(out)


def q_int(n: int, shift: int = 0, p: int | None = None) -> IntPolyQ:
    """(n)_{q^{p^shift}}; shift > 0 needs the prime p."""
    if shift and p is None:
        raise ValueError("a prime is needed for a shifted q-integer")
    return q_int_step(n, p ** shift if shift else 1)


@lru_cache(maxsize=None)
def q_factorial(n: int, step: int = 1) -> IntPolyQ:
    """(n)_{q^step}! as a product of q-integers."""
    out = IntPolyQ(1)
    for j in range(1, n + 1):
        out = out * q_int_step(j, step)
    return out


_PASCAL_ROWS: list[tuple[IntPolyQ, ...]] = [(IntPolyQ(1),)]


def _pascal_row(k: int) -> tuple[IntPolyQ, ...]:
    while len(_PASCAL_ROWS) <= k:
        n = len(_PASCAL_ROWS)
        row = _PASCAL_ROWS[-1]
        new = [IntPolyQ(1)]
        for j in range(1, n + 1):
            right = row[j] if j < n else IntPolyQ(0)
            new.append(row[j - 1] + IntPolyQ.monomial(j) * right)
        _PASCAL_ROWS.append(tuple(new))
    return _PASCAL_ROWS[k]


def q_binom_pascal(k: int, kp: int) -> IntPolyQ:
    """Gaussian binomial from the q-Pascal rule; 0 outside 0 <= k' <= k."""
    if kp < 0 or kp > k or k < 0:
        return IntPolyQ(0)
    return _pascal_row(k)[kp]


def q_binom_factorial(k: int, kp: int) -> RatFuncQ:
    if kp < 0 or kp > k:
        raise ValueError(f"factorial form needs 0 <= k' <= k, got k={k}, k'={kp}")
    return RatFuncQ(q_factorial(k)) / (RatFuncQ(q_factorial(kp)) * RatFuncQ(q_factorial(k - kp)))


def in_localized(f, p: int) -> LocalizedQ | None:
    try:
        return LocalizedQ(f, p)
    except LocalizationError:
        return None


def is_unit_localized(f: LocalizedQ) -> bool:
    return f.is_unit()


@lru_cache(maxsize=None)
def hl_brace(k: int, kp: int, ctx: LevelCtx) -> IntPolyQ:
    """Level-m brace coefficient: the q^{p^m}-binomial of the p^m-quotients."""
    if kp < 0 or kp > k:
        raise ValueError(f"hl_brace needs 0 <= k' <= k, got k={k}, k'={kp}")
    pm = ctx.pm
    r, r1, r2 = k // pm, kp // pm, (k - kp) // pm
    val = RatFuncQ(q_factorial(r, pm)) / (RatFuncQ(q_factorial(r1, pm)) * RatFuncQ(q_factorial(r2, pm)))
    if not val.is_poly():
        raise AssertionError(f"brace coefficient {{{k}\\{kp}}} is not integral: {val}")
    return val.as_intpoly()


@lru_cache(maxsize=None)
def hl_angle(k: int, kp: int, ctx: LevelCtx) -> LocalizedQ:
    """Level-m angle coefficient (k\\k')_q / {k\\k'}, certified local."""
    if kp < 0 or kp > k:
        raise ValueError(f"hl_angle needs 0 <= k' <= k, got k={k}, k'={kp}")
    val = RatFuncQ(q_binom_pascal(k, kp)) / RatFuncQ(hl_brace(k, kp, ctx))
    try:
        return LocalizedQ(val, ctx.p)
    except LocalizationError as exc:
        raise AssertionError(f"angle coefficient <{k}\\{kp}> left Z[q]_(p,q-1)") from exc


def q_binom_multi(k: MultiIndex, kp: MultiIndex, ctx: LevelCtx | None = None) -> IntPolyQ:
    _check_pair(k, kp)
    out = IntPolyQ(1)
    for a, b in zip(k, kp):
        out = out * q_binom_pascal(a, b)
    return out


def hl_brace_multi(k: MultiIndex, kp: MultiIndex, ctx: LevelCtx) -> IntPolyQ:
    _check_pair(k, kp)
    out = IntPolyQ(1)
    for a, b in zip(k, kp):
        out = out * hl_brace(a, b, ctx)
    return out


@lru_cache(maxsize=None)
def _angle_multi_value(k: MultiIndex, kp: MultiIndex, ctx: LevelCtx) -> RatFuncQ:
    out = ONE
    for a, b in zip(k, kp):
        out = out * hl_angle(a, b, ctx).value
    return out


def hl_angle_multi(k: MultiIndex, kp: MultiIndex, ctx: LevelCtx) -> LocalizedQ:
    _check_pair(k, kp)
    return LocalizedQ(_angle_multi_value(tuple(k), tuple(kp), ctx), ctx.p)


def angle_value(k: MultiIndex, kp: MultiIndex, ctx: LevelCtx) -> RatFuncQ:
    """Unchecked fast path for inner loops: the angle coefficient in Q(q)."""
    return _angle_multi_value(k, kp, ctx)


def clmus_unit(r: int, s: int, ctx: LevelCtx) -> LocalizedQ:
    """u with (p^m r + s)_q = u (s)_q, certified to be a local unit."""
    pm = ctx.pm
    if not 0 < s < pm:
        raise ValueError(f"need 0 < s < p^m = {pm}, got s={s}")
    u = RatFuncQ(q_int_step(pm * r + s, 1)) / RatFuncQ(q_int_step(s, 1))
    loc = in_localized(u, ctx.p)
    if loc is None or not loc.is_unit():
        raise AssertionError(f"(p^m r + s)_q / (s)_q is not a unit for r={r}, s={s}")
    return loc


# classical (q = 1) level-m integers

def brace_int(k: int, kp: int, ctx: LevelCtx) -> int:
    pm = ctx.pm
    r, r1, r2 = k // pm, kp // pm, (k - kp) // pm
    return math.factorial(r) // (math.factorial(r1) * math.factorial(r2))


def angle_int(k: int, kp: int, ctx: LevelCtx) -> Fraction:
    """Classical angle coefficient; an element of Z_(p), not always of Z."""
    val = Fraction(math.comb(k, kp), brace_int(k, kp, ctx))
    if val.denominator % ctx.p == 0:
        raise AssertionError(f"classical <{k}\\{kp}> is not p-integral")
    return val
