"""The linearised q-jet complex of order p^m and its contracting homotopy.

A ``JetElem`` of degree r is a sum of words  f(x) xi^{{K}} (x)' (dxi)^{(f_1)} (x)' ... (x)' (dxi)^{(f_r)}
with 0 < |f_j| <= p^m, stored like a degree r+1 tensor whose first factor is
the divided power coefficient.  Equality of ``JetElem`` is equality in the
free module on these words; equality in the complex, where the quadratic
relations hold, goes through :func:`jet_eq_mod_relations`.

The differential and h have x-free matrix entries and are A-linear, so all
checks can be run on x-free words graded by the weight K + sum f_j.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .coeff import (
    ONE,
    LevelCtx,
    LocalizationError,
    MultiIndex,
    RatFuncQ,
    angle_value,
    index_add,
    index_sub,
    indices_below,
    zero_index,
)
from .dp_algebra import DPElem, TensorElem, _add_into, iterated_comul_basis, tensor_mul
from .linalg import Echelon, rank
from .report import Report

Word = tuple  # (K, f_1, ..., f_r)


class InconclusiveError(Exception):
    """The relation oracle was asked about coefficients beyond its x-degree bound."""


class JetElem(TensorElem):
    __slots__ = ()

    def __init__(self, ctx: LevelCtx, degree: int, terms: Mapping | None = None):
        super().__init__(ctx, degree + 1, terms)
        for _, ks in self.terms:
            for f in ks[1:]:
                if not 0 < sum(f) <= ctx.pm:
                    raise ValueError(f"factor {f} is not a jet generator")

    @property
    def jet_degree(self) -> int:
        return self.degree - 1

    @classmethod
    def word(cls, k: Sequence[int], factors: Sequence[Sequence[int]], ctx: LevelCtx, coeff=ONE, x=None):
        e = tuple(x) if x is not None else zero_index(ctx.d)
        return cls(ctx, len(factors), {(e, (tuple(k),) + tuple(tuple(f) for f in factors)): coeff})

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ks, f in sorted(self.words().items(), reverse=True):
            w = "xi^{{" + ",".join(map(str, ks[0])) + "}}"
            w += "".join(" (x)' dxi^(" + ",".join(map(str, g)) + ")" for g in ks[1:])
            parts.append(f"({f.render()}) * {w}")
        return " + ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"JetElem[{self.jet_degree}]({self.render()})"


def _jet(ctx: LevelCtx, r: int, terms: dict) -> JetElem:
    out = object.__new__(JetElem)
    out.ctx, out.terms, out.degree, out.plain = ctx, terms, r + 1, False
    return out


def as_jet(t: TensorElem, ctx: LevelCtx | None = None) -> JetElem:
    """Image of a normalised linearised tensor in the jet complex."""
    ctx = ctx or t.ctx
    pm = ctx.pm
    out: dict = {}
    for (e, ks), c in t.terms.items():
        sizes = [sum(f) for f in ks[1:]]
        if 0 in sizes:
            raise ValueError(f"word {ks} is not normalised")
        if max(sizes, default=0) <= pm:
            _add_into(out, (e, ks), c)
    return _jet(ctx, t.degree - 1, out)


def _linear(e: JetElem, basis_map, r_out: int) -> JetElem:
    """Extend a map on x-free words A-linearly."""
    out: dict = {}
    for (x, w), c in e.terms.items():
        for (x2, w2), c2 in basis_map(w, e.ctx).items():
            _add_into(out, (index_add(x, x2), w2), c * c2)
    return _jet(e.ctx, r_out, out)


# differential

@lru_cache(maxsize=None)
def _d_basis(w: Word, ctx: LevelCtx) -> dict:
    pm = ctx.pm
    z = zero_index(ctx.d)
    K, fs = w[0], w[1:]
    out: dict = {}
    for kp in indices_below(K):
        if 0 < sum(kp) <= pm:
            _add_into(out, (z, (index_sub(K, kp), kp) + fs), angle_value(K, kp, ctx))
    for j, f in enumerate(fs):
        sign = 1 if j % 2 == 1 else -1  # (-1)^{j+1} for 0-based j
        for fp in indices_below(f):
            if 0 < sum(fp) < sum(f):
                c = angle_value(f, fp, ctx)
                _add_into(out, (z, (K,) + fs[:j] + (index_sub(f, fp), fp) + fs[j + 1:]), c if sign > 0 else -c)
    return out


def jet_d(e: JetElem, ctx: LevelCtx | None = None) -> JetElem:
    """d(a (x)' z) = d^0 a (x)' z + a (x)' dz, with d(dxi^(f)) = -sum <f\\f'> dxi^(f-f') (x)' dxi^(f')."""
    return _linear(e, _d_basis, e.jet_degree + 1)


# relations

def _relation_terms(ell: MultiIndex, ctx: LevelCtx) -> list[tuple[MultiIndex, MultiIndex, RatFuncQ]]:
    pm = ctx.pm
    out = []
    for lp in indices_below(ell):
        a = index_sub(ell, lp)
        if 0 < sum(lp) <= pm and 0 < sum(a) <= pm:
            out.append((a, lp, angle_value(ell, lp, ctx)))
    return out


def is_relation_index(ell: Sequence[int], ctx: LevelCtx) -> bool:
    return ctx.pm < sum(ell) <= 2 * ctx.pm


def relation_element(k, prefix, ell, suffix, ctx: LevelCtx) -> JetElem:
    """xi^{{K}} (x)' u (x)' sum <l\\l'> dxi^(l-l') (x)' dxi^(l') (x)' v."""
    ell = tuple(ell)
    if not is_relation_index(ell, ctx):
        raise ValueError(f"{ell} does not index a relation")
    k = tuple(k)
    u = tuple(tuple(f) for f in prefix)
    v = tuple(tuple(f) for f in suffix)
    z = zero_index(ctx.d)
    terms = {(z, (k,) + u + (a, b) + v): c for a, b, c in _relation_terms(ell, ctx)}
    return _jet(ctx, len(u) + len(v) + 2, terms)


def _generators_touching(w: Word, ctx: LevelCtx):
    K, fs = w[0], w[1:]
    for j in range(len(fs) - 1):
        ell = index_add(fs[j], fs[j + 1])
        if is_relation_index(ell, ctx):
            yield (K, fs[:j], ell, fs[j + 2:])


def _generator_vector(g, ctx: LevelCtx) -> dict:
    K, u, ell, v = g
    return {(K,) + u + (a, b) + v: c for a, b, c in _relation_terms(ell, ctx)}


_components: dict = {}


def _component(w: Word, ctx: LevelCtx) -> Echelon | None:
    """Echelon basis of the relations in the connected component of word w."""
    key = (ctx, w)
    if key in _components:
        return _components[key]
    words, gens, todo = {w}, set(), [w]
    while todo:
        cur = todo.pop()
        for g in _generators_touching(cur, ctx):
            if g in gens:
                continue
            gens.add(g)
            for w2 in _generator_vector(g, ctx):
                if w2 not in words:
                    words.add(w2)
                    todo.append(w2)
    ech = None
    if gens:
        ech = Echelon()
        for g in sorted(gens):
            ech.add(_generator_vector(g, ctx))
    for w2 in words:
        _components[(ctx, w2)] = ech
    return ech


def in_relations(e: JetElem, xdeg_bound: int | None = None) -> bool:
    """Whether e lies in the submodule generated by the quadratic relations."""
    ctx = e.ctx
    by_x: dict = {}
    for (x, w), c in e.terms.items():
        if xdeg_bound is not None and sum(x) > xdeg_bound:
            raise InconclusiveError(f"x-degree {sum(x)} exceeds the bound {xdeg_bound}")
        by_x.setdefault(x, {})[w] = c
    for vec in by_x.values():
        groups: dict = {}
        for w, c in vec.items():
            ech = _component(w, ctx)
            if ech is None:
                return False
            groups.setdefault(id(ech), (ech, {}))[1][w] = c
        for ech, part in groups.values():
            if not ech.contains(part):
                return False
    return True


def jet_eq_mod_relations(a: JetElem, b: JetElem, xdeg_bound: int, ctx: LevelCtx | None = None) -> bool:
    """Equality in the jet complex, decided per x-monomial by exact elimination.

    Relation generators have x-free coefficients, so the relation submodule is
    A tensor its x-free part and no coefficient moves raise the x-degree.  The
    bound is a guard: inputs beyond it raise InconclusiveError.
    """
    if a.jet_degree != b.jet_degree:
        raise ValueError("degree mismatch")
    for t in (a, b):
        for (x, _) in t.terms:
            if sum(x) > xdeg_bound:
                raise InconclusiveError(f"x-degree {sum(x)} exceeds the bound {xdeg_bound}")
    diff = a - b
    if diff.is_zero():
        return True
    if a.jet_degree < 2:
        return False
    return in_relations(diff)


# homotopy

def _trim(terms: Mapping, ctx: LevelCtx) -> dict:
    pm = ctx.pm
    return {k: c for k, c in terms.items() if all(sum(f) <= pm for f in k[1][1:])}


def right_coefficient(omega: TensorElem, y: DPElem) -> TensorElem:
    """omega (x)' y for omega with s slots: the product of Delta^(s)(y) with omega."""
    ctx = y.ctx
    s = omega.degree
    spread: dict = {}
    for (e, k), c in y.terms.items():
        for ks, v in iterated_comul_basis(k, s, ctx):
            _add_into(spread, (e, ks), c * v)
    return tensor_mul(TensorElem(ctx, s, spread), omega)


def right_attach(omega: TensorElem, tail: TensorElem) -> JetElem:
    """omega (x)' tail, where the coefficient of each tail word moves onto omega."""
    ctx = omega.ctx
    out: dict = {}
    for (x, ks), c in tail.terms.items():
        prod = right_coefficient(omega, DPElem(ctx, {(x, ks[0]): c}))
        for (x2, ks2), c2 in prod.terms.items():
            _add_into(out, (x2, ks2 + ks[1:]), c2)
    return _jet(ctx, omega.degree - 1 + tail.degree - 1, _trim(out, ctx))


def _unit_inverse(c: RatFuncQ, ctx: LevelCtx) -> RatFuncQ:
    if c.num(1) % ctx.p == 0 or c.den(1) % ctx.p == 0:
        raise LocalizationError(f"{c} is not a unit of Z[q]_({ctx.p},q-1)")
    return c.inverse()


def _split(w: Word, ctx: LevelCtx):
    """(s, l, hat part of f_s) for the first factor with a last-variable component."""
    for j, f in enumerate(w[1:]):
        if f[-1] > 0:
            return j + 1, f[-1], f[:-1]
    return None


@lru_cache(maxsize=None)
def _h_basis(w: Word, ctx: LevelCtx) -> dict:
    pm = ctx.pm
    K, fs = w[0], w[1:]
    r = len(fs)
    if r == 0:
        return {}
    found = _split(w, ctx)
    if found is None:
        return {}
    s, l, khat = found
    if any(khat):
        return {}
    k = K[-1]
    if k % pm:
        return {}
    if l < pm or s == r:
        coeff = _unit_inverse(angle_value((k + l,), (k,), ctx), ctx)
        if s % 2 == 0:
            coeff = -coeff
        omega = TensorElem.word((K[:-1] + (0,),) + fs[:s - 1], ctx)
        y = DPElem.basis(zero_index(ctx.d)[:-1] + (k + l,), ctx, coeff)
        out: dict = {}
        for (x, ks), c in right_coefficient(omega, y).terms.items():
            _add_into(out, (x, ks + fs[s:]), c)
        return _trim(out, ctx)
    # l = p^m and s < r
    lhat, lpp = fs[s][:-1], fs[s][-1]
    before, after = fs[:s - 1], fs[s + 1:]
    zhat = zero_index(ctx.d - 1)
    out = {}

    def add(factors, c):
        if all(sum(f) <= pm for f in factors):
            for key, v in _h_basis((K,) + before + tuple(factors) + after, ctx).items():
                _add_into(out, key, c * v)

    if lpp > 0:
        lead = _unit_inverse(angle_value((pm + lpp,), (lpp,), ctx), ctx)
        for lp in range(lpp + 1, pm + 1):
            c = -lead * angle_value((pm + lpp,), (lp,), ctx)
            add([zhat + (pm + lpp - lp,), lhat + (lp,)], c)
    else:
        add([lhat + (0,), zhat + (pm,)], -ONE)
        for lp in range(1, pm):
            add([zhat + (pm - lp,), lhat + (lp,)], -angle_value((pm,), (lp,), ctx))
    return out


def homotopy_h(e: JetElem, ctx: LevelCtx | None = None) -> JetElem:
    """The A-linear homotopy lowering degree by one."""
    if e.jet_degree == 0:
        return _jet(e.ctx, 0, {})
    return _linear(e, _h_basis, e.jet_degree - 1)


def jet_pi(e: JetElem, ctx: LevelCtx | None = None) -> JetElem:
    """Keep the words free of the last variable, send the others to 0."""
    terms = {(x, ks): c for (x, ks), c in e.terms.items() if all(f[-1] == 0 for f in ks)}
    return _jet(e.ctx, e.jet_degree, terms)


# verification

def factor_range(ctx: LevelCtx) -> list[MultiIndex]:
    pm = ctx.pm
    out = [tuple(f) for f in product(range(pm + 1), repeat=ctx.d) if 0 < sum(f) <= pm]
    return sorted(out, key=lambda f: (sum(f), f))


def coefficient_range(n: int, ctx: LevelCtx) -> list[MultiIndex]:
    return sorted((tuple(k) for k in product(range(n + 1), repeat=ctx.d) if sum(k) <= n),
                  key=lambda k: (sum(k), k))


def generator_words(n: int, max_degree: int, ctx: LevelCtx) -> Iterable[Word]:
    fr = factor_range(ctx)
    for r in range(max_degree + 1):
        for K in coefficient_range(n, ctx):
            for fs in product(fr, repeat=r):
                yield (K,) + fs


def _word_elem(w: Word, ctx: LevelCtx) -> JetElem:
    return JetElem.word(w[0], w[1:], ctx)


def _same(a: JetElem, b: JetElem, xdeg_bound: int) -> bool:
    return jet_eq_mod_relations(a, b, xdeg_bound) if a.jet_degree >= 2 else a == b


def verify_homotopy_identity(bound: int, max_degree: int, ctx: LevelCtx, xdeg_bound: int = 6) -> Report:
    """h d + d h = Id - pi on every generator word within the bounds."""
    rep = Report("homotopy_identity")
    for w in generator_words(bound, max_degree, ctx):
        e = _word_elem(w, ctx)
        lhs = homotopy_h(jet_d(e)) + jet_d(homotopy_h(e)) if e.jet_degree else homotopy_h(jet_d(e))
        rhs = e - jet_pi(e)
        rep.check(_same(lhs, rhs, xdeg_bound), {"word": w}, rhs.render(), lhs.render())
    return rep.finish()


def verify_h_relations(ctx: LevelCtx, coeff_bound: int | None = None, max_prefix: int = 1,
                       max_suffix: int = 1, xdeg_bound: int = 6) -> Report:
    """h sends every padded relation into the relations of one degree lower."""
    rep = Report("h_relations")
    pm = ctx.pm
    n = 2 * pm if coeff_bound is None else coeff_bound
    fr = factor_range(ctx)
    ells = [tuple(l) for l in product(range(2 * pm + 1), repeat=ctx.d) if is_relation_index(l, ctx)]
    coeffs = [K for K in product(range(n + 1), repeat=ctx.d) if K[-1] % pm == 0]
    for K in coeffs:
        for a in range(max_prefix + 1):
            for b in range(max_suffix + 1):
                for u in product(fr, repeat=a):
                    for v in product(fr, repeat=b):
                        for ell in ells:
                            img = homotopy_h(relation_element(K, u, ell, v, ctx))
                            zero = _jet(ctx, img.jet_degree, {})
                            rep.check(_same(img, zero, xdeg_bound),
                                      {"coefficient": K, "prefix": u, "relation": ell, "suffix": v},
                                      "0", img.render())
    return rep.finish()


def jet_dd_check(w: Word, ctx: LevelCtx, xdeg_bound: int = 6) -> bool:
    e = _word_elem(w, ctx)
    dd = jet_d(jet_d(e))
    return _same(dd, _jet(ctx, dd.jet_degree, {}), xdeg_bound)


# the shapes used to build h

def _omega(K: MultiIndex, fs: Sequence, ctx: LevelCtx) -> TensorElem:
    return TensorElem.word((K,) + tuple(fs), ctx)


def _tail(K: MultiIndex, fs: Sequence, ctx: LevelCtx) -> JetElem:
    return JetElem.word(K, fs, ctx)


def _last_power(k: int, ctx: LevelCtx) -> MultiIndex:
    return zero_index(ctx.d - 1) + (k,)


def _hat(f: MultiIndex) -> MultiIndex:
    return f[:-1] + (0,)


def coefficient_move_check(w: Word, ctx: LevelCtx, xdeg_bound: int = 6) -> bool:
    """Moving the last-variable part of the coefficient up to the s-th factor leaves h unchanged.

    The first s-1 factors of w must be free of the last variable.
    """
    K, fs = w[0], w[1:]
    s = next((j + 1 for j, f in enumerate(fs) if f[-1] > 0), len(fs))
    if s == 0:
        return True
    moved = right_attach(_omega(_hat(K), fs[:s - 1], ctx), _tail(_last_power(K[-1], ctx), fs[s - 1:], ctx))
    return _same(homotopy_h(_word_elem(w, ctx)), homotopy_h(moved), xdeg_bound)


def _localized_parts(w: Word, ctx: LevelCtx):
    K, fs = w[0], w[1:]
    found = _split(w, ctx)
    if found is None:
        return None
    s = found[0]
    if any(f[-1] for f in fs[:s - 1]):
        return None
    return s, _omega(_hat(K), fs[:s - 1], ctx), K[-1], fs


def single_factor_locality_check(w: Word, ctx: LevelCtx, xdeg_bound: int = 6) -> bool | None:
    """h acts on the s-th block alone; None where the side conditions exclude w."""
    parts = _localized_parts(w, ctx)
    if parts is None:
        return None
    s, omega, k, fs = parts
    f = fs[s - 1]
    l = f[-1]
    if l == 0 or (not any(f[:-1]) and k % ctx.pm == 0 and l == ctx.pm and s < len(fs)):
        return None
    inner = homotopy_h(_tail(_last_power(k, ctx), (f,), ctx))
    tail = TensorElem(ctx, 1 + len(fs) - s,
                      {(x, ks + fs[s:]): c for (x, ks), c in inner.terms.items()})
    rhs = right_attach(omega, tail).scale(-1 if s % 2 == 0 else 1)
    return _same(homotopy_h(_word_elem(w, ctx)), rhs, xdeg_bound)


def tail_locality_check(w: Word, ctx: LevelCtx, xdeg_bound: int = 6) -> bool | None:
    parts = _localized_parts(w, ctx)
    if parts is None:
        return None
    s, omega, k, fs = parts
    inner = homotopy_h(_tail(_last_power(k, ctx), fs[s - 1:], ctx))
    rhs = right_attach(omega, inner).scale(-1 if s % 2 == 0 else 1)
    return _same(homotopy_h(_word_elem(w, ctx)), rhs, xdeg_bound)


def _append(e: JetElem, suffix: Sequence) -> JetElem:
    suffix = tuple(tuple(f) for f in suffix)
    return _jet(e.ctx, e.jet_degree + len(suffix), {(x, ks + suffix): c for (x, ks), c in e.terms.items()})


def suffix_passthrough_check(k: int, f: MultiIndex, suffix: Sequence, ctx: LevelCtx, xdeg_bound: int = 6) -> bool:
    """h[d(xi_d^{{k}} dxi^(f)) (x)' P] = h d(xi_d^{{k}} dxi^(f)) (x)' P for 0 < f_d < p^m."""
    if not 0 < f[-1] < ctx.pm:
        raise ValueError("the last component must lie strictly between 0 and p^m")
    base = jet_d(JetElem.word(_last_power(k, ctx), [f], ctx))
    return _same(homotopy_h(_append(base, suffix)), _append(homotopy_h(base), suffix), xdeg_bound)


def verify_h_locality(bound: int, ctx: LevelCtx, xdeg_bound: int = 6) -> Report:
    """The coefficient-moving and locality properties of h on words of degree <= 2."""
    rep = Report("h_locality")
    for w in generator_words(bound, 2, ctx):
        rep.check(coefficient_move_check(w, ctx, xdeg_bound), {"check": "coefficient move", "word": w})
        for name, fn in (("single factor", single_factor_locality_check), ("tail", tail_locality_check)):
            ok = fn(w, ctx, xdeg_bound)
            if ok is not None:
                rep.check(ok, {"check": name, "word": w})
        e = _word_elem(w, ctx)
        x1 = (1,) + (0,) * (ctx.d - 1)
        rep.check(homotopy_h(e.times_x(x1)) == homotopy_h(e).times_x(x1), {"check": "A-linearity", "word": w})
    fr = factor_range(ctx)
    for k in range(0, bound + 1):
        for f in fr:
            if not 0 < f[-1] < ctx.pm:
                continue
            for n in range(2):
                for suffix in product(fr, repeat=n):
                    rep.check(suffix_passthrough_check(k, f, suffix, ctx, xdeg_bound),
                              {"check": "suffix passthrough", "k": k, "factor": f, "suffix": suffix})
    return rep.finish()


# Poincare lemma

def _weight(w: Word) -> MultiIndex:
    out = w[0]
    for f in w[1:]:
        out = index_add(out, f)
    return out


def _slice_words(weight: MultiIndex, r: int, ctx: LevelCtx) -> list[Word]:
    out = []
    for fs in product(factor_range(ctx), repeat=r):
        rest = weight
        ok = True
        for f in fs:
            if any(a < b for a, b in zip(rest, f)):
                ok = False
                break
            rest = index_sub(rest, f)
        if ok:
            out.append((rest,) + fs)
    return sorted(out)


def _slice_relations(weight: MultiIndex, r: int, ctx: LevelCtx) -> list[dict]:
    gens = set()
    for w in _slice_words(weight, r, ctx):
        gens.update(_generators_touching(w, ctx))
    return [_generator_vector(g, ctx) for g in sorted(gens)]


def _rows(words: Sequence[Word], ctx: LevelCtx) -> list[dict]:
    return [{w2: c for (_, w2), c in _d_basis(w, ctx).items()} for w in words]


def verify_jet_poincare(bound: int, ctx: LevelCtx, max_degree: int = 2) -> Report:
    """Homology of the x-free weight slices |w| <= bound in degrees 0..max_degree.

    Degree 0 homology must be the constants (weight 0) and higher homology
    must vanish.  Degree r >= 2 terms are taken modulo the relations.
    """
    rep = Report("jet_poincare")
    d = ctx.d
    for total in range(bound + 1):
        for weight in product(range(total + 1), repeat=d):
            if sum(weight) != total:
                continue
            words = [_slice_words(weight, r, ctx) for r in range(max_degree + 2)]
            rels = [_slice_relations(weight, r, ctx) if r >= 2 else [] for r in range(max_degree + 2)]
            rel_rank = [rank(v) for v in rels]
            # rank of d^r on the quotient in degree r, landing in the quotient in degree r+1
            maps = [rank(rels[r + 1] + _rows(words[r], ctx)) - rel_rank[r + 1] for r in range(max_degree + 1)]
            for r in range(max_degree + 1):
                dim = len(words[r]) - rel_rank[r]
                h = dim - maps[r] - (maps[r - 1] if r else 0)
                expected = 1 if (r == 0 and total == 0) else 0
                rep.check(h == expected, {"weight": weight, "degree": r}, expected, h)
    return rep.finish()
