"""Sparse exact linear algebra over Q(q) and over the residue field F_p.

Vectors are dicts {column key: coefficient}.  Column keys only need to be
hashable and sortable, so pivots are chosen deterministically.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping

from .coeff import RatFuncQ


class Echelon:
    """Incrementally built row echelon basis over Q(q)."""

    def __init__(self):
        self.rows: dict[Hashable, dict] = {}  # pivot column -> row with pivot coefficient 1

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping) -> dict:
        v = {k: c for k, c in vec.items() if not c.is_zero()}
        while True:
            hits = [k for k in v if k in self.rows]
            if not hits:
                return v
            col = min(hits)
            c = v[col]
            for k, r in self.rows[col].items():
                s = v.get(k)
                s = -c * r if s is None else s - c * r
                if s.is_zero():
                    v.pop(k, None)
                else:
                    v[k] = s

    def add(self, vec: Mapping) -> bool:
        """Insert vec; True when it was independent of the rows so far."""
        v = self.reduce(vec)
        if not v:
            return False
        col = min(v)
        inv = v[col].inverse()
        self.rows[col] = {k: c * inv for k, c in v.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)


def rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)


def residue(c: RatFuncQ, p: int) -> int:
    """Image of c in Z[q]_(p,q-1) / (p, q-1) = F_p."""
    n, d = c.at(1)
    d %= p
    if d == 0:
        raise ValueError(f"{c} is not in the localisation at (p, q-1)")
    return n * pow(d, -1, p) % p


def rank_mod_p(vectors: Iterable[Mapping], p: int) -> int:
    """Rank of the reduction mod (p, q-1) of vectors with localised entries."""
    pivots: dict = {}
    for vec in vectors:
        v = {k: residue(c, p) for k, c in vec.items()}
        v = {k: c for k, c in v.items() if c}
        while v:
            col = min(v)
            if col not in pivots:
                inv = pow(v[col], -1, p)
                pivots[col] = {k: c * inv % p for k, c in v.items()}
                break
            c = v[col]
            for k, r in pivots[col].items():
                s = (v.get(k, 0) - c * r) % p
                if s:
                    v[k] = s
                else:
                    v.pop(k, None)
    return len(pivots)
