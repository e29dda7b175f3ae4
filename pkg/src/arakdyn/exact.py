"""Exact arithmetic in multi-quadratic fields Q(sqrt d1, sqrt d2, ...) and
sparse matrices over it."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import factorint


@lru_cache(maxsize=None)
def squarefree_split(n: int) -> tuple[int, int]:
    """Write n = k**2 * s with s squarefree; return (s, k)."""
    if n <= 0:
        raise ValueError("need a positive integer")
    s = k = 1
    for p, e in factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, k


class Surd:
    """Element sum_r c_r * sqrt(r) with squarefree radicands r and rational c_r."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {1: Fraction(terms)} if terms else {}
        self.terms = {r: c for r, c in terms.items() if c}

    @classmethod
    def sqrt(cls, x) -> Surd:
        x = Fraction(x)
        if x < 0:
            raise ValueError("square root of a negative rational")
        if x == 0:
            return cls()
        s, k = squarefree_split(x.numerator * x.denominator)
        return cls({s: Fraction(k, x.denominator)})

    def _coerce(self, other) -> Surd:
        return other if isinstance(other, Surd) else Surd(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for r, c in other.terms.items():
            out[r] = out.get(r, 0) + c
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({r: -c for r, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[int, Fraction] = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                g = math.gcd(r1, r2)
                r = (r1 // g) * (r2 // g)
                out[r] = out.get(r, 0) + c1 * c2 * g
        return Surd(out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return not (self - self._coerce(other)).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __float__(self):
        return float(sum(float(c) * math.sqrt(r) for r, c in self.terms.items()))

    def radicands(self) -> set[int]:
        return set(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for r in sorted(self.terms):
            c = self.terms[r]
            parts.append(f"{c}" if r == 1 else f"{c}*sqrt({r})")
        return " + ".join(parts)


ZERO = Surd()
ONE = Surd(1)

# Sparse matrices are dicts row -> {col: value}; vectors are dicts index -> value.


def mat_vec(M: dict, x: dict) -> dict:
    out: dict = {}
    for i, row in M.items():
        acc = ZERO
        hit = False
        for j, v in row.items():
            xj = x.get(j)
            if xj is not None:
                acc = acc + v * xj
                hit = True
        if hit and acc:
            out[i] = acc
    return out


def transpose(M: dict) -> dict:
    out: dict = {}
    for i, row in M.items():
        for j, v in row.items():
            out.setdefault(j, {})[i] = v
    return out


def mat_mul(M: dict, N: dict) -> dict:
    out: dict = {}
    for i, row in M.items():
        acc: dict = {}
        for k, v in row.items():
            for j, w in N.get(k, {}).items():
                acc[j] = acc.get(j, ZERO) + v * w
        acc = {j: v for j, v in acc.items() if v}
        if acc:
            out[i] = acc
    return out


def mat_add(M: dict, N: dict, scale=1) -> dict:
    out = {i: dict(r) for i, r in M.items()}
    for i, row in N.items():
        tgt = out.setdefault(i, {})
        for j, v in row.items():
            tgt[j] = tgt.get(j, ZERO) + v * scale
    return {i: {j: v for j, v in r.items() if v} for i, r in out.items() if any(r.values())}


def vec_add(x: dict, y: dict, scale=1) -> dict:
    out = dict(x)
    for j, v in y.items():
        out[j] = out.get(j, ZERO) + v * scale
    return {j: v for j, v in out.items() if v}


def is_zero(M: dict) -> bool:
    return all(not v for r in M.values() for v in r.values())


def is_identity(M: dict, dim: int) -> bool:
    for i in range(dim):
        if M.get(i, {}).get(i, ZERO) != 1:
            return False
    return all(not v for i, r in M.items() for j, v in r.items() if i != j)


def field_of(*mats) -> tuple[int, ...]:
    """Squarefree radicands (other than 1) occurring in the given matrices."""
    rads: set[int] = set()
    for M in mats:
        for r in M.values():
            for v in r.values():
                rads |= v.radicands()
    return tuple(sorted(rads - {1}))
