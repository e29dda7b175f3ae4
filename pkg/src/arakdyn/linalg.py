"""Exact integer linear algebra: rank and Smith invariants of sparse matrices.

Matrices are given as a list of sparse rows ``{column: int}``. Unit pivots
are eliminated sparsely (row operations over Z with a +-1 pivot never
introduce denominators); whatever is left without a unit entry is handed
to a dense Smith normal form.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True)
class IntegerReduction:
    rank: int
    divisors: tuple[int, ...]  # nontrivial elementary divisors (> 1)

    @property
    def torsion_free_cokernel(self) -> bool:
        return not self.divisors


def smith_normal_form(M: list[list[int]]) -> list[list[int]]:
    """Dense Smith normal form; returns the diagonal matrix D = U M V."""
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for r in A:
            r[t], r[pj] = r[pj], r[t]
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for r in A:
                        r[j] -= q * r[t]
                    if A[t][j]:
                        done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            nz = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            nz += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, pi, pj = min(nz)
            A[t], A[pi] = A[pi], A[t]
            for r in A:
                r[t], r[pj] = r[pj], r[t]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
        t += 1
    return A


def elementary_divisors(M: list[list[int]]) -> list[int]:
    D = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def reduce_sparse(rows: list[dict[int, int]]) -> IntegerReduction:
    """Rank over Z (equivalently over Q) and nonunit Smith invariants."""
    rows = {k: {c: v for c, v in r.items() if v} for k, r in enumerate(rows)}
    rows = {k: r for k, r in rows.items() if r}
    cols: dict[int, set[int]] = {}
    for k, r in rows.items():
        for c in r:
            cols.setdefault(c, set()).add(k)
    heap = [(len(r), k) for k, r in rows.items()]
    heapq.heapify(heap)
    rank = 0
    stalled = []
    while heap:
        size, k = heapq.heappop(heap)
        r = rows.get(k)
        if r is None or len(r) != size:
            continue
        units = [c for c, v in r.items() if v in (1, -1)]
        if not units:
            stalled.append(k)
            continue
        c = min(units, key=lambda x: len(cols[x]))
        p = r[c]
        del rows[k]
        for cc in r:
            cols[cc].discard(k)
        for other in list(cols[c]):
            ro = rows[other]
            f = ro[c] * p  # p = +-1 so ro[c] / p == ro[c] * p
            for cc, v in r.items():
                nv = ro.get(cc, 0) - f * v
                if nv:
                    if cc not in ro:
                        cols[cc].add(other)
                    ro[cc] = nv
                elif cc in ro:
                    del ro[cc]
                    cols[cc].discard(other)
            if ro:
                heapq.heappush(heap, (len(ro), other))
            else:
                del rows[other]
        rank += 1
    rest = [rows[k] for k in rows]
    if not rest:
        return IntegerReduction(rank, ())
    used = sorted({c for r in rest for c in r})
    pos = {c: i for i, c in enumerate(used)}
    dense = [[0] * len(used) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][pos[c]] = v
    divs = elementary_divisors(dense)
    return IntegerReduction(rank + len(divs), tuple(d for d in divs if d != 1))


def sparse_rank(rows: list[dict[int, int]]) -> int:
    return reduce_sparse(rows).rank


def content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
