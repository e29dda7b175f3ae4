"""Directed graphs with involutive orientation, genus-2 dual-graph presets,
truncated Bruhat-Tits balls and walk spaces.

An oriented edge is a pair ``(edge_id, +1 | -1)``. The letter name of
``(e, +1)`` is ``e`` and that of ``(e, -1)`` is ``e~``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .symbolic import Alphabet, BudgetExceeded, SubshiftSpec, count_words, enumeration_budget, iter_words

PRESETS = ("rose2", "theta", "dumbbell")


def letter_name(edge: str, eps: int) -> str:
    return edge if eps > 0 else edge + "~"


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (id, src, dst) of the positive orientation
    orientation: tuple[tuple[str, int], ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _ends_map: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        ids = [e[0] for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("edge ids must be unique")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex ids must be unique")
        vs = set(self.vertices)
        for eid, src, dst in self.edges:
            if src not in vs or dst not in vs:
                raise ValueError(f"edge {eid} has an endpoint outside the vertex set")
        if not self.orientation:
            order = tuple((e, 1) for e in ids) + tuple((e, -1) for e in ids)
            object.__setattr__(self, "orientation", order)
        elif sorted(self.orientation) != sorted([(e, s) for e in ids for s in (1, -1)]):
            raise ValueError("orientation must list every oriented edge exactly once")
        object.__setattr__(self, "_index", {w: k for k, w in enumerate(self.orientation)})
        object.__setattr__(self, "_ends_map", {e: (s, d) for e, s, d in self.edges})

    @property
    def oriented(self) -> tuple[tuple[str, int], ...]:
        return self.orientation

    @property
    def positive(self) -> tuple[tuple[str, int], ...]:
        return tuple(w for w in self.orientation if w[1] == 1)

    def _ends(self, eid: str) -> tuple[str, str]:
        return self._ends_map[eid]

    def source(self, w: tuple[str, int]) -> str:
        src, dst = self._ends(w[0])
        return src if w[1] > 0 else dst

    def range(self, w: tuple[str, int]) -> str:
        src, dst = self._ends(w[0])
        return dst if w[1] > 0 else src

    def iota(self, w: tuple[str, int]) -> tuple[str, int]:
        return (w[0], -w[1])

    def index(self, w: tuple[str, int]) -> int:
        return self._index[w]

    def letter(self, k: int) -> tuple[str, int]:
        return self.orientation[k]

    def names(self) -> tuple[str, ...]:
        return tuple(letter_name(e, s) for e, s in self.orientation)

    def out_degree(self, v: str) -> int:
        return sum(1 for w in self.orientation if self.source(w) == v)

    def components(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, src, dst in self.edges:
            parent[find(src)] = find(dst)
        return len({find(v) for v in self.vertices})

    def betti_number(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components()

    def is_tree(self) -> bool:
        return self.components() == 1 and len(self.edges) == len(self.vertices) - 1

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e, "src": s, "dst": d} for e, s, d in self.edges],
            "orientation": [list(w) for w in self.orientation],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> DirectedGraph:
        edges = tuple((str(e["id"]), str(e["src"]), str(e["dst"])) for e in data["edges"])
        orientation = tuple((str(w[0]), int(w[1])) for w in data.get("orientation") or ())
        return cls(tuple(str(v) for v in data["vertices"]), edges, orientation)

    @classmethod
    def from_json(cls, text: str) -> DirectedGraph:
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{s}" -> "{d}" [label="{e}"];' for e, s, d in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def directed_edge_matrix(graph: DirectedGraph, require_sink_free: bool = False) -> SubshiftSpec:
    """Subshift on oriented edges: ``w_i w_j`` admissible iff
    ``r(w_i) = s(w_j)`` and ``w_j != iota(w_i)``."""
    E = graph.oriented
    A = tuple(
        tuple(int(graph.range(wi) == graph.source(wj) and wj != graph.iota(wi)) for wj in E)
        for wi in E
    )
    if require_sink_free:
        dead = [letter_name(*w) for w, row in zip(E, A) if not any(row)]
        if dead:
            raise ValueError(f"graph has dead-end oriented edges: {dead}")
    pairing = tuple(graph.index(graph.iota(w)) for w in E)
    return SubshiftSpec(Alphabet(graph.names(), pairing), A)


def mumford_genus2_preset(case: int | str) -> DirectedGraph:
    """Dual graphs of the three genus-2 split degenerate fibers.

    1 / "rose2": one vertex with two loops. 2 / "theta": two vertices joined
    by three edges. 3 / "dumbbell": two loops joined by a bridge.
    Orientations are chosen so the edge matrices match the printed ones with
    letter order ``a, b, c, a~, b~, c~``.
    """
    key = {1: "rose2", 2: "theta", 3: "dumbbell"}.get(case, case)
    if key == "rose2":
        return DirectedGraph(("v",), (("a", "v", "v"), ("b", "v", "v")))
    if key == "theta":
        return DirectedGraph(("u", "v"), (("a", "u", "v"), ("b", "v", "u"), ("c", "u", "v")))
    if key == "dumbbell":
        return DirectedGraph(("u", "v"), (("a", "u", "v"), ("b", "u", "u"), ("c", "v", "v")))
    raise ValueError(f"unknown genus-2 case {case!r}")


def walks(graph: DirectedGraph, n: int) -> list[tuple[int, ...]]:
    """All admissible sequences of ``n`` oriented edges, lexicographic in the
    orientation order."""
    if n < 1:
        raise ValueError("walk length must be at least 1")
    spec = directed_edge_matrix(graph)
    limit = enumeration_budget()
    if count_words(spec, n) > limit:
        raise BudgetExceeded(f"more than {limit} walks of length {n}")
    return list(iter_words(spec, n))


@dataclass(frozen=True)
class TreeBall:
    graph: DirectedGraph
    base: DirectedGraph
    q: int
    depth: int
    distance: dict  # vertex id -> d(v, base)

    def in_base(self, w: tuple[str, int]) -> bool:
        return w[0] in {e for e, _, _ in self.base.edges}

    def children(self, v: str) -> list[str]:
        d = self.distance[v]
        out = []
        for e, src, dst in self.graph.edges:
            if src == v and self.distance[dst] == d + 1:
                out.append(dst)
        return out

    def vertices_at(self, d: int) -> list[str]:
        return [v for v in self.graph.vertices if self.distance[v] == d]


def _grow(base: DirectedGraph, q: int, n: int) -> TreeBall:
    if q < 2:
        raise ValueError("q must be at least 2")
    if n < 0:
        raise ValueError("depth must be nonnegative")
    for eid, _, _ in base.edges:
        if "/" in eid:
            raise ValueError("base edge ids may not contain '/'")
    vertices = list(base.vertices)
    edges = list(base.edges)
    distance = {v: 0 for v in base.vertices}
    frontier = []
    for v in base.vertices:
        deg = base.out_degree(v)
        if deg > q + 1:
            raise ValueError(f"vertex {v} has degree {deg} > q+1 = {q + 1}")
        frontier.append((v, q + 1 - deg))
    for d in range(1, n + 1):
        nxt = []
        for parent, k in frontier:
            for j in range(k):
                child = f"{parent}/{j}"
                vertices.append(child)
                edges.append((child, parent, child))
                distance[child] = d
                nxt.append((child, q))
        frontier = nxt
    return TreeBall(DirectedGraph(tuple(vertices), tuple(edges)), base, q, n, distance)


def tree_ball(base: DirectedGraph, q: int, n: int) -> TreeBall:
    """The ball of radius ``n`` around a finite subtree of the (q+1)-regular tree."""
    if not base.is_tree():
        raise ValueError("base must be a finite tree")
    return _grow(base, q, n)


def quotient_ball(base: DirectedGraph, q: int, n: int) -> TreeBall:
    """Model of the quotient of the radius-``n`` neighborhood by the Schottky
    group: the finite graph ``base`` with pendant (q+1)-regular trees grown
    to depth ``n`` at every vertex."""
    return _grow(base, q, n)


def path_graph(k: int) -> DirectedGraph:
    """Path with ``k`` edges; a convenient tree base."""
    vs = tuple(f"p{i}" for i in range(k + 1))
    return DirectedGraph(vs, tuple((f"e{i}", vs[i], vs[i + 1]) for i in range(k)))


def load_graph(path: str) -> DirectedGraph:
    with open(path, encoding="utf-8") as fh:
        return DirectedGraph.from_json(fh.read())


def block_form(spec: SubshiftSpec, npos: int) -> tuple[list, list, list, list]:
    """Split an oriented-edge matrix into its positive/negative blocks."""
    A = [list(r) for r in spec.A]
    a11 = [r[:npos] for r in A[:npos]]
    a12 = [r[npos:] for r in A[:npos]]
    a21 = [r[:npos] for r in A[npos:]]
    a22 = [r[npos:] for r in A[npos:]]
    return a11, a12, a21, a22


def transpose(M: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(c) for c in zip(*M)]
