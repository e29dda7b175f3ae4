"""Mapping torus of the shift on walks and its map onto the dual graph.

A point of the torus is ``(omega, tau)`` with the identification
``(omega, tau + 1) ~ (T omega, tau)``; the canonical form keeps
``0 <= t < 1`` and records which coordinate of the stored window is
coordinate zero (the ``origin``). Letters are indices into the oriented
edges of the graph, in its orientation order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .graph import DirectedGraph, TreeBall, directed_edge_matrix, letter_name, walks
from .symbolic import SubshiftSpec, Word, min_rotation


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**9)


@dataclass(frozen=True)
class TorusPoint:
    word: Word
    origin: int
    t: Fraction

    def __post_init__(self):
        if not 0 <= self.t < 1:
            raise ValueError("t must lie in [0, 1)")
        if not self.word.cyclic and not 0 <= self.origin < len(self.word.letters):
            raise ValueError("origin falls outside the finite window")

    @classmethod
    def at(cls, word: Word, tau) -> TorusPoint:
        """Canonical form of (omega, tau) where omega_i = word[i]."""
        tau = _frac(tau)
        k = math.floor(tau)
        origin = k % len(word.letters) if word.cyclic else k
        return cls(word, origin, tau - k)

    @property
    def letter(self) -> int:
        return self.word.letters[self.origin]


def shift_word(word: Word) -> Word:
    """T on a stored window: coordinate i of the result is coordinate i+1."""
    if word.cyclic:
        return Word(word.letters[1:] + word.letters[:1], True)
    if len(word.letters) < 2:
        raise ValueError("window too short to shift")
    return Word(word.letters[1:], False)


@dataclass(frozen=True)
class EdgePoint:
    letter: int  # oriented edge index
    t: Fraction

    def location(self, graph: DirectedGraph) -> tuple:
        """Point of the geometric realization: ("edge", id, s) or ("vertex", v).

        The oriented edge (e, -1) at parameter t is the point e(1 - t).
        """
        e, eps = graph.letter(self.letter)
        s = self.t if eps > 0 else 1 - self.t
        src, dst = graph._ends(e)
        if s == 0:
            return ("vertex", src)
        if s == 1:
            return ("vertex", dst)
        return ("edge", e, s)

    def name(self, graph: DirectedGraph) -> str:
        return letter_name(*graph.letter(self.letter))


def _check_word(word: Word, spec: SubshiftSpec):
    if not spec.admissible(word.letters, cyclic=word.cyclic):
        raise ValueError("word is not admissible in the graph")


def eval_E_bar(point: TorusPoint, graph: DirectedGraph, spec: SubshiftSpec | None = None) -> EdgePoint:
    spec = spec or directed_edge_matrix(graph)
    _check_word(point.word, spec)
    return EdgePoint(point.letter, point.t)


@dataclass(frozen=True)
class Cylinder:
    letter: int
    t: Fraction


@dataclass(frozen=True)
class Fiber:
    point: EdgePoint
    cylinders: tuple[Cylinder, ...]

    def contains(self, p: TorusPoint) -> bool:
        return any(p.letter == c.letter and p.t == c.t for c in self.cylinders)

    def to_dict(self, graph: DirectedGraph) -> dict:
        return {
            "edge": self.point.name(graph),
            "t": float(self.point.t),
            "cylinders": [{"letter": letter_name(*graph.letter(c.letter)), "t": float(c.t)} for c in self.cylinders],
        }


def fiber(point: EdgePoint, graph: DirectedGraph) -> Fiber:
    """Preimage of an edge point: cylinder {w_0 = w} at t and {w_0 = iota w} at 1 - t.

    At t = 0 the second cylinder would sit at t = 1, which the canonical form
    writes on the following letter; only the first cylinder is kept there.
    """
    w = graph.letter(point.letter)
    bar = graph.index(graph.iota(w))
    cyl = [Cylinder(point.letter, point.t)]
    if point.t != 0:
        cyl.append(Cylinder(bar, 1 - point.t))
    return Fiber(point, tuple(cyl))


def random_window(spec: SubshiftSpec, length: int, rng: random.Random) -> Word:
    letters = [rng.randrange(spec.size)]
    while len(letters) < length:
        nxt = spec.followers(letters[-1])
        if not nxt:
            break
        letters.append(rng.choice(nxt))
    return Word(tuple(letters), False)


@dataclass(frozen=True)
class SuspensionReport:
    samples: int
    equivariance_failures: int
    section_failures: int
    closure_failures: int

    @property
    def ok(self) -> bool:
        return not (self.equivariance_failures or self.section_failures or self.closure_failures)


def sample_check(graph: DirectedGraph, samples: int = 1000, seed: int = 0, window: int = 8) -> SuspensionReport:
    """Random checks of equivariance, the section property and fiber closure."""
    spec = directed_edge_matrix(graph)
    rng = random.Random(seed)
    eq = sec = clo = 0
    for _ in range(samples):
        word = random_window(spec, window, rng)
        n = len(word.letters)
        if n < 2:
            continue
        tau = Fraction(rng.randrange(1000 * (n - 1)), 1000)
        shifted = TorusPoint.at(shift_word(word), tau - 1) if tau >= 1 else None
        p = TorusPoint.at(word, tau)
        ep = eval_E_bar(p, graph, spec)
        if shifted is not None:
            other = eval_E_bar(shifted, graph, spec)
            eq += other.location(graph) != ep.location(graph)
        F = fiber(ep, graph)
        sec += not F.contains(p)
        for c in F.cylinders:
            member = TorusPoint(_window_through(spec, c.letter, rng), 0, c.t)
            clo += eval_E_bar(member, graph, spec).location(graph) != ep.location(graph)
    return SuspensionReport(samples, eq, sec, clo)


def _window_through(spec: SubshiftSpec, letter: int, rng: random.Random, length: int = 4) -> Word:
    letters = [letter]
    while len(letters) < length and spec.followers(letters[-1]):
        letters.append(rng.choice(spec.followers(letters[-1])))
    return Word(tuple(letters), False)


def surjectivity_check(graph: DirectedGraph, eps: Fraction = Fraction(1, 10), window: int = 3) -> dict:
    """Every grid point k*eps of every edge is hit by some window walk."""
    steps = int(1 / eps)
    targets = set()
    for e, src, dst in graph.edges:
        for k in range(steps + 1):
            s = k * eps
            targets.add(("vertex", src) if s == 0 else ("vertex", dst) if s == 1 else ("edge", e, s))
    hit = set()
    spec = directed_edge_matrix(graph)
    for w in walks(graph, window):
        word = Word(w, False)
        for origin in range(window):
            for k in range(steps):
                hit.add(eval_E_bar(TorusPoint(word, origin, k * eps), graph, spec).location(graph))
    missing = sorted(targets - hit, key=repr)
    return {"targets": len(targets), "hit": len(targets & hit), "missing": [list(map(str, m)) for m in missing]}


WALK_CLASSES = ("confined", "escapes-forward", "escapes-backward", "escapes-both", "disjoint")


def classify_walk(walk, ball: TreeBall) -> str:
    """Place a window walk of the quotient ball into the walk decomposition."""
    graph = ball.graph
    spec = directed_edge_matrix(graph)
    letters = tuple(walk)
    if not letters or not spec.admissible(letters):
        raise ValueError("walk is not admissible in the ball")
    marks = "".join("B" if ball.in_base(graph.letter(a)) else "P" for a in letters)
    core = marks.strip("P")
    if not core:
        return "disjoint"
    if "P" in core:
        raise ValueError("walk re-enters the base after leaving it")
    before = marks.startswith("P")
    after = marks.endswith("P")
    if before and after:
        return "escapes-both"
    if after:
        return "escapes-forward"
    if before:
        return "escapes-backward"
    return "confined"


def orbit_geodesic(word: Word, spec: SubshiftSpec | None = None) -> tuple[int, ...]:
    """Label of the closed geodesic of a cyclic word: its minimal rotation."""
    if not word.cyclic:
        raise ValueError("closed geodesics come from cyclic words")
    if spec is not None and not spec.admissible(word.letters, cyclic=True):
        raise ValueError("word is not cyclically admissible")
    return min_rotation(word.letters)
