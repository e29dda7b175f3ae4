"""Finite-level Hilbert-space structure on cylinder functions.

Level ``n`` is spanned by the indicators chi_w of admissible words of length
n + 1, with inner product <chi_w, chi_v> = mu(w) [w = v]. The Cuntz-Krieger
operators are the compressions of the weighted shifts to this space; their
matrix entries are square roots of measure ratios, kept exact as surds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exact
from .exact import ZERO, Surd
from .graph import DirectedGraph, TreeBall
from .symbolic import SubshiftSpec, count_words, free_group_rank, free_group_subshift, iter_words

MEASURE_KINDS = ("bernoulli", "tree")
MAX_DENSE_DIM = 4000


def tree_measure(ball: TreeBall, v: str) -> Fraction:
    """Mass of the boundary shadow of vertex ``v``: q^(-d(v)-1)."""
    if v not in ball.distance:
        raise KeyError(f"vertex {v!r} is not in the ball")
    return Fraction(1, ball.q ** (ball.distance[v] + 1))


def tree_additivity_failures(ball: TreeBall) -> list[str]:
    """Interior vertices off the base whose children do not add up to them."""
    bad = []
    for v, d in ball.distance.items():
        if d == 0 or d == ball.depth:
            continue
        kids = ball.children(v)
        if len(kids) != ball.q or sum(tree_measure(ball, c) for c in kids) != tree_measure(ball, v):
            bad.append(v)
    return bad


@dataclass(frozen=True)
class CylinderMeasure:
    """Markov measure with uniform splitting over admissible followers.

    ``kind`` is "bernoulli" (free-group boundary, splitting 1/(2g-1)) or
    "tree" (graph subshift with residue cardinality ``q``). ``delta_H`` is
    carried as a parameter only.
    """

    spec: SubshiftSpec
    kind: str = "bernoulli"
    q: int | None = None
    delta_H: float | None = None

    def __post_init__(self):
        if self.kind not in MEASURE_KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "tree" and (self.q is None or self.q < 2):
            raise ValueError("tree measure needs q >= 2")
        if any(not any(row) for row in self.spec.A):
            raise ValueError("measure needs every letter to have a follower")

    def weight(self, word) -> Fraction:
        if not word:
            return Fraction(1)
        w = Fraction(1, self.spec.size)
        for a in word[:-1]:
            w /= sum(self.spec.A[a])
        return w

    def splitting(self) -> tuple[int, ...]:
        return tuple(sorted({sum(r) for r in self.spec.A}))

    def is_additive(self, word) -> bool:
        return self.weight(word) == sum(self.weight(tuple(word) + (b,)) for b in self.spec.followers(word[-1]))


@dataclass
class CKFamily:
    """Compressed Cuntz-Krieger family on level ``n``.

    ``S_star[i]`` and ``S[i]`` are sparse matrices (row -> {col: Surd}) in
    the chi basis. ``S_star[i] chi_{iu} = sqrt(mu(iu)/mu(u)) sum_a chi_{ua}``
    and ``S[i] = G^-1 S_star[i]^T G``.
    """

    spec: SubshiftSpec
    measure: CylinderMeasure
    n: int
    basis: list = field(init=False)
    S_star: list = field(init=False)
    S: list = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("level must be at least 1")
        if self.measure.spec.A != self.spec.A:
            raise ValueError("measure and subshift disagree")
        self.basis = list(iter_words(self.spec, self.n + 1))
        idx = {w: k for k, w in enumerate(self.basis)}
        self.index = idx
        self.gram = [self.measure.weight(w) for w in self.basis]
        prefixes: dict = {}
        for w in self.basis:
            prefixes.setdefault(w[:-1], []).append(idx[w])
        self.S_star, self.S = [], []
        for i in range(self.spec.size):
            M: dict = {}
            for w in self.basis:
                if w[0] != i:
                    continue
                u = w[1:]
                r = Surd.sqrt(self.measure.weight(w) / self.measure.weight(u))
                for k in prefixes[u]:
                    M.setdefault(k, {})[idx[w]] = r
            self.S_star.append(M)
            self.S.append(self._adjoint(M))

    def _adjoint(self, M: dict) -> dict:
        out: dict = {}
        for k, row in M.items():
            for j, v in row.items():
                out.setdefault(j, {})[k] = v * (self.gram[k] / self.gram[j])
        return out

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def projections(self) -> list[dict]:
        return [exact.mat_mul(self.S[i], self.S_star[i]) for i in range(self.spec.size)]

    @cached_property
    def interior(self) -> dict:
        """Embedding of level n-1 (columns indexed by words of length n)."""
        E: dict = {}
        cols = {}
        for k, w in enumerate(self.basis):
            c = cols.setdefault(w[:-1], len(cols))
            E[k] = {c: exact.ONE}
        return E

    def field(self) -> tuple[int, ...]:
        return exact.field_of(*self.S, *self.S_star)

    def word_operator(self, word) -> dict:
        """S_w = S_{w_0} ... S_{w_k}."""
        M = self.S[word[0]]
        for a in word[1:]:
            M = exact.mat_mul(M, self.S[a])
        return M

    def vertex_projection(self, graph: DirectedGraph, v: str) -> dict:
        P: dict = {}
        for k, w in enumerate(graph.oriented):
            if graph.source(w) == v:
                P = exact.mat_add(P, self.projections[k])
        return P

    def summand(self, i: int) -> dict:
        """sum_j A_ij S_j S_j*."""
        Q: dict = {}
        for j in self.spec.followers(i):
            Q = exact.mat_add(Q, self.projections[j])
        return Q

    def check(self, graph: DirectedGraph | None = None) -> CKReport:
        size = self.spec.size
        total: dict = {}
        for P in self.projections:
            total = exact.mat_add(total, P)
        ck1 = exact.is_identity(total, self.dim)
        E = self.interior
        ck2 = True
        partial = True
        proj = True
        for i in range(size):
            lhs = exact.mat_mul(exact.mat_mul(self.S_star[i], self.S[i]), E)
            rhs = exact.mat_mul(self.summand(i), E)
            ck2 &= exact.is_zero(exact.mat_add(lhs, rhs, -1))
            SSS = exact.mat_mul(self.projections[i], self.S[i])
            partial &= exact.is_zero(exact.mat_add(SSS, self.S[i], -1))
            P = self.projections[i]
            proj &= _is_diag_01(P)
        orth = all(
            not (set(_diag_support(self.projections[i])) & set(_diag_support(self.projections[j])))
            for i in range(size)
            for j in range(i)
        )
        vertex = None
        if graph is not None:
            vs = [self.vertex_projection(graph, v) for v in graph.vertices]
            tot: dict = {}
            for P in vs:
                tot = exact.mat_add(tot, P)
            vertex = all(_is_diag_01(P) for P in vs) and exact.is_identity(tot, self.dim)
        return CKReport(self.n, self.dim, ck1, ck2, partial, proj and orth, vertex, self.field())

    def orthonormal(self, i: int, adjoint: bool = False) -> np.ndarray:
        """Dense float matrix of S_i (or S_i*) in the basis chi_w / sqrt(mu(w))."""
        if self.dim > MAX_DENSE_DIM:
            raise ValueError(f"dimension {self.dim} too large for a dense probe")
        M = self.S_star[i] if adjoint else self.S[i]
        out = np.zeros((self.dim, self.dim))
        root = [math.sqrt(float(g)) for g in self.gram]
        for r, row in M.items():
            for c, v in row.items():
                out[r, c] = float(v) * root[r] / root[c]
        return out


def _diag_support(P: dict) -> list[int]:
    return [i for i, r in P.items() if r.get(i, ZERO) == 1]


def _is_diag_01(P: dict) -> bool:
    return all(j == i and v == 1 for i, r in P.items() for j, v in r.items())


@dataclass(frozen=True)
class CKReport:
    n: int
    dim: int
    ck1: bool
    ck2: bool
    partial_isometry: bool
    projections: bool
    vertex_projections: bool | None
    field: tuple[int, ...]

    @property
    def exact(self) -> bool:
        ok = self.ck1 and self.ck2 and self.partial_isometry and self.projections
        return ok and self.vertex_projections is not False

    def to_dict(self) -> dict:
        return {
            "level": self.n,
            "dim": self.dim,
            "ck1": self.ck1,
            "ck2": self.ck2,
            "partial_isometry": self.partial_isometry,
            "projections": self.projections,
            "vertex_projections": self.vertex_projections,
            "field": ["sqrt(%d)" % r for r in self.field],
            "exact": self.exact,
        }


def ck_family(spec: SubshiftSpec, measure: CylinderMeasure, n: int) -> CKFamily:
    if measure.spec.size != spec.size:
        raise ValueError("measure dimension does not match the alphabet")
    return CKFamily(spec, measure, n)


# spectral models

TRANSCENDENTALS = ("1", "2pi_over_log_q")


@dataclass(frozen=True)
class Scale:
    num: int = 1
    den: int = 1
    transcendental: str = "1"
    q: int | None = None

    def __post_init__(self):
        if self.transcendental not in TRANSCENDENTALS:
            raise ValueError(f"unknown transcendental {self.transcendental!r}")
        if self.transcendental != "1" and (self.q is None or self.q < 2):
            raise ValueError("2pi_over_log_q scale needs q >= 2")

    @property
    def value(self) -> float:
        base = 1.0 if self.transcendental == "1" else 2 * math.pi / math.log(self.q)
        return self.num / self.den * base

    def to_dict(self) -> dict:
        return {"num": self.num, "den": self.den, "transcendental": self.transcendental}


@dataclass(frozen=True)
class Side:
    """Lines lambda_n = scale * sign * (n + offset), n >= 0."""

    name: str
    sign: int
    offset: int
    multiplicity: int | None = None  # None: use dims of the cylinder filtration
    spec: SubshiftSpec | None = None

    def lambda_int(self, n: int) -> int:
        return self.sign * (n + self.offset)

    def mult(self, n: int) -> int:
        if self.multiplicity is not None:
            return self.multiplicity
        if self.spec is None:
            raise ValueError("side has neither a multiplicity nor a subshift")
        lower = count_words(self.spec, n) if n >= 1 else 0
        return count_words(self.spec, n + 1) - lower


@dataclass(frozen=True)
class SpectralModel:
    name: str
    scale: Scale
    sides: tuple[Side, ...]
    params: tuple = ()

    def side(self, name: str) -> Side:
        for s in self.sides:
            if s.name == name:
                return s
        raise KeyError(name)

    def eigenvalue(self, side: Side, n: int) -> float:
        return self.scale.value * side.lambda_int(n)

    def lines(self, nmax: int) -> list[dict]:
        out = []
        for side in self.sides:
            for n in range(nmax + 1):
                out.append({"n": n, "lambda_int": side.lambda_int(n), "mult": side.mult(n), "side": side.name})
        return out

    def spectrum_ints(self, nmax: int) -> list[int]:
        return sorted(l["lambda_int"] for l in self.lines(nmax))

    def to_dict(self, nmax: int) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "scale": self.scale.to_dict(),
            "lines": self.lines(nmax),
        }


DIRAC_KINDS = ("arch_L", "arch_H", "nonarch_H")
V_KINDS = ("arch_V", "arch_V_Finf", "nonarch_V")


def _nonarch_scale(q, R) -> Scale:
    if q is None or q < 2:
        raise ValueError("non-archimedean models need q >= 2")
    if R < 1:
        raise ValueError("R must be at least 1")
    return Scale(1, R, "2pi_over_log_q", q)


def dirac_model(kind: str, g: int | None = None, spec: SubshiftSpec | None = None, q: int | None = None, R: int = 1) -> SpectralModel:
    """Grading-operator spectra with multiplicities dim P_n - dim P_{n-1}."""
    if spec is None:
        if g is None:
            raise ValueError("need g or a subshift")
        spec = free_group_subshift(g)
    params = (("g", g if g is not None else free_group_rank(spec)),)
    if kind == "arch_L":
        return SpectralModel(kind, Scale(), (Side("L", 1, 0, None, spec),), params)
    if kind == "arch_H":
        return SpectralModel(kind, Scale(), (Side("plus", 1, 1, None, spec), Side("minus", -1, 0, None, spec)), params)
    if kind == "nonarch_H":
        scale = _nonarch_scale(q, R)
        sides = (Side("minus", -1, 1, None, spec), Side("plus", 1, 0, None, spec))
        return SpectralModel(kind, scale, sides, params + (("q", q), ("R", R)))
    raise ValueError(f"unknown Dirac model {kind!r}")


def v_multiplicity_model(kind: str, g: int, q: int | None = None, R: int = 1) -> SpectralModel:
    """Spectra restricted to the cohomology subspace, constant multiplicity."""
    if g < 1:
        raise ValueError("g must be at least 1")
    params = (("g", g),)
    if kind == "arch_V":
        return SpectralModel(kind, Scale(), (Side("V", -1, 0, 2 * g),), params)
    if kind == "arch_V_Finf":
        return SpectralModel(kind, Scale(), (Side("V", -1, 0, g),), params)
    if kind == "nonarch_V":
        scale = _nonarch_scale(q, R)
        sides = (Side("minus", -1, 1, g), Side("plus", 1, 0, g))
        return SpectralModel(kind, scale, sides, params + (("q", q), ("R", R)))
    raise ValueError(f"unknown V model {kind!r}")


def graph_genus(graph: DirectedGraph) -> int:
    return graph.betti_number()


@dataclass(frozen=True)
class SignReport:
    squares_to_identity: bool
    commutes_with_abs_D: bool
    commutator_norm: float


def sign_operator_check(model: SpectralModel, nmax: int) -> SignReport:
    """F swaps the two sides of a two-sided model; test F^2 = 1 and [F, |D|]."""
    if len(model.sides) != 2:
        raise ValueError("sign operator needs a two-sided model")
    a, b = model.sides
    F = np.array([[0, 1], [1, 0]])
    worst = 0.0
    for n in range(nmax + 1):
        absD = np.diag([abs(model.eigenvalue(a, n)), abs(model.eigenvalue(b, n))])
        worst = max(worst, float(np.linalg.norm(F @ absD - absD @ F, 2)))
    sq = bool((F @ F == np.eye(2)).all())
    return SignReport(sq, worst == 0.0, worst)


def _filtration_projections(family: CKFamily) -> list[np.ndarray]:
    """Orthogonal projections Pi_k onto level k < n inside level n (orthonormal basis)."""
    mats = []
    root = np.sqrt([float(g) for g in family.gram])
    for k in range(family.n):
        groups: dict = {}
        for idx, w in enumerate(family.basis):
            groups.setdefault(w[: k + 1], []).append(idx)
        P = np.zeros((family.dim, family.dim))
        for members in groups.values():
            v = np.zeros(family.dim)
            v[members] = root[members]
            P += np.outer(v, v) / (v @ v)
        mats.append(P)
    return mats


def grading_operator(family: CKFamily, model: SpectralModel, side: Side) -> np.ndarray:
    """D = sum_k lambda(k) (Pi_k - Pi_{k-1}) on level n."""
    Pis = _filtration_projections(family) + [np.eye(family.dim)]
    D = np.zeros((family.dim, family.dim))
    prev = np.zeros_like(D)
    for k, P in enumerate(Pis):
        D += model.eigenvalue(side, k) * (P - prev)
        prev = P
    return D


@dataclass(frozen=True)
class ProbeRow:
    level: int
    norms: tuple[float, ...]  # max over letters of ||[D, S_i]|| and ||[D, S_i*]||
    max_norm: float
    ratio: float | None


def commutator_probe(spec: SubshiftSpec, measure: CylinderMeasure, model: SpectralModel | None, levels) -> list[ProbeRow]:
    """Spectral norms of [D, S_i] on truncations; ``model=None`` means D = 0."""
    rows = []
    prev = None
    for n in levels:
        fam = ck_family(spec, measure, n)
        sides = () if model is None else model.sides
        Ds = [grading_operator(fam, model, s) for s in sides]
        norms = []
        for i in range(spec.size):
            S = fam.orthonormal(i)
            best = 0.0
            for D in Ds:
                best = max(best, float(np.linalg.norm(D @ S - S @ D, 2)))
            norms.append(best)
        top = max(norms) if norms else 0.0
        ratio = None if prev is None or prev == 0 else top / prev
        rows.append(ProbeRow(n, tuple(norms), top, ratio))
        prev = top
    return rows
