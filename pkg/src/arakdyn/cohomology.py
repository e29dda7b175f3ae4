"""Filtered dynamical (co)homology of a subshift of finite type.

Level ``n`` of the filtration is the free module of integer functions of the
first ``n + 1`` coordinates, with basis the indicators of admissible words
of length ``n + 1``. The coboundary ``delta = 1 - T`` sends such a function
``f`` to ``(delta f)(a_0..a_{n+1}) = f(a_0..a_n) - f(a_1..a_{n+1})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from sympy import divisors, mobius

from .linalg import IntegerReduction, reduce_sparse
from .symbolic import (
    IntegralityError,
    SubshiftSpec,
    Word,
    count_words,
    free_group_rank,
    iter_words,
    trace_power,
)


@dataclass(frozen=True)
class RankPair:
    formula: int | None
    computed: int

    @property
    def match(self) -> bool:
        return self.formula == self.computed


def theta(spec: SubshiftSpec, n: int) -> int:
    """Number of admissible words of length n + 1 (one empty word for n = -1)."""
    return 1 if n == -1 else count_words(spec, n + 1)


@dataclass
class FiltrationLevel:
    spec: SubshiftSpec
    n: int
    basis: list = field(init=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("level must be nonnegative")
        self.basis = list(iter_words(self.spec, self.n + 1))

    @cached_property
    def index(self) -> dict:
        return {w: i for i, w in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def previous(self) -> FiltrationLevel | None:
        return FiltrationLevel(self.spec, self.n - 1) if self.n else None

    @cached_property
    def delta_rows(self) -> list[dict[int, int]]:
        """Matrix of delta from level n-1 into level n, one sparse row per
        basis word of level n (columns index level n-1)."""
        prev = self.previous
        if prev is None:
            return []
        rows = []
        for w in self.basis:
            row: dict[int, int] = {}
            a, b = prev.index[w[:-1]], prev.index[w[1:]]
            row[a] = row.get(a, 0) + 1
            row[b] = row.get(b, 0) - 1
            rows.append({c: v for c, v in row.items() if v})
        return rows

    def inclusion_rows(self) -> list[dict[int, int]]:
        """Matrix of the inclusion of level n-1 into level n (refinement)."""
        prev = self.previous
        if prev is None:
            return []
        return [{prev.index[w[:-1]]: 1} for w in self.basis]

    def delta_apply(self, h: dict) -> dict:
        """Apply delta to a function of n coordinates, given as word -> value."""
        out = {}
        for w in self.basis:
            v = h.get(w[:-1], 0) - h.get(w[1:], 0)
            if v:
                out[w] = v
        return out

    def embed(self, f: dict) -> dict:
        """View a function of fewer coordinates as an element of this level."""
        k = len(next(iter(f))) if f else self.n + 1
        return {w: f[w[:k]] for w in self.basis if f.get(w[:k], 0)}

    @cached_property
    def delta_reduction(self) -> IntegerReduction:
        return reduce_sparse(self.delta_rows)


def filtration_formula(spec: SubshiftSpec, n: int) -> int:
    g = free_group_rank(spec)
    if g is not None:
        return 2 * g if n == 0 else 2 * g * (2 * g - 1) ** (n - 1) * (2 * g - 2) + 1
    return theta(spec, n) - theta(spec, n - 1) + 1


def filtration_rank(spec: SubshiftSpec, n: int) -> RankPair:
    """Rank of F_n = P_n / delta P_{n-1}: closed formula against exact rank."""
    level = FiltrationLevel(spec, n)
    computed = level.dim - level.delta_reduction.rank
    return RankPair(filtration_formula(spec, n), computed)


def cokernel_torsion(spec: SubshiftSpec, n: int) -> tuple[int, ...]:
    return FiltrationLevel(spec, n).delta_reduction.divisors


def graded_quotient(spec: SubshiftSpec, n: int) -> IntegerReduction:
    """Smith data of F_{n+1}/F_n = P_{n+1} / (delta P_n + P_n)."""
    level = FiltrationLevel(spec, n + 1)
    width = level.previous.dim
    rows = []
    for d, i in zip(level.delta_rows, level.inclusion_rows()):
        row = dict(d)
        for c, v in i.items():
            row[width + c] = v
        rows.append(row)
    return reduce_sparse(rows)


def graded_rank(spec: SubshiftSpec, m: int) -> int:
    """Rank of Gr_m = F_m / F_{m-1}, with Gr_0 = F_0."""
    if m == 0:
        return filtration_rank(spec, 0).computed
    red = graded_quotient(spec, m - 1)
    return theta(spec, m) - red.rank


def kn_generator_count(spec: SubshiftSpec, N: int) -> int:
    """Admissible a_0..a_N whose wrap-around a_N a_0 is admissible."""
    return trace_power(spec, N + 1)


def kn_formula(g: int, N: int) -> int:
    return (2 * g - 1) ** N + (1 if N % 2 == 0 else 2 * g - 1)


def homology_rank_KN(spec: SubshiftSpec, N: int) -> RankPair:
    """Printed rank formula for K_N next to the count of its stated generators.

    The two are reported side by side and are not expected to agree.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    g = free_group_rank(spec)
    if g is None:
        raise ValueError("the K_N formula is only defined for free-group subshifts")
    return RankPair(kn_formula(g, N), kn_generator_count(spec, N))


def necklace_sum(g: int, N: int) -> int:
    return int(sum(mobius(d) * (2 * g - 1) ** (N // d) for d in divisors(N)))


def homology_rank_RN(g: int, N: int) -> int:
    if N < 1 or g < 2:
        raise ValueError("need N >= 1 and g >= 2")
    if N == 1:
        return 2 * g
    total = necklace_sum(g, N)
    q, r = divmod(total, N)
    if r:
        raise IntegralityError(f"{total} is not divisible by {N}")
    return q


@dataclass(frozen=True)
class PairingValues:
    literal: int
    orbit_sum: int


def _periodic_prefix(letters, start: int, length: int) -> tuple[int, ...]:
    P = len(letters)
    return tuple(letters[(start + i) % P] for i in range(length))


def pairing(f: dict, x: Word) -> PairingValues:
    """Pair a cylinder function with a closed orbit.

    ``f`` maps words of a fixed length k = n + 1 to integers. With
    ``x = a_0 .. a_N`` the literal value is ``N * f(first k letters of the
    periodic sequence)``; the orbit sum adds ``f`` along the whole period.
    """
    if not x.cyclic:
        raise ValueError("pairing needs a cyclic word")
    k = len(next(iter(f))) if f else 1
    letters = x.letters
    N = len(letters) - 1
    literal = N * f.get(_periodic_prefix(letters, 0, k), 0)
    orbit = sum(f.get(_periodic_prefix(letters, j, k), 0) for j in range(len(letters)))
    return PairingValues(literal, orbit)


@dataclass(frozen=True)
class PVReport:
    n: int
    dim: int
    kernel_rank: int
    constants_in_kernel: bool
    cokernel_rank: int
    cokernel_torsion: tuple[int, ...]
    filtration_rank: int

    @property
    def exact(self) -> bool:
        return (
            self.kernel_rank == 1
            and self.constants_in_kernel
            and self.cokernel_rank == self.filtration_rank
            and not self.cokernel_torsion
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "kernel_rank": self.kernel_rank,
            "constants_in_kernel": self.constants_in_kernel,
            "cokernel_rank": self.cokernel_rank,
            "cokernel_torsion": list(self.cokernel_torsion),
            "filtration_rank": self.filtration_rank,
            "exact": self.exact,
        }


def pv_exactness_check(spec: SubshiftSpec, n: int) -> PVReport:
    """Finite-level check of 0 -> Z -> P -> P -> H^1 -> 0 at level n."""
    level = FiltrationLevel(spec, n)
    above = FiltrationLevel(spec, n + 1)
    kernel_rank = level.dim - above.delta_reduction.rank
    ones = {w: 1 for w in level.basis}
    constants = not above.delta_apply(ones)
    coker = level.dim - level.delta_reduction.rank
    return PVReport(
        n=n,
        dim=level.dim,
        kernel_rank=kernel_rank,
        constants_in_kernel=constants,
        cokernel_rank=coker,
        cokernel_torsion=level.delta_reduction.divisors,
        filtration_rank=filtration_rank(spec, n).computed,
    )


@dataclass(frozen=True)
class GradedPiece:
    twist: int
    rank: int
    basis_labels: tuple[str, ...] = ()
    span_rank: int | None = None  # computed rank of the classes of the basis labels


@dataclass(frozen=True)
class GradedModule:
    kind: str  # H1dyn, H1dyn_hom, Vbar, W
    pieces: tuple[GradedPiece, ...]

    def piece(self, twist: int) -> GradedPiece:
        for p in self.pieces:
            if p.twist == twist:
                return p
        raise KeyError(twist)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "pieces": [
                {"twist": p.twist, "rank": p.rank, "basis": list(p.basis_labels), "span_rank": p.span_rank}
                for p in self.pieces
            ],
        }


def constant_word_labels(spec: SubshiftSpec, g: int, length: int) -> tuple[str, ...]:
    return tuple(spec.name((k,) * length) for k in range(2 * g))


def graded_modules(spec: SubshiftSpec, depth: int) -> dict[str, GradedModule]:
    """Tate-twist graded pieces of the dynamical cohomology and homology.

    Twists n <= 0 carry H^1_dyn (rank of Gr_{-n}) and its subspace Vbar
    generated by the classes of the constant words g_k^{1-n}; twists n >= 1
    carry H_1^dyn (rank of K_{n-1}, counted by generators) and W generated
    by the constant words g_k^n.

    The V piece rank is the generator count 2g; ``span_rank`` records the
    exact rank their classes span in Gr_{-n}, which can be smaller (for
    g = 2 the four classes g_k g_k satisfy one relation in Gr_1).
    """
    g = free_group_rank(spec)
    if g is None:
        raise ValueError("graded modules are defined for free-group subshifts")
    vbar, h1, w, h1hom = [], [], [], []
    for m in range(depth + 1):
        n = -m
        labels = constant_word_labels(spec, g, m + 1)
        vbar.append(GradedPiece(n, 2 * g, labels, vbar_independence(spec, m + 1)))
        h1.append(GradedPiece(n, graded_rank(spec, m)))
    for n in range(1, depth + 1):
        w.append(GradedPiece(n, 2 * g, constant_word_labels(spec, g, n)))
        h1hom.append(GradedPiece(n, kn_generator_count(spec, n - 1)))
    return {
        "Vbar": GradedModule("Vbar", tuple(vbar)),
        "H1dyn": GradedModule("H1dyn", tuple(h1)),
        "W": GradedModule("W", tuple(w)),
        "H1dyn_hom": GradedModule("H1dyn_hom", tuple(h1hom)),
    }


def vbar_independence(spec: SubshiftSpec, m: int) -> int:
    """Rank contributed by the constant-word indicators g_k^m inside Gr_{m-1}.

    Equals 2g exactly when those classes are independent.
    """
    g = free_group_rank(spec)
    if g is None:
        raise ValueError("needs a free-group subshift")
    level = FiltrationLevel(spec, m - 1)
    if level.previous is None:
        base_rows = [dict() for _ in level.basis]
        width = 0
    else:
        width = level.previous.dim
        base_rows = []
        for d, i in zip(level.delta_rows, level.inclusion_rows()):
            row = dict(d)
            row.update({width + c: v for c, v in i.items()})
            base_rows.append(row)
    base_rank = reduce_sparse(base_rows).rank if width else 0
    extended = [dict(r) for r in base_rows]
    for k in range(2 * g):
        extended[level.index[(k,) * m]][2 * width + k] = 1
    return reduce_sparse(extended).rank - base_rank
