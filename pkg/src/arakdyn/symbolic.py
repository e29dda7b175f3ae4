"""Alphabets, admissible words and shift dynamics of subshifts of finite type.

Letters are stored 0-based. Matrix rules that are naturally stated with
1-based indices (``A[i][j] = 1`` iff ``|i - j| != g``) are converted at the
boundary, so ``A[0][2]`` here is the entry ``A(1, 3)`` of the 1-based rule.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from sympy import divisors, mobius

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would produce more words than allowed."""


class IntegralityError(ArithmeticError):
    """A count that must be an exact integer was not divisible."""


def enumeration_budget() -> int:
    value = os.environ.get("ARAKDYN_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]
    pairing: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("letter identifiers must be unique")
        if self.pairing is not None:
            p = self.pairing
            if len(p) != len(self.letters):
                raise ValueError("pairing must have one entry per letter")
            for i, j in enumerate(p):
                if not 0 <= j < len(p) or p[j] != i or i == j:
                    raise ValueError("pairing must be a fixed-point-free involution")

    def __len__(self):
        return len(self.letters)

    def index(self, name: str) -> int:
        return self.letters.index(name)

    def inverse(self, i: int) -> int:
        if self.pairing is None:
            raise ValueError("alphabet has no pairing")
        return self.pairing[i]


@dataclass(frozen=True)
class SubshiftSpec:
    alphabet: Alphabet
    A: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.alphabet)
        if len(self.A) != n or any(len(row) != n for row in self.A):
            raise ValueError("edge matrix must be square of size len(alphabet)")
        if any(x not in (0, 1) for row in self.A for x in row):
            raise ValueError("edge matrix entries must be 0 or 1")

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def admissible(self, letters: Sequence[int], cyclic: bool = False) -> bool:
        if any(not 0 <= a < self.size for a in letters):
            return False
        ok = all(self.A[a][b] for a, b in zip(letters, letters[1:]))
        if ok and cyclic and letters:
            ok = bool(self.A[letters[-1]][letters[0]])
        return ok

    def followers(self, a: int) -> list[int]:
        return [b for b in range(self.size) if self.A[a][b]]

    def name(self, letters: Sequence[int], sep: str = " ") -> str:
        return sep.join(self.alphabet.letters[a] for a in letters)

    def parse(self, text: str) -> tuple[int, ...]:
        """Parse a comma- or space-separated word of letter names."""
        names = [t for t in text.replace(",", " ").split() if t]
        return tuple(self.alphabet.index(t) for t in names)

    def to_dict(self) -> dict:
        return {
            "letters": list(self.alphabet.letters),
            "pairing": None if self.alphabet.pairing is None else list(self.alphabet.pairing),
            "A": [list(row) for row in self.A],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> SubshiftSpec:
        pairing = data.get("pairing")
        alphabet = Alphabet(tuple(data["letters"]), None if pairing is None else tuple(pairing))
        return cls(alphabet, tuple(tuple(int(x) for x in row) for row in data["A"]))

    @classmethod
    def from_json(cls, text: str) -> SubshiftSpec:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...]
    cyclic: bool = False

    def __len__(self):
        return len(self.letters)


def free_group_subshift(g: int) -> SubshiftSpec:
    """Subshift of reduced words in g generators and their inverses.

    Letter ``k`` (0-based) is ``g_{k+1}``; the inverse of ``g_i`` is
    ``g_{i+g}``. Admissibility forbids exactly the pairs ``a, a^{-1}``.
    """
    if g < 2:
        raise ValueError("free group rank must be at least 2")
    letters = tuple(f"g{i + 1}" for i in range(2 * g))
    pairing = tuple((i + g) % (2 * g) for i in range(2 * g))
    A = tuple(
        tuple(1 if abs((i + 1) - (j + 1)) != g else 0 for j in range(2 * g))
        for i in range(2 * g)
    )
    return SubshiftSpec(Alphabet(letters, pairing), A)


def free_group_rank(spec: SubshiftSpec) -> int | None:
    """Return g if ``spec`` is exactly ``free_group_subshift(g)``, else None."""
    if spec.size < 4 or spec.size % 2:
        return None
    g = spec.size // 2
    return g if spec.A == free_group_subshift(g).A else None


# exact integer matrix helpers

def matmul(X, Y):
    cols = list(zip(*Y))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in X]


def matpow(A, k: int):
    n = len(A)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [list(row) for row in A]
    while k > 0:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def trace_power(spec: SubshiftSpec, k: int) -> int:
    P = matpow(spec.A, k)
    return sum(P[i][i] for i in range(spec.size))


def count_words(spec: SubshiftSpec, length: int, cyclic: bool = False) -> int:
    if length < 1:
        raise ValueError("length must be at least 1")
    if cyclic:
        return trace_power(spec, length)
    return sum(map(sum, matpow(spec.A, length - 1)))


def _extend(spec: SubshiftSpec, length: int) -> Iterator[tuple[int, ...]]:
    if length == 1:
        for a in range(spec.size):
            yield (a,)
        return
    for prefix in _extend(spec, length - 1):
        for b in spec.followers(prefix[-1]):
            yield prefix + (b,)


def iter_words(spec: SubshiftSpec, length: int, cyclic: bool = False) -> Iterator[tuple[int, ...]]:
    """Admissible letter tuples of a given length in lexicographic order."""
    for w in _extend(spec, length):
        if not cyclic or spec.A[w[-1]][w[0]]:
            yield w


def enumerate_words(spec: SubshiftSpec, length: int, cyclic: bool = False) -> list[Word]:
    if length < 1:
        raise ValueError("length must be at least 1")
    limit = enumeration_budget()
    if count_words(spec, length) > limit:
        raise BudgetExceeded(f"more than {limit} words of length {length}")
    return [Word(w, cyclic) for w in iter_words(spec, length, cyclic)]


def shift_apply(word: Word, k: int, spec: SubshiftSpec | None = None) -> Word:
    """Apply ``T^k`` to the periodic point with one period ``word``."""
    if not word.cyclic:
        raise ValueError("shift_apply needs a cyclic word")
    if spec is not None and not spec.admissible(word.letters, cyclic=True):
        raise ValueError("word is not cyclically admissible")
    n = len(word.letters)
    k %= n
    return Word(word.letters[k:] + word.letters[:k], True)


def min_rotation(letters: Sequence[int]) -> tuple[int, ...]:
    letters = tuple(letters)
    return min(letters[k:] + letters[:k] for k in range(len(letters))) if letters else ()


def primitive_period(letters: Sequence[int]) -> int:
    n = len(letters)
    for d in divisors(n):
        if all(letters[i] == letters[i % d] for i in range(n)):
            return d
    return n


def periodic_orbit_count(spec: SubshiftSpec, N: int) -> int:
    """Number of T-orbits of least period exactly N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    total = sum(mobius(d) * trace_power(spec, N // d) for d in divisors(N))
    q, r = divmod(int(total), N)
    if r:
        raise IntegralityError(f"orbit count sum {total} not divisible by {N}")
    return q


def enumerate_orbits(spec: SubshiftSpec, N: int) -> set[tuple[int, ...]]:
    """Canonical representatives of the orbits of least period N (brute force)."""
    return {
        min_rotation(w)
        for w in iter_words(spec, N, cyclic=True)
        if primitive_period(w) == N
    }


def all_words_product(spec: SubshiftSpec, length: int) -> list[tuple[int, ...]]:
    """Brute-force filter of the full product set; an oracle for ``iter_words``."""
    return [w for w in product(range(spec.size), repeat=length) if spec.admissible(w)]
