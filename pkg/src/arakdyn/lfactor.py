"""Gamma factors, local L-factors and zeta-regularized determinants.

Spectral lines are reduced to Hurwitz zeta values: a line of values
``w_n = sigma * (n + a)``, n >= 0, contributes
``zeta(z) = m * sum_n w_n^(-z)``, and the derivative at z = 0 of the tail
``n >= N0`` is ``-(log sigma + 2 pi i k) * zeta_H(0, a + N0) + zeta_H'(0, a + N0)``
where the integer k makes the branch of ``log w_n`` consistent. The head
``n < N0`` is multiplied out literally.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli, gamma as _gamma

from .spectral import Side, SpectralModel

TWO_PI = 2 * math.pi


class PoleError(ArithmeticError):
    """Evaluation point is a pole (or lies on the spectrum)."""


def _is_nonpositive_integer(x: complex, tol: float = 1e-12) -> bool:
    x = complex(x)
    return abs(x.imag) < tol and x.real < tol and abs(x.real - round(x.real)) < tol


def gamma(s: complex) -> complex:
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at {s}")
    return complex(_gamma(complex(s)))


def gamma_C(s: complex) -> complex:
    return (TWO_PI) ** (-complex(s)) * gamma(s)


def gamma_R(s: complex) -> complex:
    s = complex(s)
    if _is_nonpositive_integer(s / 2):
        raise PoleError(f"Gamma_R has a pole at {s}")
    return 2 ** -0.5 * math.pi ** (-s / 2) * gamma(s / 2)


@dataclass(frozen=True)
class HodgeData:
    m: int
    h: dict = field(default_factory=dict)  # (p, q) -> h^{p,q}
    h_plus: int = 0
    h_minus: int = 0

    def __post_init__(self):
        for (p, q), v in self.h.items():
            if p + q != self.m or v < 0:
                raise ValueError("Hodge numbers must satisfy p + q = m and be nonnegative")
        if self.h_plus < 0 or self.h_minus < 0:
            raise ValueError("h^{p,+-} must be nonnegative")
        if self.h_plus or self.h_minus:
            if self.m % 2:
                raise ValueError("h^{p,+-} only exist in even degree")
            p = self.m // 2
            if self.h_plus + self.h_minus != self.h.get((p, p), 0):
                raise ValueError("h^{p,+} + h^{p,-} must equal h^{p,p}")

    @classmethod
    def curve(cls, g: int) -> HodgeData:
        return cls(1, {(1, 0): g, (0, 1): g})


def arch_L_factor(h: HodgeData, kappa: str, s: complex) -> complex:
    s = complex(s)
    out = 1 + 0j
    if kappa == "C":
        for (p, q), n in sorted(h.h.items()):
            if n:
                out *= gamma_C(s - min(p, q)) ** n
        return out
    if kappa == "R":
        for (p, q), n in sorted(h.h.items()):
            if p < q and n:
                out *= gamma_C(s - p) ** n
        if h.m % 2 == 0:
            p = h.m // 2
            if h.h_plus:
                out *= gamma_R(s - p) ** h.h_plus
            if h.h_minus:
                out *= gamma_R(s - p + 1) ** h.h_minus
        return out
    raise ValueError("kappa must be 'C' or 'R'")


# Hurwitz zeta by Euler-Maclaurin

EM_TERMS = 15


@lru_cache(maxsize=None)
def _bernoulli_even() -> tuple[float, ...]:
    B = bernoulli(2 * EM_TERMS)
    return tuple(float(B[2 * k]) for k in range(1, EM_TERMS + 1))


def _cutoff(a: complex) -> int:
    return max(10, math.ceil(30 - a.real))


def _check_a(a: complex) -> complex:
    a = complex(a)
    if a.real <= 0:
        raise ValueError("Hurwitz zeta needs Re a > 0")
    return a


def hurwitz_zeta(z: complex, a: complex, N: int | None = None) -> complex:
    """zeta(z, a) = sum_{n >= 0} (n + a)^(-z), continued in z."""
    a = _check_a(a)
    z = complex(z)
    if abs(z - 1) < 1e-14:
        raise PoleError("Hurwitz zeta has a pole at z = 1")
    N = _cutoff(a) if N is None else N
    head = sum(cmath.exp(-z * cmath.log(n + a)) for n in range(N))
    w = N + a
    lw = cmath.log(w)
    total = head + cmath.exp((1 - z) * lw) / (z - 1) + 0.5 * cmath.exp(-z * lw)
    rising = z  # (z)_{2k-1}
    fact = 2.0  # (2k)!
    for k, B in enumerate(_bernoulli_even(), start=1):
        total += B / fact * rising * cmath.exp((-z - 2 * k + 1) * lw)
        rising *= (z + 2 * k - 1) * (z + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return total


def hurwitz_zeta_dz0(a: complex, N: int | None = None) -> complex:
    """d/dz zeta(z, a) at z = 0."""
    a = _check_a(a)
    N = _cutoff(a) if N is None else N
    w = N + a
    lw = cmath.log(w)
    total = -sum(cmath.log(n + a) for n in range(N)) + w * (lw - 1) - 0.5 * lw
    for k, B in enumerate(_bernoulli_even(), start=1):
        total += B / (2 * k * (2 * k - 1)) * cmath.exp((1 - 2 * k) * lw)
    return total


# regularized determinants

BRANCHES = ("plus", "minus", "both")


@dataclass(frozen=True)
class ZetaJob:
    """Determinant of ``(s - rotation * D) / rescale`` over a spectral model.

    ``rotation = -1`` gives the ``s + lambda`` convention; ``rotation = -1j``
    gives ``s + lambda`` over the spectrum of ``i D``. ``weights`` replaces
    the model's multiplicities side by side (matched by side name). ``nmax``
    truncates to a finite spectrum.
    """

    model: SpectralModel
    s: complex
    branch: str = "both"
    weights: SpectralModel | None = None
    rotation: complex = 1
    rescale: float = 1.0
    nmax: int | None = None

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}")
        if self.rescale <= 0:
            raise ValueError("rescale must be positive")

    def selected(self) -> list[Side]:
        out = []
        for side in self.model.sides:
            if self.branch == "both" or self._half(side) == self.branch:
                out.append(side)
        return out

    def _half(self, side: Side) -> str:
        return "plus" if side.sign > 0 else "minus"

    def multiplicity(self, side: Side) -> int:
        if self.weights is not None:
            w = self.weights.side(side.name)
            return w.mult(0)
        if side.multiplicity is None:
            raise ValueError("regularized determinants need constant multiplicity per line")
        return side.multiplicity


@dataclass(frozen=True)
class LineDet:
    sigma: complex
    a: complex
    head: int
    branch_k: int
    log_det: complex


def _line_log_det(sigma: complex, a: complex, m: int) -> LineDet:
    """log det over w_n = sigma (n + a), n >= 0, each with multiplicity m."""
    if _is_nonpositive_integer(a):
        raise PoleError("s lies on the spectrum")
    lsig = cmath.log(sigma)

    def branch(n: int) -> int:
        w = sigma * (n + a)
        d = (cmath.log(w) - lsig - cmath.log(n + a)) / (2j * math.pi)
        return round(d.real)

    k_inf = -1 if cmath.phase(sigma) == math.pi and a.imag > 0 else 0
    N0 = max(0, math.floor(-a.real) + 1)
    while branch(N0) != k_inf:
        N0 += 1
        if N0 > 10**6:
            raise RuntimeError("branch of log did not stabilize")
    head = sum(cmath.log(sigma * (n + a)) for n in range(N0))
    b = a + N0
    dz = -(lsig + 2j * math.pi * k_inf) * (0.5 - b) + hurwitz_zeta_dz0(b)
    return LineDet(sigma, a, N0, k_inf, m * (head - dz))


def line_parameters(job: ZetaJob, side: Side) -> tuple[complex, complex]:
    c = job.model.scale.value
    sigma = -complex(job.rotation) * side.sign * c / job.rescale
    a = side.offset + (complex(job.s) / job.rescale) / sigma
    return sigma, a


def regularized_det(job: ZetaJob) -> complex:
    return cmath.exp(log_regularized_det(job))


def log_regularized_det(job: ZetaJob) -> complex:
    total = 0j
    for side in job.selected():
        m = job.multiplicity(side)
        if m == 0:
            continue
        sigma, a = line_parameters(job, side)
        if job.nmax is not None:
            for n in range(job.nmax + 1):
                w = sigma * (n + a)
                if abs(w) < 1e-12:
                    raise PoleError("s lies on the spectrum")
                total += m * cmath.log(w)
            continue
        total += _line_log_det(sigma, a, m).log_det
    return total


def finite_product(job: ZetaJob) -> complex:
    """Literal product of (s - mu)^m over a truncated spectrum."""
    if job.nmax is None:
        raise ValueError("finite_product needs nmax")
    out = 1 + 0j
    for side in job.selected():
        m = job.multiplicity(side)
        sigma, a = line_parameters(job, side)
        for n in range(job.nmax + 1):
            out *= (sigma * (n + a)) ** m
    return out


def arch_det(model: SpectralModel, s: complex) -> complex:
    """Determinant of (s - Phi)/2pi over a V model."""
    return regularized_det(ZetaJob(model, s, rescale=TWO_PI))


def nonarch_L_factor(g: int, q: int, s: complex) -> complex:
    if q < 2 or g < 1:
        raise ValueError("need q >= 2 and g >= 1")
    base = 1 - q ** (-complex(s))
    if abs(base) < 1e-15:
        raise PoleError(f"L_v has a pole at s = {s}")
    return base ** (-g)


def nonarch_det(model: SpectralModel, s: complex) -> complex:
    """det over s + lambda, lambda in Spec(i D), both half-lattices."""
    return regularized_det(ZetaJob(model, s, rotation=-1j))


def parse_grid(text: str) -> list[float]:
    """'start:stop:step' (inclusive of stop when it lands on the grid)."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise ValueError(f"bad grid {text!r}; expected start:stop:step") from exc
    if step <= 0 or stop < start:
        raise ValueError("grid needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


@dataclass(frozen=True)
class FitReport:
    g: int
    q: int
    R: int
    grid: tuple[float, ...]
    a: float
    b: float
    imag: float  # largest imaginary part of the fitted coefficients
    residual: float
    literal_residual: float  # same fit applied to log[det * (1 - q^-s)^g]
    exact_claim: bool  # fitted (a, b) both vanish to 1e-8

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "q": self.q,
            "R": self.R,
            "a": self.a,
            "b": self.b,
            "imag": self.imag,
            "residual": self.residual,
            "literal_residual": self.literal_residual,
            "exact_claim": self.exact_claim,
        }


def _affine_fit(xs, ys) -> tuple[complex, complex, float]:
    X = np.column_stack([np.asarray(xs, dtype=complex), np.ones(len(xs), dtype=complex)])
    coef, *_ = np.linalg.lstsq(X, np.asarray(ys, dtype=complex), rcond=None)
    res = float(np.max(np.abs(X @ coef - ys)))
    return complex(coef[0]), complex(coef[1]), res


def nonarch_det_check(g: int, q: int, R: int = 1, grid=None) -> FitReport:
    """Fit log[det(s) * L_v(s)] = a s + b over a real s-grid."""
    from .spectral import v_multiplicity_model

    grid = parse_grid("0.5:10:0.5") if grid is None else list(grid)
    model = v_multiplicity_model("nonarch_V", g, q, R)
    logs, literal = [], []
    for s in grid:
        ld = log_regularized_det(ZetaJob(model, s, rotation=-1j))
        logL = -g * cmath.log(1 - q ** (-s))
        logs.append(ld + logL)
        literal.append(ld - logL)
    a, b, res = _affine_fit(grid, logs)
    _, _, lit = _affine_fit(grid, literal)
    return FitReport(
        g, q, R, tuple(grid), a.real, b.real, max(abs(a.imag), abs(b.imag)), res, lit,
        abs(a) < 1e-8 and abs(b) < 1e-8,
    )
