"""The zero-measure estimate for the chaotic set.

Directions in Δ are parametrized by ``(u, v) -> (1-v : 1-u : u+v)`` and
carry the weight ``du dv / (1+u+v)^2``.  The maps ``f_k`` send Δ onto the
corner pieces left over after removing the central zone; ``c_k`` bounds how
much they can shrink that weight, and the whole argument closes because
``sum c_k < 1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainViolation
from .projective import apply_word_raw, from_uv, uv_point

SUM_RATIONAL = Fraction(253, 36)
SUM_PI2_COEFF = Fraction(-2, 3)


def density(u, v):
    return 1 / (1 + u + v) ** 2


def integrand(k: int, u, v):
    """Jacobian of f_k times the density ratio; works on scalars and arrays."""
    d = u + (k + 1) * (v + 1)
    return (1 + u + v) ** 2 / ((u + (k + 2) * (v + 1)) ** 2 * d)


def c_k(k: int) -> Fraction:
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k == 0:
        return Fraction(1, 4)
    return Fraction(4, (k + 2) * (k + 3) ** 2)


def _in_triangle(u, v) -> bool:
    return u >= 0 and v >= 0 and u + v <= 1


@dataclass(frozen=True)
class GridMax:
    value: float
    u: float
    v: float


def c_k_numeric(k: int, n: int = 2000, rounds: int = 40) -> GridMax:
    """Maximum of ``integrand(k, .)`` over the closed parameter triangle.

    A dense ``(n+1)^2`` grid locates the best node, then a shrinking 21x21
    window around it (clipped to the triangle) refines the location.
    """
    t = np.linspace(0.0, 1.0, n + 1)
    U, V = np.meshgrid(t, t, indexing="ij")
    vals = integrand(k, U, V)
    vals[U + V > 1.0 + 1e-15] = -np.inf
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    bu, bv, best = float(U[i, j]), float(V[i, j]), float(vals[i, j])
    h = 1.0 / n
    for _ in range(rounds):
        s = np.linspace(-2 * h, 2 * h, 21)
        uu = np.clip(bu + s, 0.0, 1.0)
        vv = np.clip(bv + s, 0.0, 1.0)
        Uw, Vw = np.meshgrid(uu, vv, indexing="ij")
        over = Uw + Vw > 1.0
        # project points beyond the hypotenuse back onto it
        excess = np.where(over, (Uw + Vw - 1.0) / 2, 0.0)
        Uw, Vw = Uw - excess, Vw - excess
        w = integrand(k, Uw, Vw)
        a, b = np.unravel_index(int(np.argmax(w)), w.shape)
        if w[a, b] >= best:
            bu, bv, best = float(Uw[a, b]), float(Vw[a, b]), float(w[a, b])
        h /= 4
    return GridMax(best, bu, bv)


@dataclass(frozen=True)
class SumCertificate:
    terms: int
    head: Fraction            # exact sum of c_k for k <= terms
    tail_bound: Fraction      # rational upper bound for the rest
    closed_form: tuple[Fraction, Fraction]   # (rational part, coefficient of pi^2)
    value: float

    @property
    def upper_bound(self) -> Fraction:
        return self.head + self.tail_bound

    @property
    def certified(self) -> bool:
        """sum c_k < 1/2, equivalently sum 2 c_k < 1."""
        return 2 * self.upper_bound < 1


def tail_bound(K: int) -> Fraction:
    """Upper bound of sum_{k>K} c_k: c_k <= 4/(k+2)^3, and the integral from K gives 2/(K+2)^2."""
    return Fraction(2, (K + 2) ** 2)


def partial_sums(K: int):
    """Exact running sums of c_k for k = 0..K."""
    s = Fraction(0)
    out = []
    for k in range(K + 1):
        s += c_k(k)
        out.append(s)
    return out


def c_sum(terms: int = 10_000) -> SumCertificate:
    head = partial_sums(terms)[-1]
    value = float(SUM_RATIONAL) + float(SUM_PI2_COEFF) * math.pi ** 2
    return SumCertificate(terms, head, tail_bound(terms), (SUM_RATIONAL, SUM_PI2_COEFF), value)


def float_sum(K: int) -> float:
    k = np.arange(1, K + 1, dtype=np.float64)
    # sum small terms first
    return 0.25 + float(np.sum((4.0 / ((k + 2) * (k + 3) ** 2))[::-1]))


# ---------------------------------------------------------------------------
# the maps f_k

def f_k_map(k: int, u, v) -> tuple[Fraction, Fraction]:
    u, v = Fraction(u), Fraction(v)
    if not _in_triangle(u, v):
        raise DomainViolation(f"({u}, {v}) is outside the parameter triangle")
    if k < 0:
        raise DomainViolation(f"k must be >= 0, got {k}")
    d = u + (k + 1) * (v + 1)
    return v / d, 1 / d


def _rotate(h):
    # (h1, h2, h3) -> (h3, h1, h2)
    return (h[2], h[0], h[1])


def f_k_projective(k: int, u, v) -> tuple[Fraction, Fraction]:
    """Same map computed as psi_3^k o psi_1 o R on homogeneous coordinates."""
    u, v = Fraction(u), Fraction(v)
    if not _in_triangle(u, v):
        raise DomainViolation(f"({u}, {v}) is outside the parameter triangle")
    h = uv_point(u, v)
    den = math.lcm(*(t.denominator for t in h))
    h = tuple(int(t * den) for t in h)
    h = apply_word_raw([3] * k + [1], _rotate(h))
    return from_uv(h)
