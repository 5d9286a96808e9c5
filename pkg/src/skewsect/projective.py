"""Exact integer geometry of the rational projective plane.

Points are primitive integer triples with a canonical sign, so projective
equality is plain tuple equality.  The three unimodular maps ``psi(i, .)``
generate the zone fractal; ``phi_reduce`` runs the reduction map that walks
a nonnegative point back down to a coordinate plane.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ChartDomain, CollinearInputs, NegativeCoordinate, ZeroTriple


class ProjPoint(NamedTuple):
    """Primitive integer triple, first nonzero coordinate positive."""

    h1: int
    h2: int
    h3: int

    def __str__(self):
        return f"({self.h1}:{self.h2}:{self.h3})"

    @classmethod
    def of(cls, triple: Iterable[int]) -> "ProjPoint":
        return normalize(triple)


def normalize(triple: Iterable[int]) -> ProjPoint:
    a, b, c = (int(t) for t in triple)
    g = math.gcd(a, b, c)
    if g == 0:
        raise ZeroTriple("the zero triple is not a projective point")
    if a < 0 or (a == 0 and (b < 0 or (b == 0 and c < 0))):
        g = -g
    return ProjPoint(a // g, b // g, c // g)


# ---------------------------------------------------------------------------
# the maps psi_i and their inverses

PSI_MATRICES = {
    1: ((1, 0, 0), (1, 1, 0), (1, 0, 1)),
    2: ((1, 1, 0), (0, 1, 0), (0, 1, 1)),
    3: ((1, 0, 1), (0, 1, 1), (0, 0, 1)),
}


def det3(m: Sequence[Sequence[int]]) -> int:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _psi_raw(i: int, h: Sequence[int]) -> tuple[int, int, int]:
    a, b, c = h
    if i == 1:
        return (a, b + a, c + a)
    if i == 2:
        return (a + b, b, c + b)
    if i == 3:
        return (a + c, b + c, c)
    raise ValueError(f"psi index must be 1, 2 or 3, got {i!r}")


def _psi_inverse_raw(i: int, h: Sequence[int]) -> tuple[int, int, int]:
    a, b, c = h
    if i == 1:
        return (a, b - a, c - a)
    if i == 2:
        return (a - b, b, c - b)
    if i == 3:
        return (a - c, b - c, c)
    raise ValueError(f"psi index must be 1, 2 or 3, got {i!r}")


def psi(i: int, p: Sequence[int]) -> ProjPoint:
    return normalize(_psi_raw(i, p))


def psi_inverse(i: int, p: Sequence[int]) -> ProjPoint:
    return normalize(_psi_inverse_raw(i, p))


def apply_word_raw(word: Sequence[int], h: Sequence[int]) -> tuple[int, int, int]:
    """Apply psi_{w1} o psi_{w2} o ... o psi_{wk} to an integer vector (no normalization)."""
    v = tuple(h)
    for i in reversed(word):
        v = _psi_raw(i, v)
    return v


def apply_word(word: Sequence[int], p: Sequence[int]) -> ProjPoint:
    return normalize(apply_word_raw(word, p))


# ---------------------------------------------------------------------------
# reduction map phi on the nonnegative cone

class Step(Enum):
    ROTATE = "R"
    SUBTRACT = "S"

    def __repr__(self):
        return self.value


@dataclass(frozen=True)
class ReductionTrace:
    start: ProjPoint
    steps: tuple[Step, ...]
    terminal: ProjPoint


def _check_nonnegative(h):
    if min(h) < 0:
        raise NegativeCoordinate(f"phi is defined on the nonnegative cone, got {tuple(h)}")


def phi(h: Sequence[int]) -> tuple[Step, tuple[int, int, int]]:
    """One application of the reduction map; returns the branch taken and the image."""
    a, b, c = h
    if 0 <= a <= b and a <= c:
        return Step.SUBTRACT, (a, b - a, c - a)
    return Step.ROTATE, (b, c, a)


def phi_reduce(p: Sequence[int]) -> ReductionTrace:
    """Iterate phi until a coordinate vanishes, recording every step."""
    start = normalize(p)
    _check_nonnegative(start)
    h = tuple(start)
    steps = []
    while 0 not in h:
        step, h = phi(h)
        steps.append(step)
    return ReductionTrace(start, tuple(steps), normalize(h))


def phi_reduce_compressed(h: Sequence[int]) -> tuple[list[tuple[str, int]], tuple[int, int, int]]:
    """Run-length form of ``phi_reduce``: a list of ("S", q) / ("R", 1) runs.

    Consecutive subtracts are batched, which keeps the cost logarithmic in the
    coordinate size instead of linear.
    """
    a, b, c = h
    if min(a, b, c) < 0:
        raise NegativeCoordinate(f"phi is defined on the nonnegative cone, got {(a, b, c)}")
    runs = []
    while a and b and c:
        if a <= b and a <= c:
            q = min(b, c) // a
            b -= q * a
            c -= q * a
            runs.append(("S", q))
        else:
            a, b, c = b, c, a
            runs.append(("R", 1))
    return runs, (a, b, c)


# ---------------------------------------------------------------------------
# cubical symmetries

@dataclass(frozen=True)
class CubicalSymmetry:
    """Signed coordinate permutation: ``out[i] = signs[i] * h[perm[i]]``."""

    perm: tuple[int, int, int] = (0, 1, 2)
    signs: tuple[int, int, int] = (1, 1, 1)

    def apply_raw(self, h: Sequence[int]) -> tuple[int, int, int]:
        return tuple(s * h[j] for s, j in zip(self.signs, self.perm))

    def __call__(self, h: Sequence[int]) -> ProjPoint:
        return normalize(self.apply_raw(h))

    def compose(self, other: "CubicalSymmetry") -> "CubicalSymmetry":
        """self o other."""
        perm = tuple(other.perm[self.perm[i]] for i in range(3))
        signs = tuple(self.signs[i] * other.signs[self.perm[i]] for i in range(3))
        return CubicalSymmetry(perm, signs)

    def inverse(self) -> "CubicalSymmetry":
        perm = [0, 0, 0]
        signs = [1, 1, 1]
        for i, j in enumerate(self.perm):
            perm[j] = i
            signs[j] = self.signs[i]
        return CubicalSymmetry(tuple(perm), tuple(signs))

    @property
    def is_identity(self) -> bool:
        return self.perm == (0, 1, 2) and self.signs == (1, 1, 1)


IDENTITY = CubicalSymmetry()


def cubical_group() -> list[CubicalSymmetry]:
    """All 48 signed permutations of the coordinates."""
    return [CubicalSymmetry(p, s)
            for p in itertools.permutations(range(3))
            for s in itertools.product((1, -1), repeat=3)]


def symmetry_reduce(p: Sequence[int]) -> tuple[ProjPoint, CubicalSymmetry]:
    """Move ``p`` into the nonnegative cone by sign flips.

    Returns ``(q, g)`` with ``q`` nonnegative and ``g(q) == normalize(p)``.
    """
    p = normalize(p)
    signs = tuple(-1 if t < 0 else 1 for t in p)
    q = ProjPoint(*(abs(t) for t in p))
    return q, CubicalSymmetry((0, 1, 2), signs)


# ---------------------------------------------------------------------------
# misc

def cross(u: Sequence, v: Sequence) -> tuple:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def asymptotic_direction(soul: Sequence[int], H: Sequence) -> tuple:
    """Direction of open section components, ``soul x H``."""
    v = cross(tuple(soul), tuple(Fraction(t) for t in H))
    if not any(v):
        raise CollinearInputs(f"soul {tuple(soul)} and H {tuple(H)} are proportional")
    return v


# Fixed integral matrix (|det| = 4) used for areas: its columns are
# (-1,1,1), (1,1,1), (1,-1,1); it sends (1:0:1), (0:1:1), (1:1:0) to
# (0:0:1), (1:0:1), (0:1:1).
AREA_CHART_MATRIX = ((-1, 1, 1), (1, 1, -1), (1, 1, 1))


def matvec(m, h):
    return tuple(m[r][0] * h[0] + m[r][1] * h[1] + m[r][2] * h[2] for r in range(3))


def to_area_chart(p: Sequence[int]) -> ProjPoint:
    return normalize(matvec(AREA_CHART_MATRIX, p))


def uv_point(u, v) -> tuple:
    """Parametrization (u, v) -> (1-v : 1-u : u+v) of the triangle with
    vertices (1:1:0), (1:0:1), (0:1:1)."""
    u, v = Fraction(u), Fraction(v)
    return (1 - v, 1 - u, u + v)


def from_uv(h: Sequence) -> tuple[Fraction, Fraction]:
    s = sum(Fraction(t) for t in h)
    if s == 0:
        raise ChartDomain(f"{tuple(h)} has zero coordinate sum")
    a, b, _ = (2 * Fraction(t) / s for t in h)
    u, v = 1 - b, 1 - a
    if u < 0 or v < 0 or u + v > 1:
        raise ChartDomain(f"{tuple(h)} is outside the parameter triangle")
    return u, v


CHARTS = ("z1", "disc", "area-chart", "uv")


def chart(p: Sequence[int], which: str = "z1"):
    """Planar coordinates of a projective point in one of the fixed charts.

    ``z1``, ``area-chart`` and ``uv`` are exact (Fractions); ``disc`` is the
    float disc model, with the centre on the z axis.
    """
    if which == "z1":
        a, b, c = p
        if c == 0:
            raise ChartDomain(f"{tuple(p)} is at infinity in the z=1 chart")
        return Fraction(a, c), Fraction(b, c)
    if which == "area-chart":
        x, y, z = matvec(AREA_CHART_MATRIX, p)
        if z == 0:
            raise ChartDomain(f"{tuple(p)} is at infinity in the area chart")
        return Fraction(x, z), Fraction(y, z)
    if which == "disc":
        a, b, c = (float(t) for t in p)
        if c < 0 or (c == 0 and (a < 0 or (a == 0 and b < 0))):
            a, b, c = -a, -b, -c
        r = math.sqrt(a * a + b * b + c * c)
        return a / r, b / r
    if which == "uv":
        return from_uv(p)
    raise ValueError(f"unknown chart {which!r}; expected one of {CHARTS}")


# ---------------------------------------------------------------------------
# Tribonacci constants

def tribonacci_constants() -> tuple[float, complex, complex]:
    """Roots of x^3 - x^2 - x - 1: the real one and the complex pair."""
    roots = np.roots([1.0, -1.0, -1.0, -1.0])
    alpha = float(max(roots, key=lambda r: r.real).real)
    for _ in range(3):
        f = ((alpha - 1.0) * alpha - 1.0) * alpha - 1.0
        alpha -= f / ((3.0 * alpha - 2.0) * alpha - 1.0)
    # x^3 - x^2 - x - 1 = (x - alpha)(x^2 + (alpha - 1) x + 1/alpha)
    b = alpha - 1.0
    beta = (-b + cmath.sqrt(b * b - 4.0 / alpha)) / 2.0
    return alpha, beta, beta.conjugate()


def tribonacci_alpha_closed_form() -> float:
    s33 = math.sqrt(33.0)
    return (1.0 + float(np.cbrt(19.0 - 3.0 * s33)) + float(np.cbrt(19.0 + 3.0 * s33))) / 3.0
