"""Stability zones of the {4,6|4} polyhedron.

Inside the central triangle ``DELTA`` every zone is a triangle produced by
the vertex-sum recursion: a triangle <v1, v2, v3> carries the zone with
vertices <v2+v3, v3+v1, v1+v2> and soul v1+v2+v3, and splits into the three
child triangles ``psi_i`` of itself.  Children keep the vertex order of
``psi_a(DELTA)`` so that the zone reached by word ``a`` is exactly
``psi_a(D_(1:1:1))``.

Three square zones, ``h_i >= |h_j| + |h_k|``, are handled by inequalities.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateChart, PreconditionViolation
from .projective import (
    AREA_CHART_MATRIX,
    ProjPoint,
    apply_word_raw,
    chart,
    det3,
    matvec,
    normalize,
    phi_reduce_compressed,
    symmetry_reduce,
    tribonacci_constants,
)

E1, E2, E3 = ProjPoint(1, 0, 0), ProjPoint(0, 1, 0), ProjPoint(0, 0, 1)
UNIT_VECTORS = (E1, E2, E3)


class Triangle(NamedTuple):
    v1: ProjPoint
    v2: ProjPoint
    v3: ProjPoint


class Zone(NamedTuple):
    word: tuple[int, ...]
    soul: ProjPoint
    vertices: Triangle
    depth: int

    def enclosing(self) -> Triangle:
        """The triangle psi_word(DELTA) whose centre piece this zone is."""
        w1, w2, w3 = self.vertices
        return Triangle(*(normalize(((b[k] + c[k] - a[k]) for k in range(3)))
                          for a, b, c in ((w1, w2, w3), (w2, w3, w1), (w3, w1, w2))))


DELTA = Triangle(ProjPoint(0, 1, 1), ProjPoint(1, 0, 1), ProjPoint(1, 1, 0))


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def zone_of_triangle(t: Sequence[Sequence[int]], word=(), depth=None) -> Zone:
    v1, v2, v3 = t
    soul = normalize(_add(_add(v1, v2), v3))
    verts = Triangle(normalize(_add(v2, v3)), normalize(_add(v3, v1)), normalize(_add(v1, v2)))
    return Zone(tuple(word), soul, verts, len(word) if depth is None else depth)


def child_triangles(t: Sequence[Sequence[int]]) -> tuple[tuple, tuple, tuple]:
    """The three children psi_a psi_i(DELTA), i = 1, 2, 3, of t = psi_a(DELTA)."""
    v1, v2, v3 = t
    return ((v1, _add(v1, v2), _add(v1, v3)),
            (_add(v2, v1), v2, _add(v2, v3)),
            (_add(v3, v1), _add(v3, v2), v3))


def iter_zones(max_depth: int) -> Iterator[Zone]:
    """Breadth-first zones through ``max_depth``; 3**k of them at depth k."""
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    level = [((), tuple(tuple(v) for v in DELTA))]
    for depth in range(max_depth + 1):
        nxt = []
        for word, t in level:
            yield zone_of_triangle(t, word, depth)
            if depth < max_depth:
                for i, c in enumerate(child_triangles(t), start=1):
                    nxt.append((word + (i,), c))
        level = nxt


def generate_zones(max_depth: int) -> list[Zone]:
    return list(iter_zones(max_depth))


def zone_count(max_depth: int) -> int:
    return (3 ** (max_depth + 1) - 1) // 2


def zone_triangle(word: Sequence[int]) -> Triangle:
    return Triangle(*(normalize(apply_word_raw(word, v)) for v in DELTA))


def zone_for_word(word: Sequence[int]) -> Zone:
    return zone_of_triangle(zone_triangle(word), word)


# ---------------------------------------------------------------------------
# bulk tables (numpy) for the dimension estimators

def triangle_table(max_depth: int) -> tuple[np.ndarray, np.ndarray]:
    """Enclosing triangles of all zones through ``max_depth`` in breadth-first order.

    Returns ``(tri, depth)`` with ``tri`` of shape (n, 3, 3): ``tri[z, j]`` is
    the j-th vertex.  Coordinates stay below 2**40 for any depth this
    package allows, so int64 is exact.
    """
    if max_depth > 20:
        raise ValueError("depth > 20 would overflow the int64 table")
    level = np.array([[list(v) for v in DELTA]], dtype=np.int64)
    tris, depths = [level], [np.zeros(1, dtype=np.int64)]
    for d in range(1, max_depth + 1):
        v1, v2, v3 = level[:, 0], level[:, 1], level[:, 2]
        c1 = np.stack([v1, v1 + v2, v1 + v3], axis=1)
        c2 = np.stack([v2 + v1, v2, v2 + v3], axis=1)
        c3 = np.stack([v3 + v1, v3 + v2, v3], axis=1)
        level = np.stack([c1, c2, c3], axis=1).reshape(-1, 3, 3)
        tris.append(level)
        depths.append(np.full(len(level), d, dtype=np.int64))
    return np.concatenate(tris), np.concatenate(depths)


def souls_from_table(tri: np.ndarray) -> np.ndarray:
    s = tri.sum(axis=1)
    g = np.gcd.reduce(s, axis=1)
    return s // g[:, None]


# ---------------------------------------------------------------------------
# containment and labeling

def contains(t, p: Sequence[int]) -> bool:
    """Closed containment of a point of the nonnegative cone in a triangle/zone."""
    if isinstance(t, Zone):
        t = t.vertices
    a, b, c = t
    d = det3((a, b, c))
    if d == 0:
        raise ValueError("degenerate triangle")
    s = 1 if d > 0 else -1
    return (s * det3((p, b, c)) >= 0 and s * det3((a, p, c)) >= 0
            and s * det3((a, b, p)) >= 0)


def square_labels(p: Sequence[int]) -> set[ProjPoint]:
    """Square zones h_i >= |h_j| + |h_k| containing p (any sign)."""
    p = normalize(p)
    a = [abs(t) for t in p]
    out = set()
    for i in range(3):
        if a[i] >= a[(i + 1) % 3] + a[(i + 2) % 3]:
            out.add(UNIT_VECTORS[i])
    return out


def soul_of_direction(p: Sequence[int]) -> frozenset[ProjPoint]:
    """Souls of every closed stability zone containing the rational direction ``p``.

    Reduce into the nonnegative cone, run the reduction map to a point with a
    vanishing coordinate (which lies in one to three square zones), then pull
    the labels back through the recorded steps.
    """
    q, sym = symmetry_reduce(p)
    runs, (a, b, c) = phi_reduce_compressed(q)
    labels = []
    if a >= b + c:
        labels.append((1, 0, 0))
    if b >= a + c:
        labels.append((0, 1, 0))
    if c >= a + b:
        labels.append((0, 0, 1))
    for kind, n in reversed(runs):
        if kind == "S":
            labels = [(x, y + n * x, z + n * x) for x, y, z in labels]
        else:
            labels = [(z, x, y) for x, y, z in labels]
    return frozenset(sym(l) for l in labels)


def tree_souls(p: Sequence[int], max_depth: int = 12) -> frozenset[ProjPoint] | None:
    """Labels of ``p`` read off the zone tree by closed containment.

    Independent of the reduction map: descends every closed child triangle
    containing ``p`` using determinant signs only.  Returns ``None`` when the
    finite tree does not resolve ``p``, i.e. when ``p`` sits in a remainder
    triangle of depth ``max_depth + 1`` other than at one of its vertices.
    Only points of the nonnegative cone are accepted.
    """
    p = normalize(p)
    if min(p) < 0:
        raise ValueError("tree_souls works in the nonnegative cone")
    labels = set(square_labels(p))
    root = tuple(tuple(v) for v in DELTA)
    if not contains(root, p):
        return frozenset(labels)
    stack = [(root, 0)]
    while stack:
        t, depth = stack.pop()
        z = zone_of_triangle(t)
        if contains(z.vertices, p):
            labels.add(z.soul)
        for c in child_triangles(t):
            if not contains(c, p):
                continue
            if depth == max_depth:
                if p not in [normalize(v) for v in c]:
                    return None
            else:
                stack.append((c, depth + 1))
    return frozenset(labels)



def _det_rows(a, b, c):
    """Row-wise 3x3 determinants of stacked integer vectors."""
    return (a[:, 0] * (b[:, 1] * c[:, 2] - b[:, 2] * c[:, 1])
            - a[:, 1] * (b[:, 0] * c[:, 2] - b[:, 2] * c[:, 0])
            + a[:, 2] * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0]))


def _closed_in(t, p):
    """Closed containment of p[r] in triangle t[r] (rows), by determinant signs."""
    v1, v2, v3 = t[:, 0], t[:, 1], t[:, 2]
    s = np.sign(_det_rows(v1, v2, v3))
    return ((s * _det_rows(p, v2, v3) >= 0) & (s * _det_rows(v1, p, v3) >= 0)
            & (s * _det_rows(v1, v2, p) >= 0))


def _primitive_rows(v):
    g = np.gcd.reduce(np.abs(v), axis=1)
    return v // g[:, None]


def tree_souls_batch(points: Sequence[Sequence[int]], max_depth: int = 12) -> list[frozenset | None]:
    """Vectorized ``tree_souls`` for many points of the nonnegative cone.

    Every (point, triangle) pair whose closed triangle contains the point is
    kept as a row, so points on shared edges follow all branches exactly as
    the scalar descent does.
    """
    P = np.array([tuple(normalize(p)) for p in points], dtype=np.int64).reshape(-1, 3)
    if len(P) and P.min() < 0:
        raise ValueError("tree_souls_batch works in the nonnegative cone")
    n = len(P)
    labels: list[set] = [set() for _ in range(n)]
    a = np.abs(P)
    for i in range(3):
        hit = np.nonzero(a[:, i] >= a[:, (i + 1) % 3] + a[:, (i + 2) % 3])[0]
        for r in hit:
            labels[r].add(UNIT_VECTORS[i])
    unresolved = np.zeros(n, dtype=bool)
    root = np.array([list(v) for v in DELTA], dtype=np.int64)
    idx = np.arange(n)
    tri = np.broadcast_to(root, (n, 3, 3)).copy()
    keep = _closed_in(tri, P)
    idx, tri = idx[keep], tri[keep]
    for depth in range(max_depth + 1):
        if len(idx) == 0:
            break
        p = P[idx]
        v1, v2, v3 = tri[:, 0], tri[:, 1], tri[:, 2]
        zone = np.stack([v2 + v3, v3 + v1, v1 + v2], axis=1)
        inz = _closed_in(zone, p)
        souls = _primitive_rows(v1 + v2 + v3)
        for r in np.nonzero(inz)[0]:
            labels[idx[r]].add(ProjPoint(*(int(t) for t in souls[r])))
        kids = (np.stack([v1, v1 + v2, v1 + v3], axis=1),
                np.stack([v2 + v1, v2, v2 + v3], axis=1),
                np.stack([v3 + v1, v3 + v2, v3], axis=1))
        nidx, ntri = [], []
        for c in kids:
            m = _closed_in(c, p)
            if depth == max_depth:
                # a point left inside a remainder triangle is resolved only at its corners
                pc = p[m]
                cc = c[m]
                at_vertex = np.zeros(len(pc), dtype=bool)
                for k in range(3):
                    at_vertex |= (_same_point_rows(cc[:, k], pc))
                unresolved[idx[m][~at_vertex]] = True
            else:
                nidx.append(idx[m])
                ntri.append(c[m])
        if depth < max_depth:
            idx = np.concatenate(nidx)
            tri = np.concatenate(ntri)
    return [None if unresolved[r] else frozenset(labels[r]) for r in range(n)]


def _same_point_rows(u, v):
    """Rows where u and v are proportional (same projective point)."""
    c0 = u[:, 1] * v[:, 2] - u[:, 2] * v[:, 1]
    c1 = u[:, 2] * v[:, 0] - u[:, 0] * v[:, 2]
    c2 = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    return (c0 == 0) & (c1 == 0) & (c2 == 0)

# ---------------------------------------------------------------------------
# metrics in the area chart

class ZoneMetrics(NamedTuple):
    area: Fraction
    perimeter: float
    inradius: float


def _chart_vertices(t) -> list[ProjPoint]:
    out = []
    for v in t:
        w = normalize(matvec(AREA_CHART_MATRIX, v))
        if w[2] == 0:
            raise DegenerateChart(f"vertex {tuple(v)} maps to infinity in the area chart")
        if w[2] < 0:
            w = ProjPoint(-w[0], -w[1], -w[2])
        out.append(w)
    return out


def triangle_area(t) -> Fraction:
    """Exact area of a projective triangle in the area chart."""
    w = _chart_vertices(t)
    return Fraction(abs(det3(w)), 2 * w[0][2] * w[1][2] * w[2][2])


def zone_area_product(z: Zone) -> Fraction:
    """Closed form 1/((z0+z1)(z1+z2)(z2+z0)) from the enclosing triangle."""
    z0, z1, z2 = (w[2] for w in _chart_vertices(z.enclosing()))
    return Fraction(1, (z0 + z1) * (z1 + z2) * (z2 + z0))


def soul_sup_norm(z: Zone) -> int:
    """||soul||_inf in the area chart: the sum of the enclosing vertices' z's."""
    return sum(w[2] for w in _chart_vertices(z.enclosing()))


def zone_metrics(z) -> ZoneMetrics:
    t = z.vertices if isinstance(z, Zone) else z
    w = _chart_vertices(t)
    area = Fraction(abs(det3(w)), 2 * w[0][2] * w[1][2] * w[2][2])
    pts = [(x / zz, y / zz) for x, y, zz in w]
    per = sum(math.dist(pts[i], pts[(i + 1) % 3]) for i in range(3))
    return ZoneMetrics(area, per, 2.0 * float(area) / per)


def metrics_table(tri: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorized float metrics of the zones carried by enclosing triangles ``tri``.

    Returns area, perimeter and inradius of each zone, plus the chart
    coordinates of its vertices (key ``xy``, shape (n, 3, 2)).
    """
    m = np.array(AREA_CHART_MATRIX, dtype=np.int64)
    p = np.einsum("rc,nvc->nvr", m, tri)  # every chart vertex is 2x primitive
    w = np.stack([p[:, 1] + p[:, 2], p[:, 2] + p[:, 0], p[:, 0] + p[:, 1]], axis=1)
    xy = w[:, :, :2] / w[:, :, 2:3]
    e = np.roll(xy, -1, axis=1) - xy
    per = np.sqrt((e ** 2).sum(axis=2)).sum(axis=1)
    z = p[:, :, 2] // 2
    area = 1.0 / ((z[:, 0] + z[:, 1]) * (z[:, 1] + z[:, 2]) * (z[:, 2] + z[:, 0])).astype(float)
    return {"area": area, "perimeter": per, "inradius": 2.0 * area / per, "xy": xy,
            "sup_norm": z.sum(axis=1)}


# ---------------------------------------------------------------------------
# Tribonacci spirals and points of the chaotic set

def tribonacci_sequence(seeds: Sequence[Sequence[int]], n: int) -> list[ProjPoint]:
    """Labels l_k = l_{k-1} + l_{k-2} + l_{k-3}, seeds included in the count."""
    seeds = [tuple(s) for s in seeds]
    if len(seeds) != 3 or len({normalize(s) for s in seeds}) != 3:
        raise ValueError("need three pairwise distinct seed labels")
    raw = list(seeds)
    while len(raw) < n:
        raw.append(_add(_add(raw[-1], raw[-2]), raw[-3]))
    return [normalize(v) for v in raw[:n]]


def tribonacci_limit() -> tuple[float, float, float]:
    alpha, _, _ = tribonacci_constants()
    return (alpha * alpha - alpha - 1.0, alpha - 1.0, 1.0)


def _z1(v) -> tuple[float, float]:
    x, y = chart(v, "z1")
    return float(x), float(y)


def e_point_estimate(word_prefix: Sequence[int]) -> tuple[tuple[float, float], float]:
    """Centroid and diameter (z=1 chart) of the nested triangle psi_prefix(DELTA).

    Any infinite extension of the prefix containing every index infinitely
    often converges to a point of the chaotic set inside this triangle, so
    the diameter bounds the error of the centroid.
    """
    if not {1, 2, 3} <= set(word_prefix):
        raise PreconditionViolation("prefix must contain each of 1, 2, 3")
    t = zone_triangle(word_prefix)
    pts = [chart(v, "z1") for v in t]
    diam = max(math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
               for i, j in ((0, 1), (1, 2), (0, 2)))
    cx = float(sum(q[0] for q in pts) / 3)
    cy = float(sum(q[1] for q in pts) / 3)
    return (cx, cy), float(diam)


def norm_bounds(depth: int) -> tuple[float, float]:
    """Per-level bounds sqrt(2(k+1)^2 + 1) <= ||soul||_2 <= sqrt(3) alpha^k."""
    alpha, _, _ = tribonacci_constants()
    return math.sqrt(2 * (depth + 1) ** 2 + 1), math.sqrt(3.0) * alpha ** depth


def iter_direction_grid(N: int) -> Iterable[tuple[int, int, int]]:
    """Primitive (m, n, N) with 0 < n < m < N."""
    for m in range(2, N):
        for n in range(1, m):
            if math.gcd(m, n, N) == 1:
                yield (m, n, N)
