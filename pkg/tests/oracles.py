"""Slow, independent reference computations used to check the package.

Nothing here imports the code under test except for plain data types; each
function recomputes its answer from first principles (literal definitions,
Fractions, brute force).
"""

from fractions import Fraction
from math import gcd


def prim(v):
    g = gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    v = tuple(t // g for t in v)
    for t in v:
        if t:
            return v if t > 0 else tuple(-x for x in v)
    raise ValueError("zero")


def phi_literal(h):
    """Iterate the reduction map one step at a time; returns (steps, terminal)."""
    h = list(h)
    steps = []
    while all(h):
        a, b, c = h
        if 0 <= a <= b and a <= c:
            h = [a, b - a, c - a]
            steps.append("S")
        else:
            h = [b, c, a]
            steps.append("R")
    return steps, prim(h)


def shoelace(pts):
    s = Fraction(0)
    for i in range(len(pts)):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % len(pts)]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def area_chart_point(v):
    m = ((-1, 1, 1), (1, 1, -1), (1, 1, 1))
    x, y, z = (sum(m[r][c] * v[c] for c in range(3)) for r in range(3))
    return Fraction(x, z), Fraction(y, z)


def zones_by_vertex_sums(depth):
    """Zones as (soul, vertices) built directly from the vertex-sum rule."""
    out = []
    level = [((0, 1, 1), (1, 0, 1), (1, 1, 0))]
    for _ in range(depth + 1):
        nxt = []
        for v1, v2, v3 in level:
            add = lambda a, b: tuple(x + y for x, y in zip(a, b))
            w1, w2, w3 = add(v2, v3), add(v3, v1), add(v1, v2)
            out.append((prim(add(add(v1, v2), v3)), (w1, w2, w3)))
            nxt += [(v1, w3, w2), (w3, v2, w1), (w2, w1, v3)]
        level = nxt
    return out


def point_in_chart_triangle(tri, p):
    """Closed containment of a planar Fraction point in a planar triangle."""
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    d = [cross(tri[i], tri[(i + 1) % 3], p) for i in range(3)]
    return all(x >= 0 for x in d) or all(x <= 0 for x in d)


def box_count_brute(depth, n):
    """Squares of side 2^-n meeting Δ (area chart) that no single zone contains."""
    S = 2 ** n
    tris = [[area_chart_point(w) for w in verts] for _, verts in zones_by_vertex_sums(depth)]
    count = 0
    for i in range(S):
        for j in range(S - i):
            corners = [(Fraction(i + a, S), Fraction(j + b, S)) for a in (0, 1) for b in (0, 1)]
            if not any(all(point_in_chart_triangle(t, c) for c in corners) for t in tris):
                count += 1
    return count


def tribonacci_raw(n):
    seq = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    while len(seq) < n:
        seq.append(tuple(a + b + c for a, b, c in zip(seq[-1], seq[-2], seq[-3])))
    return [prim(v) for v in seq[:n]]
