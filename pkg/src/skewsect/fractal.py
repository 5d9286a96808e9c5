"""Dimension estimates for the chaotic set from a finite zone tree.

Everything happens in the area chart, where Δ is the triangle with vertices
(0,0), (1,0), (0,1).  The approximation of E at depth d is Δ minus the open
zone triangles generated up to depth d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientPoints
from .projective import AREA_CHART_MATRIX
from .zones import metrics_table, triangle_table

DELTA_AREA = 0.5
DELTA_PERIMETER = 2.0 + math.sqrt(2.0)


@dataclass
class ZoneGeometry:
    """Zone triangles in the area chart, sorted by inradius (largest first).

    ``hom`` holds integer homogeneous vertices (third entry > 0) for exact
    point-in-triangle tests; the float arrays feed the volume formula.
    """

    hom: np.ndarray        # (n, 3, 3) int64
    xy: np.ndarray         # (n, 3, 2)
    area: np.ndarray
    perimeter: np.ndarray
    inradius: np.ndarray

    def __len__(self):
        return len(self.area)

    @classmethod
    def from_table(cls, tri: np.ndarray) -> "ZoneGeometry":
        met = metrics_table(tri)
        m = np.array(AREA_CHART_MATRIX, dtype=np.int64)
        p = np.einsum("rc,nvc->nvr", m, tri)
        hom = np.stack([p[:, 1] + p[:, 2], p[:, 2] + p[:, 0], p[:, 0] + p[:, 1]], axis=1)
        order = np.argsort(-met["inradius"], kind="stable")
        return cls(hom[order], met["xy"][order], met["area"][order],
                   met["perimeter"][order], met["inradius"][order])

    @classmethod
    def at_depth(cls, depth: int) -> "ZoneGeometry":
        tri, _ = triangle_table(depth)
        return cls.from_table(tri)

    @classmethod
    def empty(cls) -> "ZoneGeometry":
        z = np.zeros(0)
        return cls(np.zeros((0, 3, 3), dtype=np.int64), np.zeros((0, 3, 2)), z, z, z)

    def subset(self, idx) -> "ZoneGeometry":
        return ZoneGeometry(self.hom[idx], self.xy[idx], self.area[idx],
                            self.perimeter[idx], self.inradius[idx])


# ---------------------------------------------------------------------------
# Minkowski volume

@dataclass(frozen=True)
class VolumeTerms:
    eps: float
    k: int                 # zones with inradius >= eps
    linear: float          # eps * (p + sum p_i)
    constant: float        # A - sum a_i
    quadratic: float       # eps^2 * (pi - sum p_i^2 / (4 a_i)); may be negative
    value: float


class _Prefix:
    """Cumulative sums so that each volume evaluation is O(log n)."""

    def __init__(self, g: ZoneGeometry):
        self.neg_r = -g.inradius
        self.p = np.concatenate([[0.0], np.cumsum(g.perimeter)])
        self.a = np.concatenate([[0.0], np.cumsum(g.area)])
        self.q = np.concatenate([[0.0], np.cumsum(g.perimeter ** 2 / (4.0 * g.area))])

    def terms(self, eps: float) -> VolumeTerms:
        k = int(np.searchsorted(self.neg_r, -eps, side="right"))
        lin = eps * (DELTA_PERIMETER + self.p[k])
        const = DELTA_AREA - self.a[k]
        quad = eps * eps * (math.pi - self.q[k])
        return VolumeTerms(eps, k, lin, const, quad, lin + const + quad)


def minkowski_volume(zones: ZoneGeometry | None, eps: float) -> VolumeTerms:
    """Area of the eps-neighbourhood of Δ minus the open zones.

    Exact for the finite approximation: the outer band of Δ contributes
    ``p eps + pi eps^2`` and every zone with inradius >= eps keeps its inner
    parallel triangle, of area ``a - eps p + eps^2 p^2 / (4a)``.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if zones is None:
        zones = ZoneGeometry.empty()
    return _Prefix(zones).terms(eps)


@dataclass
class DimensionSeries:
    method: str
    rows: list[dict] = field(default_factory=list)   # n, scale, value, estimate (+ extras)
    fit_range: tuple[int, int] | None = None
    summary: float | None = None

    def column(self, key):
        return [r[key] for r in self.rows]


def minkowski_series(zones: ZoneGeometry | None, base: float = 1.2, n_max: int = 50,
                     window: tuple[int, int] = (15, 40)) -> DimensionSeries:
    """d_n = 2 - log V(E_eps) / log eps at eps = base^-n.

    Each row also carries the successive-difference form
    ``2 - (log V_n - log V_{n-1}) / (log eps_n - log eps_{n-1})``.
    ``summary`` is the median of the quotient form over ``window``.
    """
    if zones is None:
        zones = ZoneGeometry.empty()
    pre = _Prefix(zones)
    out = DimensionSeries("minkowski", fit_range=window)
    prev = None
    for n in range(1, n_max + 1):
        eps = base ** (-n)
        t = pre.terms(eps)
        d = 2.0 - math.log(t.value) / math.log(eps)
        diff = None
        if prev is not None:
            diff = 2.0 - (math.log(t.value) - math.log(prev.value)) / (math.log(eps) - math.log(prev.eps))
        out.rows.append({"n": n, "scale": eps, "value": t.value, "estimate": d,
                         "difference_estimate": diff, "zones_used": t.k,
                         "linear": t.linear, "constant": t.constant, "quadratic": t.quadratic})
        prev = t
    lo, hi = window
    inside = [r["estimate"] for r in out.rows if lo <= r["n"] <= hi]
    out.summary = float(np.median(inside)) if inside else None
    return out


def _point_in_zone_mask(xy: np.ndarray, pts: np.ndarray, eps: float) -> np.ndarray:
    """Points at distance > eps inside the triangle ``xy`` (float)."""
    inside = np.ones(len(pts), dtype=bool)
    e1, e2 = xy[1] - xy[0], xy[2] - xy[0]
    orient = np.sign(e1[0] * e2[1] - e1[1] * e2[0])
    for a in range(3):
        p, q = xy[a], xy[(a + 1) % 3]
        e = q - p
        L = math.hypot(e[0], e[1])
        dist = orient * (e[0] * (pts[:, 1] - p[1]) - e[1] * (pts[:, 0] - p[0])) / L
        inside &= dist > eps
    return inside


def monte_carlo_volume(zones: ZoneGeometry, eps: float, samples: int = 1_000_000,
                       seed: int = 0) -> tuple[float, float]:
    """Sampled area of E_eps and its standard error.

    A point belongs to E_eps unless it is farther than eps from the
    complement of the zones inside Δ, or farther than eps from Δ outside it.
    """
    rng = np.random.default_rng(seed)
    lo, hi = -eps, 1.0 + eps
    box = (hi - lo) ** 2
    pts = rng.uniform(lo, hi, size=(samples, 2))
    x, y = pts[:, 0], pts[:, 1]
    # distance to Δ for points outside it
    d_out = np.zeros(samples)
    cand = np.stack([np.clip(x, 0, None), np.clip(y, 0, None)], axis=1)
    over = cand.sum(axis=1) > 1.0
    # project onto the hypotenuse segment when beyond it
    s = (cand[:, 0] - cand[:, 1] + 1.0) / 2.0
    s = np.clip(s, 0.0, 1.0)
    hyp = np.stack([s, 1.0 - s], axis=1)
    near = np.where(over[:, None], hyp, cand)
    d_out = np.hypot(x - near[:, 0], y - near[:, 1])
    in_delta = (x >= 0) & (y >= 0) & (x + y <= 1)
    member = np.where(in_delta, True, d_out <= eps)
    k = int(np.searchsorted(-zones.inradius, -eps, side="right"))
    for z in range(k):
        member &= ~_point_in_zone_mask(zones.xy[z], pts, eps)
    frac = member.mean()
    return box * frac, box * math.sqrt(frac * (1 - frac) / samples)


# ---------------------------------------------------------------------------
# box counting

def _edge_normals(hom: np.ndarray) -> np.ndarray:
    """(3, 3) integer normals w_a x w_{a+1}, oriented so the interior is >= 0."""
    n = np.stack([np.cross(hom[a], hom[(a + 1) % 3]) for a in range(3)])
    if int(np.dot(n[0], hom[2])) < 0:
        n = -n
    return n


def _squares_inside(hom: np.ndarray, xy: np.ndarray, S: int) -> int:
    """Grid squares of side 1/S lying in the closed triangle (exact corner tests)."""
    i0 = int(math.floor(xy[:, 0].min() * S))
    i1 = int(math.ceil(xy[:, 0].max() * S))
    j0 = int(math.floor(xy[:, 1].min() * S))
    j1 = int(math.ceil(xy[:, 1].max() * S))
    if i1 - i0 < 1 or j1 - j0 < 1:
        return 0
    I, J = np.meshgrid(np.arange(i0, i1 + 1, dtype=np.int64),
                       np.arange(j0, j1 + 1, dtype=np.int64), indexing="ij")
    ok = np.ones(I.shape, dtype=bool)
    for nx, ny, nz in _edge_normals(hom):
        ok &= I * nx + J * ny + S * nz >= 0
    full = ok[:-1, :-1] & ok[1:, :-1] & ok[:-1, 1:] & ok[1:, 1:]
    return int(full.sum())


def box_count(zones: ZoneGeometry | None, n: int) -> int:
    """Squares of side 2^-n meeting Δ in positive area and not inside a single zone.

    Zone interiors are disjoint, so the squares inside zones can be counted
    zone by zone; a square fits in a triangle only if the inradius is at
    least half its side, which prunes almost all of the tree.
    """
    S = 1 << n
    total = S * (S + 1) // 2
    if zones is None or len(zones) == 0:
        return total
    half = 0.5 / S
    k = int(np.searchsorted(-zones.inradius, -half * (1 - 1e-9), side="right"))
    inside = 0
    for z in range(k):
        inside += _squares_inside(zones.hom[z], zones.xy[z], S)
    return total - inside


def box_series(zones: ZoneGeometry | None, levels: range | list) -> DimensionSeries:
    out = DimensionSeries("boxcount")
    for n in levels:
        N = box_count(zones, n)
        out.rows.append({"n": n, "scale": 2.0 ** (-n), "value": N, "estimate": math.log2(N)})
    return out


def fit_slope(xs, ys, fit_range: tuple[int, int] | None = None) -> float:
    """Least-squares slope of ys against xs, optionally restricted to lo <= x <= hi."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if fit_range is not None:
        keep = (xs >= fit_range[0]) & (xs <= fit_range[1])
        xs, ys = xs[keep], ys[keep]
    if len(xs) < 3:
        raise InsufficientPoints(f"need at least 3 points to fit, got {len(xs)}")
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
