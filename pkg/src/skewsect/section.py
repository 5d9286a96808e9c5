"""Exact tracing of the critical plane section through the saddle P.

For a direction ``H = (m, n, N)`` with positive entries the plane
``<H, x - P> = 0`` meets the surface in a graph.  In lattice coordinates the
plane is ``<H, y> = 0`` and P is the origin.  The monkey saddles of the
foliation are the vertices whose lattice coordinates all share one parity
(P-type: all even, P'-type: all odd); every other vertex is a regular point
of the level set.

Six separatrix rays leave the origin, one inside each incident face.  Each
ray is followed face by face until it stops at a saddle.  If that saddle is
P'-type the section has a saddle connection; otherwise the six rays pair up
into three closed critical loops whose lattice displacements give their
homology classes in the torus.

All arithmetic is on integers: points are stored as ``D * y`` with
``D = lcm(H)``, which makes every edge crossing integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import NonTransverse, StepLimitExceeded
from .projective import ProjPoint, normalize
from .surface import (
    BasisCycle,
    CoverFace,
    basis_cycles,
    edge_directions,
    faces_at_vertex,
    from_lattice,
    link_cycle,
)

DEFAULT_STEP_CAP = 10_000_000


class Direction(NamedTuple):
    m: int
    n: int
    N: int

    @classmethod
    def of(cls, h: Sequence[int]) -> "Direction":
        m, n, N = (int(t) for t in h)
        if min(m, n, N) < 1:
            raise ValueError(f"direction entries must be positive, got {(m, n, N)}")
        if math.gcd(m, n, N) != 1:
            raise ValueError(f"direction {(m, n, N)} is not primitive")
        return cls(m, n, N)


class Segment(NamedTuple):
    face: CoverFace
    entry: tuple[int, int, int]   # scaled lattice coordinates (D * y)
    exit: tuple[int, int, int]


@dataclass
class CriticalLoop:
    """Closed critical arc from the origin to a lift of P.

    ``segments`` run from the origin to ``lift_end`` (lattice coordinates);
    the displacement in the torus is ``lift_end / 2``.
    """

    H: Direction
    scale: int
    segments: list[Segment]
    lift_end: tuple[int, int, int]
    sectors: tuple[int, int] = (-1, -1)

    @property
    def displacement(self) -> tuple[int, int, int]:
        return tuple(t // 2 for t in self.lift_end)

    def points(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Vertices of the polyline in torus-cover coordinates x."""
        pts = [self.segments[0].entry] + [s.exit for s in self.segments]
        return [from_lattice(tuple(Fraction(t, self.scale) for t in p)) for p in pts]

    def reversed(self) -> "CriticalLoop":
        u = self.lift_end
        shift = tuple(-t * self.scale for t in u)
        segs = [Segment(s.face.translate(tuple(-t for t in u)),
                        _add(s.exit, shift), _add(s.entry, shift))
                for s in reversed(self.segments)]
        return CriticalLoop(self.H, self.scale, segs, tuple(-t for t in u),
                            (self.sectors[1], self.sectors[0]))

    def rerooted(self, k: int) -> "CriticalLoop":
        """Same cycle started at segment ``k``; the start point moves off P."""
        k %= len(self.segments)
        u = self.lift_end
        shift = tuple(t * self.scale for t in u)
        segs = self.segments[k:] + [Segment(s.face.translate(u), _add(s.entry, shift),
                                            _add(s.exit, shift))
                                    for s in self.segments[:k]]
        return CriticalLoop(self.H, self.scale, segs, u, self.sectors)


class NoLabelReason(Enum):
    SADDLE_CONNECTION = "SaddleConnection"
    ALL_LOOPS_NULL = "AllLoopsNullHomologous"
    MULTIPLE_NONZERO = "MultipleNonzeroLoops"
    STEP_LIMIT = "StepLimit"


@dataclass(frozen=True)
class NoLabel:
    reason: NoLabelReason
    detail: str = ""

    def __str__(self):
        return f"NoLabel({self.reason.value}{': ' + self.detail if self.detail else ''})"


@dataclass(frozen=True)
class SaddleConnection:
    sector: int
    saddle: tuple[int, int, int]   # lattice coordinates of the P'-type vertex reached


@dataclass
class TraceResult:
    H: Direction
    loops: list[CriticalLoop] = field(default_factory=list)
    saddle_connection: SaddleConnection | None = None
    segment_count: int = 0


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def _is_saddle(v) -> bool:
    return v[0] % 2 == v[1] % 2 == v[2] % 2


def _level_crosses(face: CoverFace, v, H) -> bool:
    """Whether the level set through vertex ``v`` enters the interior of ``face``."""
    (j, sj), (k, sk) = edge_directions(face, v)
    return (sj * H[j] > 0) != (sk * H[k] > 0)


def _other_endpoint(face: CoverFace, entry, H, D):
    """Endpoint of the level segment in ``face`` that is not ``entry``."""
    i = face.axis
    j, k = face.others()
    hj, hk = H[j], H[k]
    a = face.plane
    sj, sk = face.cell[j], face.cell[k]
    rhs = -H[i] * a * D
    lo_j, hi_j, lo_k, hi_k = sj * D, (sj + 1) * D, sk * D, (sk + 1) * D
    for yj in (lo_j, hi_j):
        yk = (rhs - hj * yj) // hk
        if lo_k <= yk <= hi_k:
            p = [0, 0, 0]
            p[i], p[j], p[k] = a * D, yj, yk
            p = tuple(p)
            if p != entry:
                return p
    for yk in (lo_k, hi_k):
        yj = (rhs - hk * yk) // hj
        if lo_j <= yj <= hi_j:
            p = [0, 0, 0]
            p[i], p[j], p[k] = a * D, yj, yk
            p = tuple(p)
            if p != entry:
                return p
    raise AssertionError(f"level segment in {face} has no second endpoint")


def _trace_arc(H, D, face: CoverFace, cap: int):
    """Follow a separatrix from the origin into ``face`` until it reaches a saddle."""
    entry = (0, 0, 0)
    segs = []
    while True:
        if len(segs) >= cap:
            raise StepLimitExceeded(f"arc exceeded {cap} segments for H={tuple(H)}")
        ex = _other_endpoint(face, entry, H, D)
        segs.append(Segment(face, entry, ex))
        i = face.axis
        j, k = face.others()
        on_j = ex[j] % D == 0
        on_k = ex[k] % D == 0
        if on_j and on_k:
            v = (ex[0] // D, ex[1] // D, ex[2] // D)
            if _is_saddle(v):
                return segs, v, face
            nxt = [f for f in faces_at_vertex(v) if f != face and _level_crosses(f, v, H)]
            if len(nxt) != 1:
                raise AssertionError(f"regular vertex {v} continues into {len(nxt)} faces")
            face = nxt[0]
        else:
            # crossing the edge parallel to the free coordinate; switch planes
            fixed, free = (j, k) if on_j else (k, j)
            b = ex[fixed] // D
            a = face.plane
            s_free = face.cell[free]
            cell = [0, 0, 0]
            cell[fixed] = b
            cell[free] = s_free
            cell[i] = a if (a + s_free) % 2 else a - 1
            face = CoverFace(fixed, tuple(cell))
        entry = ex


def start_faces() -> list[CoverFace]:
    """The six faces at the origin, in counterclockwise link order."""
    return [f for f in link_cycle((0, 0, 0)) if isinstance(f, CoverFace)]


def trace_critical_loops(H: Sequence[int], cap: int = DEFAULT_STEP_CAP) -> TraceResult:
    """Trace the six separatrices at P and pair them into three critical loops."""
    H = Direction.of(H)
    D = math.lcm(*H)
    starts = start_faces()
    index = {f: r for r, f in enumerate(starts)}
    result = TraceResult(H)
    arcs = {}
    for r, f in enumerate(starts):
        if r in arcs:
            continue
        segs, v, last = _trace_arc(H, D, f, cap)
        result.segment_count += len(segs)
        if v[0] % 2:
            result.saddle_connection = SaddleConnection(r, v)
            return result
        s = index.get(last.translate(tuple(-t for t in v)))
        if s is None or s == r:
            raise AssertionError(f"arc from sector {r} arrived through an unexpected face {last}")
        loop = CriticalLoop(H, D, segs, v, (r, s))
        arcs[r] = loop
        arcs[s] = loop.reversed()
        result.loops.append(loop)
    if len(result.loops) != 3:
        raise AssertionError("separatrices did not pair into three loops")
    return result


def loop_class(loop: CriticalLoop) -> tuple[int, int, int]:
    """Homology class in the torus: displacement of the lift endpoints."""
    first, last = loop.segments[0].entry, loop.segments[-1].exit
    d = tuple(b - a for a, b in zip(first, last))
    if any(t % (2 * loop.scale) for t in d):
        raise ValueError("loop endpoints are not lifts of the same torus point")
    return tuple(t // (2 * loop.scale) for t in d)


# ---------------------------------------------------------------------------
# intersection numbers on the surface

def _unit_circle_pos(idx: int) -> tuple[float, float]:
    ang = 2.0 * math.pi * idx / 12.0
    return math.cos(ang), math.sin(ang)


def _vertex_crossing(v, face_in: CoverFace, face_out: CoverFace, axis: int) -> int:
    """Signed crossing at vertex ``v`` of a curve passing face_in -> face_out
    with the axis line through ``v`` oriented along +axis."""
    cyc = link_cycle(v)
    pos = {item: n for n, item in enumerate(cyc)}
    a, b = pos[face_in], pos[face_out]
    c, d = pos[(axis, -1)], pos[(axis, 1)]

    def between(x):
        return 0 < (x - a) % 12 < (b - a) % 12

    if between(c) == between(d):
        return 0
    ax, ay = _unit_circle_pos(a)
    bx, by = _unit_circle_pos(b)
    cx, cy = _unit_circle_pos(c)
    dx, dy = _unit_circle_pos(d)
    z = (bx - ax) * (dy - cy) - (by - ay) * (dx - cx)
    return 1 if z > 0 else -1


def _edge_crossing(seg: Segment, axis: int) -> int:
    """Sign of crossing the +axis edge at ``seg.exit``, read in ``seg.face``."""
    t = tuple(q - p for p, q in zip(seg.entry, seg.exit))
    n = [0, 0, 0]
    n[seg.face.axis] = seg.face.normal_sign
    e = [0, 0, 0]
    e[axis] = 1
    tx = (t[1] * e[2] - t[2] * e[1], t[2] * e[0] - t[0] * e[2], t[0] * e[1] - t[1] * e[0])
    s = n[0] * tx[0] + n[1] * tx[1] + n[2] * tx[2]
    if s == 0:
        raise NonTransverse("loop runs along the basis cycle")
    return 1 if s > 0 else -1


def _junctions(loop: CriticalLoop):
    """(point, incoming segment, outgoing face) at every corner of the closed loop."""
    segs = loop.segments
    D = loop.scale
    shift = tuple(-t * D for t in loop.lift_end)
    back = tuple(-t for t in loop.lift_end)
    for n in range(len(segs)):
        s_in = segs[n]
        if n + 1 < len(segs):
            yield s_in.exit, s_in, segs[n + 1].face
        else:
            # closing corner: move the last segment back next to the first one
            moved = Segment(s_in.face.translate(back), _add(s_in.entry, shift),
                            _add(s_in.exit, shift))
            yield moved.exit, moved, segs[0].face


def intersection_number(loop: CriticalLoop, b: BasisCycle) -> int:
    """Algebraic intersection of a closed critical loop with a basis cycle."""
    D = loop.scale
    total = 0
    for p, s_in, f_out in _junctions(loop):
        on = [p[t] % D == 0 for t in range(3)]
        if all(on):
            v = tuple(t // D for t in p)
            j, k = (t for t in range(3) if t != b.axis)
            if b.contains_edge(b.axis, v[j], v[k]):
                total += _vertex_crossing(v, s_in.face, f_out, b.axis)
            continue
        free = [t for t in range(3) if not on[t]]
        if len(free) != 1:
            raise AssertionError("junction is not on an edge")
        axis = free[0]
        j, k = (t for t in range(3) if t != axis)
        if b.contains_edge(axis, p[j] // D, p[k] // D):
            total += _edge_crossing(s_in, axis)
    return total


# ---------------------------------------------------------------------------
# the labeling algorithm

def soul_triple(loop: CriticalLoop) -> tuple[int, int, int]:
    return tuple(intersection_number(loop, b) for b in basis_cycles())


def numerical_soul(H: Sequence[int], cap: int = DEFAULT_STEP_CAP) -> ProjPoint | NoLabel:
    """Label a direction from its critical loops at P.

    The gate is the usual one (exactly one loop with a nonzero class), but
    the triple is read off the null-homologous loops: each bounds a disc in
    the cutting plane, and the intersection numbers of its boundary with the
    b_i are the linking numbers of b_i with that cap, i.e. the class of the
    capped torus.  The nonzero loop's own intersection numbers depend on its
    class in H_1 of the surface, not only in the torus, so they are not used.
    """
    try:
        res = trace_critical_loops(H, cap)
    except StepLimitExceeded as exc:
        return NoLabel(NoLabelReason.STEP_LIMIT, str(exc))
    if res.saddle_connection is not None:
        sc = res.saddle_connection
        return NoLabel(NoLabelReason.SADDLE_CONNECTION, f"sector {sc.sector} reaches {sc.saddle}")
    classes = [loop_class(lp) for lp in res.loops]
    nonzero = [c for c in classes if any(c)]
    if not nonzero:
        return NoLabel(NoLabelReason.ALL_LOOPS_NULL)
    if len(nonzero) > 1:
        return NoLabel(NoLabelReason.MULTIPLE_NONZERO, f"{len(nonzero)} loops")
    labels = set()
    for lp, c in zip(res.loops, classes):
        if any(c):
            continue
        t = soul_triple(lp)
        if any(t):
            labels.add(normalize(t))
    if not labels:
        return NoLabel(NoLabelReason.ALL_LOOPS_NULL, "null loops do not link the basis cycles")
    if len(labels) > 1:
        return NoLabel(NoLabelReason.MULTIPLE_NONZERO,
                       "null loops give different triples: " + ", ".join(map(str, sorted(labels))))
    return labels.pop()


# ---------------------------------------------------------------------------
# geography of the projected region Q- for H = (alpha, beta, 1)

class CellClass(Enum):
    BRIDGE = "Bridge"
    ISLAND = "Island"
    CAPE = "Cape"
    EMPTY = "Empty"


def classify_cell(alpha, beta, c, axis: str, j: int, k: int, m: int) -> CellClass:
    """Type of the piece (half-square) ∩ (strip m <= c - alpha x - beta y <= m + 1/2).

    ``axis="x-half"`` is the square [j+1/2, j+1] x [k, k+1/2] between the
    mainlands at (j, k) and (j+1, k); ``"y-half"`` is the transposed one.
    """
    alpha, beta, c = Fraction(alpha), Fraction(beta), Fraction(c)
    if axis == "y-half":
        alpha, beta, j, k = beta, alpha, k, j
    elif axis != "x-half":
        raise ValueError(f"axis must be 'x-half' or 'y-half', got {axis!r}")
    half = Fraction(1, 2)
    lo = c - alpha * (j + half) - beta * (k + half) - half
    hi = c - alpha * (j + 1) - beta * k
    if lo <= m <= hi:
        return CellClass.BRIDGE
    if lo >= m >= hi:
        return CellClass.ISLAND
    # range of the linear form over the half-square
    fmin = c - alpha * (j + 1) - beta * (k + half)
    fmax = c - alpha * (j + half) - beta * k
    if fmax < m or fmin > m + half:
        return CellClass.EMPTY
    return CellClass.CAPE
