"""The PL surface {4,6|4} in the three-torus.

The surface is the zero set of ``theta(x) = mid(|2x1-1|, |2x2-1|, |2x3-1|) - 1/2``.
It is easiest to handle in *lattice coordinates* ``y = 2x - 1/2``: there the
vertices are the integer points, and on every integer plane ``y_i = a`` the
faces are the unit squares ``[s_j, s_j+1] x [s_k, s_k+1]`` with ``s_j + s_k``
odd (a checkerboard).  One period of the torus is ``2Z^3`` in lattice
coordinates.

A cube ``prod [t_i, t_i+1]`` belongs to N- when at least two of the ``t_i`` are
even, to N+ otherwise; face normals point from N- to N+.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

QUARTER = Fraction(1, 4)


def theta(x: Sequence) -> Fraction:
    a = sorted(abs(2 * (Fraction(t) % 1) - 1) for t in x)
    return a[1] - Fraction(1, 2)


def in_negative_region(x: Sequence) -> bool:
    """At least two fractional parts of x - 1/4 lie in [0, 1/2]."""
    return sum(1 for t in x if (Fraction(t) - QUARTER) % 1 <= Fraction(1, 2)) >= 2


def to_lattice(x: Sequence) -> tuple:
    return tuple(2 * Fraction(t) - Fraction(1, 2) for t in x)


def from_lattice(y: Sequence) -> tuple:
    return tuple((Fraction(t) + Fraction(1, 2)) / 2 for t in y)


# ---------------------------------------------------------------------------
# faces in the universal cover (lattice coordinates)

class CoverFace(NamedTuple):
    """Face on the plane ``y_axis = cell[axis]`` with lower corner ``cell``."""

    axis: int
    cell: tuple[int, int, int]

    @property
    def plane(self) -> int:
        return self.cell[self.axis]

    @property
    def normal_sign(self) -> int:
        return 1 if self.plane % 2 else -1

    def translate(self, d: Sequence[int]) -> "CoverFace":
        return CoverFace(self.axis, tuple(c + e for c, e in zip(self.cell, d)))

    def others(self) -> tuple[int, int]:
        return tuple(k for k in range(3) if k != self.axis)

    def corners(self) -> list[tuple[int, int, int]]:
        """Corners in counterclockwise order about the outward normal."""
        j, k = self.others()
        out = []
        for dj, dk in ((0, 0), (1, 0), (1, 1), (0, 1)):
            c = list(self.cell)
            c[j] += dj
            c[k] += dk
            out.append(tuple(c))
        # (e_j, e_k) is positively oriented about +e_axis iff (axis, j, k) is cyclic
        cyclic = (j - self.axis) % 3 == 1
        if cyclic != (self.normal_sign > 0):
            out.reverse()
        return out


def is_face(axis: int, cell: Sequence[int]) -> bool:
    j, k = (t for t in range(3) if t != axis)
    return (cell[j] + cell[k]) % 2 == 1


def faces_at_vertex(v: Sequence[int]) -> list[CoverFace]:
    out = []
    for axis in range(3):
        j, k = (t for t in range(3) if t != axis)
        for sj in (v[j] - 1, v[j]):
            for sk in (v[k] - 1, v[k]):
                if (sj + sk) % 2:
                    c = [0, 0, 0]
                    c[axis], c[j], c[k] = v[axis], sj, sk
                    out.append(CoverFace(axis, tuple(c)))
    return out


def edge_directions(face: CoverFace, v: Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two edges of ``face`` at its corner ``v`` as (axis, +-1) pairs."""
    j, k = face.others()
    return ((j, 1 if face.cell[j] == v[j] else -1),
            (k, 1 if face.cell[k] == v[k] else -1))


def _vec(d):
    axis, s = d
    e = [0, 0, 0]
    e[axis] = s
    return e


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def link_cycle(v: Sequence[int]) -> list:
    """Cyclic order around vertex ``v``: alternating edge directions and faces.

    The list reads edge, face, edge, face, ... counterclockwise with respect
    to the surface orientation (twelve entries).
    """
    faces = faces_at_vertex(v)
    by_edge = {}
    for f in faces:
        for d in edge_directions(f, v):
            by_edge.setdefault(d, []).append(f)
    # orient each face: from edge a to edge b is ccw when n . (a x b) > 0
    succ = {}
    for f in faces:
        a, b = edge_directions(f, v)
        n = [0, 0, 0]
        n[f.axis] = f.normal_sign
        if sum(p * q for p, q in zip(n, _cross(_vec(a), _vec(b)))) < 0:
            a, b = b, a
        succ[a] = (f, b)
    start = next(iter(succ))
    out, d = [], start
    for _ in range(6):
        f, nxt = succ[d]
        out.extend([d, f])
        d = nxt
    if d != start or len(succ) != 6:
        raise AssertionError(f"vertex link at {tuple(v)} is not a hexagon")
    return out


# ---------------------------------------------------------------------------
# the mesh in the torus

@dataclass(frozen=True)
class Face:
    """Face in the torus keyed by (normal axis, plane offset, lower corner)."""

    axis: int
    offset: Fraction
    corner: tuple[Fraction, Fraction, Fraction]
    normal_sign: int

    @property
    def key(self):
        return (self.axis, self.offset, self.corner)

    def corners(self) -> list[tuple[Fraction, ...]]:
        j, k = (t for t in range(3) if t != self.axis)
        half = Fraction(1, 2)
        out = []
        for dj, dk in ((0, 0), (1, 0), (1, 1), (0, 1)):
            c = list(self.corner)
            c[j] = (c[j] + dj * half) % 1
            c[k] = (c[k] + dk * half) % 1
            out.append(tuple(c))
        return out


@dataclass
class SurfaceMesh:
    vertices: list[tuple[Fraction, Fraction, Fraction]]
    edges: list[tuple[int, int, int]]            # (vertex a, vertex b, axis): a -> b is +axis
    faces: list[Face]
    edge_faces: dict[int, list[int]] = field(default_factory=dict)
    vertex_faces: dict[int, list[int]] = field(default_factory=dict)
    vertex_edges: dict[int, list[int]] = field(default_factory=dict)

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    def to_json(self) -> dict:
        return {
            "format_version": 1,
            "vertices": [[str(c) for c in v] for v in self.vertices],
            "faces": [{"axis": f.axis, "offset": str(f.offset),
                       "normal": f.normal_sign,
                       "corners": [[str(c) for c in p] for p in f.corners()]}
                      for f in self.faces],
        }


def _torus_vertex(y: Sequence[int]) -> tuple[Fraction, ...]:
    return tuple(((Fraction(t) + Fraction(1, 2)) / 2) % 1 for t in y)


def build_surface() -> SurfaceMesh:
    """The 8 vertices, 24 edges and 12 faces of one period, with incidences.

    Edges are keyed by their axis and lower lattice endpoint mod 2: two
    different edges join the same pair of torus vertices (the inner and the
    outer half of an axis line), so endpoints alone do not identify an edge.
    """
    cube = list(itertools.product((0, 1), repeat=3))
    vertices = [_torus_vertex(y) for y in cube]
    vindex = {y: i for i, y in enumerate(cube)}

    edges, eindex = [], {}
    for y in cube:
        for axis in range(3):
            z = list(y)
            z[axis] = (z[axis] + 1) % 2
            eindex[(axis, y)] = len(edges)
            edges.append((vindex[y], vindex[tuple(z)], axis))

    faces, cover_faces = [], []
    for axis in range(3):
        j, k = (t for t in range(3) if t != axis)
        for plane in (0, 1):
            for sj in (0, 1):
                cell = [0, 0, 0]
                cell[axis], cell[j], cell[k] = plane, sj, 1 - sj
                cf = CoverFace(axis, tuple(cell))
                x = _torus_vertex(cell)
                faces.append(Face(axis, x[axis], x, cf.normal_sign))
                cover_faces.append(cf)

    mesh = SurfaceMesh(vertices, edges, faces)
    for fi, cf in enumerate(cover_faces):
        cs = cf.corners()
        for p, q in zip(cs, cs[1:] + cs[:1]):
            mesh.vertex_faces.setdefault(vindex[tuple(t % 2 for t in p)], []).append(fi)
            axis = next(t for t in range(3) if p[t] != q[t])
            lo = min(p, q, key=lambda c: c[axis])
            ei = eindex[(axis, tuple(t % 2 for t in lo))]
            mesh.edge_faces.setdefault(ei, []).append(fi)
    for ei, (a, b, _) in enumerate(edges):
        mesh.vertex_edges.setdefault(a, []).append(ei)
        mesh.vertex_edges.setdefault(b, []).append(ei)
    return mesh


def cover_face_of(face: Face) -> CoverFace:
    """Representative in lattice coordinates (cell entries in {0, 1})."""
    cell = tuple(int(2 * c - Fraction(1, 2)) % 2 for c in face.corner)
    return CoverFace(face.axis, cell)


# ---------------------------------------------------------------------------
# basis cycles

@dataclass(frozen=True)
class BasisCycle:
    axis: int
    lattice_offset: tuple[int, int]  # the other two lattice coordinates (mod 2)
    homology: tuple[int, int, int]

    def contains_edge(self, axis: int, a: int, b: int) -> bool:
        """Whether the lattice edge along ``axis`` with other coords (a, b) lies on a lift."""
        return (axis == self.axis and (a - self.lattice_offset[0]) % 2 == 0
                and (b - self.lattice_offset[1]) % 2 == 0)

    def points(self, n: int = 5) -> list[tuple[Fraction, ...]]:
        out = []
        for s in range(n + 1):
            y = [Fraction(0), Fraction(0), Fraction(0)]
            y[self.axis] = Fraction(2 * s, n)
            j, k = (t for t in range(3) if t != self.axis)
            y[j], y[k] = Fraction(self.lattice_offset[0]), Fraction(self.lattice_offset[1])
            out.append(from_lattice(y))
        return out


def basis_cycles(mesh: SurfaceMesh | None = None) -> tuple[BasisCycle, BasisCycle, BasisCycle]:
    """The axis lines through P = (1/4, 1/4, 1/4), oriented along +e_i.

    Each one is a closed chain of two mesh edges in the torus; its lift
    advances by one period along its axis, so its class is e_i.
    """
    return tuple(BasisCycle(i, (0, 0), tuple(int(i == t) for t in range(3))) for i in range(3))
