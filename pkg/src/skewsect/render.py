"""SVG pictures of the zone fractal in the three charts.

Regions are handled as lifted polygons in R^3: a projective triangle or
square is a cone over a planar polygon, and clipping against linear
functionals (the viewport, or the z=0 plane for the disc) stays exact in
homogeneous coordinates.  Only the final projection to the page is float.
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .projective import AREA_CHART_MATRIX, matvec, normalize
from .zones import iter_zones

RENDER_CHARTS = ("z1", "disc", "area-chart")
COLOR_MODES = ("depth", "soul-hash")
DEFAULT_MAX_DEPTH = 12

DEFAULT_VIEWPORTS = {
    "z1": (-1.25, -1.25, 1.25, 1.25),
    "disc": (-1.02, -1.02, 1.02, 1.02),
    "area-chart": (-0.05, -0.05, 1.05, 1.05),
}

# one colour per depth, cycled
DEPTH_PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02",
                 "#a6761d", "#1f78b4", "#b2df8a", "#fb9a99", "#cab2d6", "#ff7f00", "#6a3d9a")
SQUARE_COLOR = "#9e9e9e"

# the three square zones as lifted quadrilaterals (coordinate i positive)
SQUARES = {
    (1, 0, 0): ((1, 1, 0), (1, 0, 1), (1, -1, 0), (1, 0, -1)),
    (0, 1, 0): ((1, 1, 0), (0, 1, 1), (-1, 1, 0), (0, 1, -1)),
    (0, 0, 1): ((1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)),
}

# sign changes taking the positive triangle onto the other three
OCTANT_SIGNS = ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))


@dataclass(frozen=True)
class RenderSpec:
    chart: str = "z1"
    depth: int = 4
    color_by: str = "depth"
    viewport: tuple[float, float, float, float] | None = None
    size: int = 800
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if self.chart not in RENDER_CHARTS:
            raise ValueError(f"chart must be one of {RENDER_CHARTS}, got {self.chart!r}")
        if self.color_by not in COLOR_MODES:
            raise ValueError(f"color-by must be one of {COLOR_MODES}, got {self.color_by!r}")
        if self.depth < 0 or self.depth > self.max_depth:
            raise ValueError(f"depth must be in [0, {self.max_depth}], got {self.depth}")

    @property
    def box(self):
        return self.viewport or DEFAULT_VIEWPORTS[self.chart]


def clip(poly: Sequence[Sequence[float]], f: Sequence[float]) -> list[tuple]:
    """Keep the part of a lifted polygon where the linear form f is >= 0."""
    out = []
    n = len(poly)
    for a in range(n):
        p, q = poly[a], poly[(a + 1) % n]
        fp = sum(x * y for x, y in zip(f, p))
        fq = sum(x * y for x, y in zip(f, q))
        if fp >= 0:
            out.append(tuple(p))
        if (fp >= 0) != (fq >= 0):
            t = fp / (fp - fq)
            out.append(tuple(pi + t * (qi - pi) for pi, qi in zip(p, q)))
    return out


def _affine(poly, box):
    # the viewport constraints force z > 0, so the antipodal lift is clipped too
    x0, y0, x1, y1 = box
    pieces = []
    for sign in (1, -1):
        part = [tuple(sign * t for t in p) for p in poly]
        for f in ((1, 0, -x0), (-1, 0, x1), (0, 1, -y0), (0, -1, y1)):
            part = clip(part, f)
            if not part:
                break
        if len(part) >= 3:
            pieces.append([(p[0] / p[2], p[1] / p[2]) for p in part])
    return pieces


def _disc(poly):
    pieces = []
    for sign in (1, -1):
        part = clip([tuple(sign * t for t in p) for p in poly], (0, 0, 1))
        if len(part) < 3:
            continue
        pts = []
        for a in range(len(part)):
            p, q = part[a], part[(a + 1) % len(part)]
            np_ = math.sqrt(sum(t * t for t in p))
            nq = math.sqrt(sum(t * t for t in q))
            cosang = sum(s * t for s, t in zip(p, q)) / (np_ * nq) if np_ and nq else 1.0
            ang = math.acos(max(-1.0, min(1.0, cosang)))
            steps = max(1, math.ceil(ang / 0.04))
            for s in range(steps):
                t = s / steps
                v = [pi + t * (qi - pi) for pi, qi in zip(p, q)]
                r = math.sqrt(sum(c * c for c in v))
                pts.append((v[0] / r, v[1] / r))
        pieces.append(pts)
    return pieces


def project(poly, chart: str, box) -> list[list[tuple[float, float]]]:
    """Planar pieces of a lifted polygon in a chart (possibly empty)."""
    poly = [tuple(float(t) for t in p) for p in poly]
    if chart == "z1":
        return _affine(poly, box)
    if chart == "area-chart":
        return _affine([matvec(AREA_CHART_MATRIX, p) for p in poly], box)
    if chart == "disc":
        return _disc(poly)
    raise ValueError(f"unknown chart {chart!r}")


def soul_color(soul: Sequence[int]) -> str:
    h = hashlib.md5(("%d:%d:%d" % tuple(soul)).encode()).digest()
    hue = int.from_bytes(h[:2], "big") % 360
    return f"hsl({hue},65%,50%)"


def _signed(v, s):
    return tuple(a * b for a, b in zip(v, s))


def regions(depth: int, color_by: str = "depth") -> Iterable[tuple[tuple, str, str]]:
    """(lifted polygon, fill colour, label) for the squares and all zone images."""
    for soul, quad in SQUARES.items():
        yield quad, SQUARE_COLOR, "(%d:%d:%d)" % soul
    for z in iter_zones(depth):
        for s in OCTANT_SIGNS:
            soul = normalize(_signed(z.soul, s))
            colour = (DEPTH_PALETTE[z.depth % len(DEPTH_PALETTE)] if color_by == "depth"
                      else soul_color(soul))
            yield tuple(_signed(v, s) for v in z.vertices), colour, "(%d:%d:%d)" % soul


def render_svg(spec: RenderSpec) -> str:
    x0, y0, x1, y1 = spec.box
    W = spec.size
    H = int(round(W * (y1 - y0) / (x1 - x0)))
    sx = W / (x1 - x0)
    sy = H / (y1 - y0)

    def pt(p):
        return "%.3f,%.3f" % ((p[0] - x0) * sx, (y1 - p[1]) * sy)

    buf = io.StringIO()
    buf.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    buf.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
              f'viewBox="0 0 {W} {H}">\n')
    buf.write(f'<!-- chart={spec.chart} depth={spec.depth} color-by={spec.color_by} -->\n')
    buf.write(f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>\n')
    if spec.chart == "disc":
        buf.write(f'<ellipse cx="{-x0 * sx:.3f}" cy="{y1 * sy:.3f}" rx="{sx:.3f}" '
                  f'ry="{sy:.3f}" fill="black" stroke="black"/>\n')
    else:
        buf.write(f'<rect x="0" y="0" width="{W}" height="{H}" fill="black"/>\n')
    for poly, colour, label in regions(spec.depth, spec.color_by):
        for piece in project(poly, spec.chart, spec.box):
            if len(piece) < 3:
                continue
            buf.write(f'<polygon points="{" ".join(pt(p) for p in piece)}" fill="{colour}" '
                      f'stroke="white" stroke-width="0.2"><title>{label}</title></polygon>\n')
    buf.write("</svg>\n")
    return buf.getvalue()
