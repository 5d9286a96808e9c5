"""The eight acceptance criteria, at full scale.

Each ``criterion_*`` function does the work and returns ``(ok, detail)``; the
pytest wrappers print one PASS/FAIL line per criterion and then assert.  Run
this file directly (``python tests/test_acceptance.py``) for just the report.
"""

import json
import math
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from skewsect import fractal, measure
from skewsect.cli import main as cli_main, run_sweep
from skewsect.projective import (
    PSI_MATRICES,
    Step,
    det3,
    normalize,
    phi,
    phi_reduce,
    psi,
    psi_inverse,
    tribonacci_constants,
)
from skewsect.section import CellClass, classify_cell, loop_class, trace_critical_loops
from skewsect.surface import build_surface
from skewsect.zones import (
    iter_direction_grid,
    metrics_table,
    soul_of_direction,
    souls_from_table,
    tree_souls_batch,
    triangle_table,
    tribonacci_limit,
    tribonacci_sequence,
)


def _report(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, flush=True)
    return line


# ---------------------------------------------------------------------------

def criterion_1(tmp_dir):
    path = f"{tmp_dir}/zones12.json"
    t0 = time.perf_counter()
    rc = cli_main(["zones", "--depth", "12", "-o", path])
    elapsed = time.perf_counter() - t0
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    per = [0] * 13
    for z in doc["zones"]:
        per[z["depth"]] += 1
    ok = (rc == 0 and per == [3 ** k for k in range(13)]
          and len(doc["zones"]) == 797161 and elapsed < 60)
    return ok, f"total={len(doc['zones'])} per-depth ok={per == [3 ** k for k in range(13)]} cli={elapsed:.1f}s"


def criterion_2():
    pts = [normalize(h) for N in range(3, 201) for h in iter_direction_grid(N)]
    t0 = time.perf_counter()
    exact = [soul_of_direction(p) for p in pts]
    tree = tree_souls_batch(pts, max_depth=12)
    elapsed = time.perf_counter() - t0
    resolved = [(e, t) for e, t in zip(exact, tree) if t is not None]
    bad = sum(1 for e, t in resolved if e != t)
    ok = bad == 0 and elapsed < 120 and len(resolved) > 0.9 * len(pts)
    return ok, (f"points={len(pts)} resolved={len(resolved)} disagreements={bad} "
                f"time={elapsed:.1f}s")


def criterion_3():
    t0 = time.perf_counter()
    rows = run_sweep(100)
    elapsed = time.perf_counter() - t0
    counts = {}
    for *_, status in rows:
        counts[status] = counts.get(status, 0) + 1
    labeled = counts.get("agree", 0) + counts.get("mismatch", 0)
    frac = labeled / len(rows)
    mism = counts.get("mismatch", 0)
    ok = mism == 0 and frac >= 0.90 and elapsed < 600
    detail = (f"directions={len(rows)} mismatches={mism} labeled fraction={frac:.4f} (need >= 0.90) "
              f"breakdown={dict(sorted(counts.items()))} time={elapsed:.1f}s")
    return ok, detail


def criterion_4():
    cert = measure.c_sum(10_000)
    closed = float(measure.SUM_RATIONAL) + float(measure.SUM_PI2_COEFF) * math.pi ** 2
    worst = 0.0
    for k in range(21):
        g = measure.c_k_numeric(k)
        worst = max(worst, abs(g.value - float(measure.c_k(k))))
    ok = (2 * cert.upper_bound < 1 and abs(cert.value - 0.448) < 5e-4
          and abs(cert.value - closed) < 5e-4 and worst < 1e-9)
    return ok, (f"2*(head+tail)={float(2 * cert.upper_bound):.10f} < 1, value={cert.value:.7f}, "
                f"max |grid - closed form| (k<=20) = {worst:.2e}")


def criterion_5():
    tri, depth = triangle_table(12)
    met = metrics_table(tri)
    s = met["sup_norm"]                      # ||soul||_inf in the area chart
    m = np.array([[-1, 1, 1], [1, 1, -1], [1, 1, 1]], dtype=np.int64)
    z = np.einsum("rc,nvc->nvr", m, tri)[:, :, 2] // 2
    P = (z[:, 0] + z[:, 1]) * (z[:, 1] + z[:, 2]) * (z[:, 2] + z[:, 0])   # area = 1/P exactly
    area_bad = int(np.count_nonzero(~((P <= s ** 3) & (s ** 3 <= 8 * P))))
    souls = souls_from_table(tri)
    n2 = (souls * souls).sum(axis=1)
    alpha = tribonacci_constants()[0]
    lo_bad = int(np.count_nonzero(n2 < 2 * (depth + 1) ** 2 + 1))
    hi_bad = int(np.count_nonzero(n2 > 3.0 * alpha ** (2.0 * depth) * (1 + 1e-12)))
    ok = area_bad == lo_bad == hi_bad == 0 and len(P) == 797161
    return ok, f"zones={len(P)} area violations={area_bad} norm violations: low={lo_bad} high={hi_bad}"


def criterion_6():
    seq = tribonacci_sequence([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 40)
    want = [(1, 2, 2), (2, 3, 4), (4, 6, 7), (7, 11, 13), (13, 20, 24)]
    last = seq[-1]
    x, y = Fraction(last[0], last[2]), Fraction(last[1], last[2])
    lim = tribonacci_limit()
    ok = (seq[4:9] == want and abs(float(x) - 0.543) <= 1e-3 and abs(float(y) - 0.839) <= 1e-3
          and abs(float(x) - lim[0]) < 1e-9 and abs(float(y) - lim[1]) < 1e-9)
    return ok, f"labels ok={seq[4:9] == want}, n=40 chart=({float(x):.6f}, {float(y):.6f})"


def criterion_7():
    t0 = time.perf_counter()
    g = fractal.ZoneGeometry.at_depth(12)
    box = fractal.box_series(g, range(0, 13))
    slope = fractal.fit_slope(box.column("n"), box.column("estimate"), (6, 12))
    t_box = time.perf_counter() - t0
    t0 = time.perf_counter()
    g = fractal.ZoneGeometry.at_depth(12)
    mink = fractal.minkowski_series(g, base=1.2, n_max=50, window=(15, 40)).summary
    t_mink = time.perf_counter() - t0
    ok = abs(slope - 1.72) <= 0.1 and 1.6 <= mink <= 1.8 and t_box < 300 and t_mink < 300
    return ok, f"box slope={slope:.4f} ({t_box:.1f}s), minkowski plateau={mink:.4f} ({t_mink:.1f}s)"


def criterion_8():
    problems = []
    mesh = build_surface()
    V, E, F = len(mesh.vertices), len(mesh.edges), len(mesh.faces)
    if (V, E, F, V - E + F) != (8, 24, 12, -4):
        problems.append("mesh counts")
    if any(len(mesh.vertex_faces[v]) != 6 for v in range(V)):
        problems.append("vertex degree")
    if any(len(f) != 2 for f in mesh.edge_faces.values()):
        problems.append("edge manifold")

    rng = random.Random(2024)
    if any(det3(m) != 1 for m in PSI_MATRICES.values()):
        problems.append("psi determinant")
    for _ in range(2000):
        p = normalize((rng.randint(0, 10 ** 6), rng.randint(0, 10 ** 6), rng.randint(1, 10 ** 6)))
        i = rng.randint(1, 3)
        if psi_inverse(i, psi(i, p)) != p or psi(i, psi_inverse(i, p)) != p:
            problems.append("psi inverse")
            break
        step, back = phi(tuple(psi(1, p)))
        if step is not Step.SUBTRACT or normalize(back) != p:
            problems.append("phi o psi1")
            break
        if 0 not in phi_reduce(p).terminal:
            problems.append("phi terminal")
            break

    for _ in range(1000):
        a = Fraction(rng.randint(0, 150), rng.randint(1, 30))
        b = Fraction(rng.randint(0, 150), rng.randint(1, 30))
        c = Fraction(rng.randint(0, 360), rng.randint(1, 30))
        axis = rng.choice(["x-half", "y-half"])
        for j in range(-2, 3):
            for k in range(-2, 3):
                for m in range(-3, 7):
                    x = classify_cell(a, b, c, axis, j, k, m)
                    y = classify_cell(a + 1, b + 1, c, axis, j, k, m - j - k - 1)
                    if (x is CellClass.BRIDGE) != (y is CellClass.BRIDGE) or \
                            (x is CellClass.ISLAND) != (y is CellClass.ISLAND):
                        problems.append(f"psi3 correspondence at {(a, b, c, axis, j, k, m)}")
                        break

    loops = 0
    for H in [(1, 1, 4), (2, 1, 12), (3, 5, 17), (7, 2, 9), (11, 4, 23), (5, 8, 13)]:
        r = trace_critical_loops(H)
        for lp in r.loops:
            loops += 1
            c = loop_class(lp)
            if any(loop_class(lp.rerooted(k)) != c for k in range(len(lp.segments))):
                problems.append(f"re-root {H}")
            if loop_class(lp.reversed()) != tuple(-t for t in c):
                problems.append(f"reversal {H}")
    ok = not problems and loops > 0
    return ok, "all structural checks hold" if ok else "; ".join(problems[:5])


# ---------------------------------------------------------------------------
# pytest wrappers

def _check(n, fn, *args, capsys=None):
    ok, detail = fn(*args)
    if capsys is None:
        _report(n, ok, detail)
    else:
        with capsys.disabled():
            print()
            _report(n, ok, detail)
    return ok, detail


@pytest.fixture
def loud(capsys):
    return capsys


def test_criterion_1_zone_census(tmp_path, loud):
    ok, detail = _check(1, criterion_1, str(tmp_path), capsys=loud)
    assert ok, detail


def test_criterion_2_exact_labels_match_tree(loud):
    ok, detail = _check(2, criterion_2, capsys=loud)
    assert ok, detail


def test_criterion_3_tracer_agreement(loud):
    ok, detail = _check(3, criterion_3, capsys=loud)
    assert ok, detail


def test_criterion_4_measure_certificate(loud):
    ok, detail = _check(4, criterion_4, capsys=loud)
    assert ok, detail


def test_criterion_5_zone_asymptotics(loud):
    ok, detail = _check(5, criterion_5, capsys=loud)
    assert ok, detail


def test_criterion_6_tribonacci(loud):
    ok, detail = _check(6, criterion_6, capsys=loud)
    assert ok, detail


def test_criterion_7_dimension(loud):
    ok, detail = _check(7, criterion_7, capsys=loud)
    assert ok, detail


def test_criterion_8_structural(loud):
    ok, detail = _check(8, criterion_8, capsys=loud)
    assert ok, detail


if __name__ == "__main__":
    import tempfile
    with tempfile.TemporaryDirectory() as d:
        results = [_check(1, criterion_1, d)[0]]
    for n, fn in enumerate([criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8], start=2):
        results.append(_check(n, fn)[0])
    sys.exit(0 if all(results) else 1)
