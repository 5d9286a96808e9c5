"""Command-line front end: ``skewsect <command> ...``.

Exit status: 0 on success, 2 when the only outcome is a missing label,
1 on errors (including tracer/oracle mismatches).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

from . import fractal, measure, section
from .errors import SkewSectError
from .projective import tribonacci_constants
from .render import COLOR_MODES, DEFAULT_MAX_DEPTH, RENDER_CHARTS, RenderSpec, render_svg
from .zones import (
    E1,
    E2,
    E3,
    iter_direction_grid,
    iter_zones,
    soul_of_direction,
    tribonacci_limit,
    tribonacci_sequence,
    zone_metrics,
)

FORMAT_VERSION = 1
WORKERS_ENV = "SKEWSECT_WORKERS"
TRIBONACCI_SEEDS = (E1, E2, E3)


class UsageError(Exception):
    pass


@contextmanager
def _open_out(path, newline=None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline=newline) as fh:
            yield fh


def _fmt_soul(p) -> str:
    return "(%d:%d:%d)" % tuple(p)


def _fmt_set(s) -> str:
    return "{" + ", ".join(_fmt_soul(p) for p in sorted(s)) + "}"


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer")


# ---------------------------------------------------------------------------
# zones

def cmd_zones(args) -> int:
    if args.depth < 0:
        raise UsageError("depth must be >= 0")
    if args.depth > args.max_depth:
        raise UsageError(f"depth {args.depth} exceeds the cap {args.max_depth} (raise --max-depth)")
    if args.format == "svg":
        spec = RenderSpec(chart=args.chart, depth=args.depth, color_by=args.color_by,
                          viewport=tuple(args.viewport) if args.viewport else None,
                          size=args.size, max_depth=args.max_depth)
        with _open_out(args.output) as fh:
            fh.write(render_svg(spec))
        return 0
    if args.format == "json":
        with _open_out(args.output) as fh:
            fh.write('{"format_version": %d, "depth": %d, "zones": [' % (FORMAT_VERSION, args.depth))
            first = True
            for z in iter_zones(args.depth):
                rec = {"word": list(z.word), "depth": z.depth, "soul": list(z.soul),
                       "vertices": [list(v) for v in z.vertices]}
                fh.write(("\n" if first else ",\n") + json.dumps(rec, separators=(",", ":")))
                first = False
            fh.write("\n]}\n")
        return 0
    with _open_out(args.output, newline="") as fh:
        fh.write(f"# format_version={FORMAT_VERSION}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["depth", "soul", "area", "perimeter", "inradius"])
        for z in iter_zones(args.depth):
            m = zone_metrics(z)
            w.writerow([z.depth, _fmt_soul(z.soul), str(m.area),
                        "%.15e" % m.perimeter, "%.15e" % m.inradius])
    return 0


# ---------------------------------------------------------------------------
# soul / trace / sweep

def cmd_soul(args) -> int:
    h = (args.m, args.n, args.N)
    out = {}
    if args.method in ("exact", "both"):
        out["exact"] = soul_of_direction(h)
        print("exact:  " + _fmt_set(out["exact"]))
    if args.method in ("trace", "both"):
        out["trace"] = section.numerical_soul(h)
        print("traced: " + str(out["trace"]))
    if args.method == "both":
        t = out["trace"]
        if isinstance(t, section.NoLabel):
            print("agreement: n/a (no traced label)")
            return 0
        ok = t in out["exact"]
        print("agreement: " + ("yes" if ok else "NO"))
        return 0 if ok else 1
    if args.method == "trace" and isinstance(out["trace"], section.NoLabel):
        return 2
    return 0


def _trace_json(H, res, label) -> dict:
    loops = []
    for lp in res.loops:
        cls = section.loop_class(lp)
        loops.append({"sectors": list(lp.sectors), "class": list(cls),
                      "segments": len(lp.segments),
                      "intersections": list(section.soul_triple(lp))})
    sc = res.saddle_connection
    return {"format_version": FORMAT_VERSION, "direction": list(H),
            "saddle_connection": None if sc is None else {"sector": sc.sector,
                                                          "saddle_lattice": list(sc.saddle)},
            "loops": loops, "segment_count": res.segment_count,
            "label": str(label)}


def cmd_trace(args) -> int:
    try:
        H = tuple(int(t) for t in args.direction.split(","))
    except ValueError:
        raise UsageError(f"bad direction {args.direction!r}; expected m,n,N")
    if len(H) != 3:
        raise UsageError("direction needs three integers")
    res = section.trace_critical_loops(H, args.step_cap)
    label = section.numerical_soul(H, args.step_cap)
    doc = _trace_json(section.Direction.of(H), res, label)
    if res.saddle_connection:
        print(f"saddle connection from sector {res.saddle_connection.sector}")
    for k, lp in enumerate(doc["loops"], 1):
        print(f"loop {k}: sectors {lp['sectors']}  class {tuple(lp['class'])}  "
              f"segments {lp['segments']}  b-intersections {tuple(lp['intersections'])}")
    print(f"label: {label}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return 2 if isinstance(label, section.NoLabel) else 0


def sweep_row(H):
    exact = soul_of_direction(H)
    traced = section.numerical_soul(H)
    if isinstance(traced, section.NoLabel):
        status = traced.reason.value
    else:
        status = "agree" if traced in exact else "mismatch"
    return H, exact, traced, status


def run_sweep(N: int, workers: int = 1):
    grid = list(iter_direction_grid(N))
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(sweep_row, grid, chunksize=64))
    return [sweep_row(H) for H in grid]


def cmd_sweep(args) -> int:
    if args.max_N < 3:
        raise UsageError("--max-N must be at least 3")
    t0 = time.perf_counter()
    rows = run_sweep(args.max_N, _workers())
    counts = {}
    for *_, status in rows:
        counts[status] = counts.get(status, 0) + 1
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# format_version={FORMAT_VERSION}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["m", "n", "N", "exact_soul", "traced_soul", "status"])
            for H, exact, traced, status in rows:
                w.writerow([*H, " ".join(_fmt_soul(p) for p in sorted(exact)),
                            "" if isinstance(traced, section.NoLabel) else _fmt_soul(traced),
                            status])
    total = len(rows)
    labeled = counts.get("agree", 0) + counts.get("mismatch", 0)
    print(f"directions: {total}")
    for k in sorted(counts):
        print(f"  {k}: {counts[k]}")
    print(f"labeled fraction: {labeled / total:.4f}")
    print(f"mismatches: {counts.get('mismatch', 0)}")
    print(f"elapsed: {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    return 1 if counts.get("mismatch", 0) else 0


# ---------------------------------------------------------------------------
# dimension / measure / tribonacci

def cmd_dimension(args) -> int:
    geom = fractal.ZoneGeometry.at_depth(args.depth)
    if args.method == "minkowski":
        levels = args.levels or 50
        series = fractal.minkowski_series(geom, base=args.base, n_max=levels,
                                          window=(args.fit_from, args.fit_to or levels))
        summary = f"plateau (median of d_n, n={series.fit_range[0]}..{series.fit_range[1]}): {series.summary:.6f}"
    else:
        levels = args.levels or 12
        series = fractal.box_series(geom, range(0, levels + 1))
        lo, hi = args.fit_from, args.fit_to or levels
        slope = fractal.fit_slope(series.column("n"), series.column("estimate"), (lo, hi))
        series.fit_range, series.summary = (lo, hi), slope
        summary = f"slope of log2 N_n over n={lo}..{hi}: {slope:.6f}"
    with _open_out(args.csv, newline="") as fh:
        fh.write(f"# format_version={FORMAT_VERSION}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "scale", "value", "estimate"])
        for r in series.rows:
            val = r["value"] if isinstance(r["value"], int) else "%.15e" % r["value"]
            w.writerow([r["n"], "%.15e" % r["scale"], val, "%.15e" % r["estimate"]])
    print(summary, file=sys.stderr if args.csv in (None, "-") else sys.stdout)
    if args.mc_check and args.method == "minkowski":
        eps = args.base ** (-args.mc_check)
        exact = fractal.minkowski_volume(geom, eps).value
        mc, se = fractal.monte_carlo_volume(geom, eps, seed=args.seed)
        print(f"monte-carlo check at eps={eps:.6e}: formula {exact:.6f}, sampled {mc:.6f} +- {se:.6f}")
    return 0


def cmd_measure_check(args) -> int:
    exact_terms = min(args.terms, args.exact_terms)
    cert = measure.c_sum(exact_terms)
    print(" k   c_k (exact)        c_k (float)         grid max")
    for k in range(args.table + 1):
        g = measure.c_k_numeric(k, n=args.grid)
        print(f"{k:2d}   {str(measure.c_k(k)):<16}   {float(measure.c_k(k)):.15f}   {g.value:.15f}")
    for K in (10, 100, 1000, args.terms):
        if K <= args.terms:
            print(f"partial sum to k={K}: {measure.float_sum(K):.12f}")
    print(f"exact head to k={exact_terms}: {float(cert.head):.15f}")
    print(f"tail bound 2/(K+2)^2: {cert.tail_bound}  (~{float(cert.tail_bound):.3e})")
    print(f"certified upper bound: {float(cert.upper_bound):.15f}")
    print(f"closed form: {cert.closed_form[0]} {cert.closed_form[1]}*pi^2 = {cert.value:.12f}")
    print("sum < 1/2: " + ("PASS" if cert.certified else "FAIL"))
    return 0 if cert.certified else 1


def cmd_tribonacci(args) -> int:
    seq = tribonacci_sequence(TRIBONACCI_SEEDS, args.count)
    for k, p in enumerate(seq):
        print(f"{k:3d}  {_fmt_soul(p)}")
    alpha, _, _ = tribonacci_constants()
    lim = tribonacci_limit()
    last = seq[-1]
    print(f"alpha = {alpha:.15f}")
    print(f"limit direction (a^2-a-1 : a-1 : 1) z=1 chart: ({lim[0]:.9f}, {lim[1]:.9f})")
    if last[2]:
        print(f"last label z=1 chart: ({last[0] / last[2]:.9f}, {last[1] / last[2]:.9f})")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewsect", description="Stability zones of plane sections of {4,6|4}.")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zones", help="generate the zone tree")
    z.add_argument("--depth", type=int, default=3)
    z.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    z.add_argument("--chart", choices=RENDER_CHARTS, default="z1")
    z.add_argument("--color-by", choices=COLOR_MODES, default="depth")
    z.add_argument("--viewport", type=float, nargs=4, metavar=("XMIN", "YMIN", "XMAX", "YMAX"))
    z.add_argument("--size", type=int, default=800)
    z.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    z.add_argument("-o", "--output")
    z.set_defaults(func=cmd_zones)

    s = sub.add_parser("soul", help="label one direction")
    s.add_argument("m", type=int)
    s.add_argument("n", type=int)
    s.add_argument("N", type=int)
    s.add_argument("--method", choices=("exact", "trace", "both"), default="exact")
    s.set_defaults(func=cmd_soul)

    t = sub.add_parser("trace", help="trace the critical loops of one direction")
    t.add_argument("--direction", required=True, help="m,n,N with positive entries")
    t.add_argument("--json")
    t.add_argument("--step-cap", type=int, default=section.DEFAULT_STEP_CAP)
    t.set_defaults(func=cmd_trace)

    w = sub.add_parser("sweep", help="compare traced and exact labels over 0<n<m<N")
    w.add_argument("--max-N", dest="max_N", type=int, default=100)
    w.add_argument("--csv")
    w.set_defaults(func=cmd_sweep)

    d = sub.add_parser("dimension", help="fractal dimension estimates")
    d.add_argument("--method", choices=("minkowski", "boxcount"), default="boxcount")
    d.add_argument("--depth", type=int, default=12)
    d.add_argument("--levels", type=int)
    d.add_argument("--base", type=float, default=1.2)
    d.add_argument("--fit-from", type=int, default=None)
    d.add_argument("--fit-to", type=int, default=None)
    d.add_argument("--mc-check", type=int, default=0, metavar="N",
                   help="compare with a Monte-Carlo estimate at eps = base^-N")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--csv")
    d.set_defaults(func=cmd_dimension)

    m = sub.add_parser("measure-check", help="the sum of c_k and its certificate")
    m.add_argument("--terms", type=int, default=10_000)
    m.add_argument("--exact-terms", type=int, default=10_000)
    m.add_argument("--table", type=int, default=10)
    m.add_argument("--grid", type=int, default=2000)
    m.set_defaults(func=cmd_measure_check)

    r = sub.add_parser("tribonacci", help="the steepest label sequence")
    r.add_argument("--count", type=int, default=9)
    r.set_defaults(func=cmd_tribonacci)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "fit_from", "x") is None:
        args.fit_from = 15 if args.method == "minkowski" else 6
    try:
        return args.func(args)
    except (UsageError, SkewSectError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
