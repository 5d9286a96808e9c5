import csv
import io
import json
import re
import xml.etree.ElementTree as ET

import pytest

from skewsect.cli import main
from skewsect.render import RenderSpec, project, render_svg


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_zones_json(tmp_path, capsys):
    path = tmp_path / "z.json"
    assert main(["zones", "--depth", "2", "-o", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["format_version"] == 1 and doc["depth"] == 2
    assert len(doc["zones"]) == 13
    assert doc["zones"][0] == {"word": [], "depth": 0, "soul": [1, 1, 1],
                               "vertices": [[2, 1, 1], [1, 2, 1], [1, 1, 2]]}


def test_zones_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "zones", "--depth", "4")
    _, b, _ = run(capsys, "zones", "--depth", "4")
    assert a == b


def test_zones_csv_depth0(capsys):
    rc, out, _ = run(capsys, "zones", "--depth", "0", "--format", "csv")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "# format_version=1"
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert len(rows) == 1
    assert rows[0]["soul"] == "(1:1:1)" and rows[0]["area"] == "1/8"


def test_zones_depth_cap(capsys):
    rc, _, err = run(capsys, "zones", "--depth", "13")
    assert rc == 1 and "cap" in err


@pytest.mark.parametrize("chart", ["z1", "disc", "area-chart"])
def test_zones_svg(chart, capsys):
    rc, out, _ = run(capsys, "zones", "--depth", "2", "--format", "svg", "--chart", chart,
                     "--color-by", "soul-hash")
    assert rc == 0
    root = ET.fromstring(out)
    polys = root.findall("{http://www.w3.org/2000/svg}polygon")
    assert polys
    titles = {p.find("{http://www.w3.org/2000/svg}title").text for p in polys}
    assert "(1:1:1)" in titles


def test_disc_depth0_picture():
    svg = render_svg(RenderSpec(chart="disc", depth=0))
    titles = re.findall(r"<title>([^<]*)</title>", svg)
    # three squares, the central triangle and its three sign images
    assert {"(1:0:0)", "(0:1:0)", "(0:0:1)"} <= set(titles)
    assert {t for t in titles if t.count("1") == 3} == {"(1:1:1)", "(1:-1:-1)", "(1:1:-1)", "(1:-1:1)"}


def test_render_is_byte_identical():
    spec = RenderSpec(chart="z1", depth=3)
    assert render_svg(spec) == render_svg(spec)


def test_render_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec(chart="mercator")
    with pytest.raises(ValueError):
        RenderSpec(depth=20)
    with pytest.raises(ValueError):
        RenderSpec(color_by="rainbow")


def test_project_z1_exact_triangle():
    (piece,) = project(((1, 0, 1), (0, 1, 1), (0, 0, 1)), "z1", (-2, -2, 2, 2))
    assert sorted(piece) == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]


def test_soul_both(capsys):
    rc, out, _ = run(capsys, "soul", "2", "3", "4", "--method", "both")
    assert rc == 0
    assert "exact:  {(2:3:4)}" in out


def test_soul_trace_nolabel_exit_code(capsys):
    rc, out, _ = run(capsys, "soul", "1", "2", "3", "--method", "trace")
    assert rc == 2 and "SaddleConnection" in out


def test_trace_json(tmp_path, capsys):
    path = tmp_path / "t.json"
    rc, out, _ = run(capsys, "trace", "--direction", "1,1,4", "--json", str(path))
    assert rc == 0 and "label: (0:0:1)" in out
    doc = json.loads(path.read_text())
    assert doc["format_version"] == 1 and len(doc["loops"]) == 3


def test_trace_bad_direction(capsys):
    rc, _, err = run(capsys, "trace", "--direction", "1,x,4")
    assert rc == 1
    rc, _, _ = run(capsys, "trace", "--direction", "0,1,4")
    assert rc == 1


def test_sweep_csv(tmp_path, capsys):
    path = tmp_path / "s.csv"
    rc, out, _ = run(capsys, "sweep", "--max-N", "12", "--csv", str(path))
    assert rc == 0 and "mismatches: 0" in out
    lines = path.read_text().splitlines()
    assert lines[0] == "# format_version=1"
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert rows and set(rows[0]) == {"m", "n", "N", "exact_soul", "traced_soul", "status"}


def test_sweep_parallel_matches_serial(monkeypatch, capsys):
    rc, serial, _ = run(capsys, "sweep", "--max-N", "10")
    monkeypatch.setenv("SKEWSECT_WORKERS", "2")
    rc2, parallel, _ = run(capsys, "sweep", "--max-N", "10")
    assert rc == rc2 == 0 and serial == parallel


def test_dimension_boxcount(capsys):
    rc, out, err = run(capsys, "dimension", "--method", "boxcount", "--depth", "6", "--levels", "6",
                       "--fit-from", "2")
    assert rc == 0
    assert out.splitlines()[1] == "n,scale,value,estimate"
    assert "slope" in err


def test_dimension_minkowski(tmp_path, capsys):
    path = tmp_path / "d.csv"
    rc, out, _ = run(capsys, "dimension", "--method", "minkowski", "--depth", "6", "--levels", "20",
                     "--csv", str(path), "--mc-check", "8")
    assert rc == 0 and "plateau" in out and "monte-carlo" in out
    assert len(path.read_text().splitlines()) == 22


def test_measure_check(capsys):
    rc, out, _ = run(capsys, "measure-check", "--terms", "100000", "--exact-terms", "2000",
                     "--table", "3", "--grid", "200")
    assert rc == 0
    assert "sum < 1/2: PASS" in out
    assert re.search(r"= 0\.448", out)


def test_tribonacci(capsys):
    rc, out, _ = run(capsys, "tribonacci", "--count", "9")
    assert rc == 0
    assert out.splitlines()[8].endswith("(13:20:24)")


def test_usage_error(capsys):
    with pytest.raises(SystemExit):
        main(["nonsense"])
