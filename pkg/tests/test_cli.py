import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from fillings import fixtures as F
from fillings.cli import main
from fillings.complex import SimplicialComplex
from fillings.io import (complex_from_json, dump_json, length_to_json, map_to_json,
                         metric_to_json)
from fillings.maps import SimplicialMap
from fillings.metric import MetricComplex


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fillrad_48_cycle(capsys, tmp_path):
    out_csv = tmp_path / "r.csv"
    code, out, _ = run(capsys, "fillrad", "--fixture", "cycle:48:6.283185307", "--ring", "z2",
                       "--out", str(out_csv))
    assert code == 0
    radius = out.splitlines()[0].split()
    assert radius[0] == "radius"
    assert abs(float(radius[-1]) - 1.0471975) < 1e-6
    rows = out_csv.read_text().splitlines()
    assert rows[0].startswith("scale,") and rows[-1].split(",")[2] == "1"


def test_homology_rp2_torsion(capsys):
    code, out, _ = run(capsys, "homology", "--fixture", "rp2:1", "--ring", "z")
    assert code == 0 and "H1 = Z/2" in out


def test_invalid_ring_exits_one(capsys):
    code, _, err = run(capsys, "homology", "--fixture", "rp2:1", "--ring", "r")
    assert code == 1 and "ring" in err


def test_validation_failure_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertex_count": 2, "simplices": {"1": [[0, 5]]}}))
    code, _, err = run(capsys, "complex", "validate", str(bad))
    assert code == 1 and "error" in err


def test_complex_validate_reports_inferred_faces(capsys, tmp_path):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps({"vertex_count": 3, "simplices": {"2": [[0, 1, 2]]}}))
    code, out, _ = run(capsys, "complex", "validate", str(path))
    assert code == 0 and "inferred faces 3" in out and "connected True" in out


def test_budget_exhaustion_exits_two(capsys, monkeypatch):
    import fillings.fillvol as fv
    monkeypatch.setattr(fv, "EXHAUSTIVE_KERNEL_DIM", 0)
    original = fv.optimal_chain

    def tiny(*a, **k):
        k["node_budget"] = 5
        return original(*a, **k)

    monkeypatch.setattr(fv, "optimal_chain", tiny)
    code, out, err = run(capsys, "fillvol", "--fixture", "cycle:12", "--ring", "z2",
                         "--ambient", "nerve", "--scale", "6")
    assert code == 2 and "budget" in err
    data = json.loads(out)
    assert data["is_certified_optimal"] is False


def test_fillvol_json(capsys):
    code, out, _ = run(capsys, "fillvol", "--fixture", "octahedron", "--ring", "q")
    data = json.loads(out)
    assert code == 0
    assert data["mode"] == "EuclideanUpperBound" and data["ring"] == "q"
    assert data["is_certified_optimal"] is True and data["chain"]


def test_fixture_round_trip(capsys, tmp_path):
    for name in ["cycle:5:7/2", "torus:3:3", "sphere2:0"]:
        path = tmp_path / "fx.json"
        code, _, _ = run(capsys, "fixture", "emit", "--fixture", name, "--out", str(path))
        assert code == 0
        back = complex_from_json(json.loads(path.read_text()))
        assert back == F.generate_fixture(name)


def test_map_check(capsys, tmp_path):
    path = tmp_path / "map.json"
    f = SimplicialMap(F.cycle(6).complex, F.cycle(3).complex, tuple(i % 3 for i in range(6)))
    path.write_text(dump_json(map_to_json(f)))
    code, out, _ = run(capsys, "map", "check", str(path), "--d", "2")
    data = json.loads(out)
    assert code == 0 and data["is_nd_monotone"] and not data["is_n1_monotone"]
    assert data["degree"]["z"] == 2
    code, _, _ = run(capsys, "map", "check", str(path))
    assert code == 1


def test_experiments(capsys):
    code, out, _ = run(capsys, "experiment", "compare", "--fixture", "torus7", "--t", "1,1/2")
    assert code == 0 and out.splitlines()[0] == "t,ring,fillrad_V,fillrad_W,vol_V,vol_W,ok"
    code, out, _ = run(capsys, "experiment", "extend", "--fixture", "torus:4:4", "--attach", "0,10")
    assert code == 0 and out.splitlines()[1].endswith("1,1")


def test_extend_writes_a_complex(capsys, tmp_path):
    path = tmp_path / "ext.json"
    code, _, err = run(capsys, "extend", "--fixture", "torus:4:4", "--attach", "0,10",
                       "--out", str(path))
    assert code == 0 and "gap 0" in err
    ext = complex_from_json(json.loads(path.read_text()))
    assert ext.complex.vertex_count == 16 + 29


def test_extension_check(capsys):
    code, out, _ = run(capsys, "extension-check", "--seed", "3")
    assert code == 0 and "per_point_equal True" in out


def test_determinism(capsys):
    outs = [run(capsys, "fillrad", "--fixture", "torus:4:4", "--ring", "z")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "fillings.cli", "homology", "--fixture", "cycle:4"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "H1 = Z^1" in res.stdout


def test_length_json():
    assert length_to_json(Fraction(1, 4)) == "0.25"
    assert length_to_json(Fraction(1, 3)) == "1/3"
    assert length_to_json(0.5) == 0.5
    cx = SimplicialComplex.from_top(2, [(0, 1)])
    mc = MetricComplex(cx, {(0, 1): Fraction(1, 3)})
    assert complex_from_json(json.loads(dump_json(metric_to_json(mc)))) == mc
