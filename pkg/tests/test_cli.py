import hashlib
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from gammacap.cli import fmt, main

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


def test_fmt():
    # 15 significant digits, trailing zeros kept for column alignment
    assert fmt(1.875) == "1.87500000000000"
    assert fmt(1.8755950190971197) == "1.87559501909712"
    assert fmt(float("nan")) == "nan"


def test_capacity_two_disks_rings_four():
    code, out, _ = run("capacity", DATA / "two_disks.json", "--rings", 4)
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 5
    first = rows[0].split()
    assert first[:3] == ["0", "1.87500000000000", "1.88281250000000"]
    lo, up = map(float, rows[-1].split()[1:3])
    assert lo <= 1.8755950190971197 <= up


def test_capacity_square_corner_basis():
    code, out, _ = run("capacity", DATA / "square.json", "--corner-basis", "--n", 6, "--emit", "csv")
    lines = out.splitlines()
    # gap 5.8e-7 misses the default 1e-10 target after the last requested stage
    assert code == 2 and lines[0] == "stage,n_basis,lower,upper" and len(lines) == 6
    assert [int(l.split(",")[0]) for l in lines[1:]] == [2, 3, 4, 5, 6]
    lo, up = map(float, lines[-1].split(",")[2:])
    assert lo <= 0.8346268416740732 <= up and up - lo <= 1e-6


def test_capacity_max_stage_exit_code():
    code, out, _ = run("capacity", DATA / "square.json", "--basis", "poles", "--max-stage", 1, "--gap-target", 1e-12)
    assert code == 2 and out


def test_capacity_json_is_byte_identical(tmp_path):
    a = run("capacity", DATA / "two_disks.json", "--rings", 2, "--emit", "json")
    b = run("capacity", DATA / "two_disks.json", "--rings", 2, "--emit", "json")
    assert a[0] == b[0] == 2 and a[1] == b[1]
    assert [s["stage"] for s in json.loads(a[1])["stages"]] == [0, 1, 2]


@pytest.mark.parametrize("content,needle", [
    ('{"components": [{"type": "circle", "center": [0, 0]}]}', "radius"),
    ('{"components": [', "line 1"),
    ('{"components": [{"type": "circle", "center": [0, 0], "radius": 1},'
     ' {"type": "circle", "center": [1, 0], "radius": 1}]}', "overlap"),
])
def test_capacity_bad_input_exit_one(tmp_path, content, needle):
    code, out, err = run("capacity", write(tmp_path, "g.json", content))
    assert code == 1 and out == "" and needle in err.lower()


def test_missing_file_and_usage_errors(tmp_path):
    code, out, err = run("capacity", tmp_path / "nope.json")
    assert code == 1 and out == "" and "nope.json" in err
    assert run("capacity")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("capacity", DATA / "two_disks.json", "--quad-tol", -1)[0] == 1


def test_manifest(tmp_path):
    m = tmp_path / "m.json"
    code, _, _ = run("capacity", DATA / "two_disks.json", "--rings", 1, "--gap-target", 1e-3, "--manifest", m)
    doc = json.loads(m.read_text())
    assert code == 0 and doc["command"] == "capacity"
    assert doc["input_digest"] == hashlib.sha256((DATA / "two_disks.json").read_bytes()).hexdigest()
    assert len(doc["results"]) == 2 and doc["config"]["basis"] == "poles"


def test_rational_ahlfors_example():
    code, out, _ = run("rational", DATA / "example_three_poles.json")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "Ahlfors"
    assert doc["lower"] <= 0.7 + 1e-9 and doc["upper"] >= 0.7 - 1e-9


def test_rational_not_ahlfors_table():
    code, out, _ = run("rational", DATA / "conjugate_poles.json", "--degree", 7, "--emit", "table")
    assert code == 0 and "verdict: NotAhlfors" in out
    assert len([l for l in out.splitlines() if l.strip()[:1].isdigit()]) == 7


def test_rational_family_input():
    code, out, _ = run("rational", DATA / "rotation_family_n3.json", "--degree", 2)
    assert code == 0 and json.loads(out)["sum_residues"] == pytest.approx(1.0)


def test_rational_disconnected_exit_three():
    code, out, err = run("rational", DATA / "disconnected.json")
    assert code == 3 and out == ""
    report = json.loads(err)
    assert report["error"] == "disconnected" and len(report["critical_values"]) == 2


def test_rational_bad_maps(tmp_path):
    assert run("rational", write(tmp_path, "r.json", {"residues": [1, 1], "poles": [[0, 0], [0, 0]]}))[0] == 1
    assert run("rational", write(tmp_path, "r.json", {"residues": [1]}))[0] == 1
    assert run("rational", DATA / "example_three_poles.json", "--degree", 0)[0] == 1


def test_subadd_csv_deterministic(tmp_path):
    cfg = write(tmp_path, "c.json", {"centers_E": [[-2, 0]], "centers_F": [[2, 0]]})
    a = run("subadd", cfg, "--r-steps", 3, "--max-stage", 2)
    b = run("subadd", cfg, "--r-steps", 3, "--max-stage", 2)
    assert a[0] == 0 and a[1] == b[1]
    lines = a[1].splitlines()
    assert len(lines) == 4 and lines[0].startswith("r,ratio_lower,ratio_upper")
    assert "no certified increase" in a[2]


def test_subadd_random_config_and_output_file(tmp_path):
    dest = tmp_path / "out.csv"
    code, out, err = run("subadd", DATA / "random_8.json", "--r-steps", 2, "--seed", 1, "--max-stage", 1,
                         "--output", dest)
    assert code == 0 and out == "" and len(dest.read_text().splitlines()) == 3
    assert "max certified ratio upper bound" in err


def test_subadd_bad_steps(tmp_path):
    cfg = write(tmp_path, "c.json", {"centers_E": [[-2, 0]], "centers_F": [[2, 0]]})
    code, out, err = run("subadd", cfg, "--r-steps", 0)
    assert code == 1 and out == "" and "r-steps" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gammacap", "capacity", str(DATA / "two_disks.json"), "--rings", "0"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 2 and "1.88281250000000" in proc.stdout  # one stage cannot reach 1e-10
