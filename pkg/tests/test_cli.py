import json
import math
import os
import subprocess
import sys

import pytest

from expolab.cli import RunConfig, UsageError, cache_dir, cached_zero_table, dumps, main
from expolab.indicator_ft import DomainSpec

IRRATIONAL = [[0, 0], [math.sqrt(2), math.sqrt(3)], [math.sqrt(5), math.sqrt(7)]]


def write_set(tmp_path, name, dim, points):
    path = tmp_path / name
    path.write_text(json.dumps({"dim": dim, "points": points}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_zeros_json(capsys):
    code, out = run(capsys, "zeros", "--dim", "3", "--m-max", "1")
    doc = json.loads(out)
    assert code == 0
    lo, hi = doc["zeros"][0][1:]
    assert 0.5 * (lo + hi) == pytest.approx(0.71514833, abs=1e-8)


def test_zeros_csv(capsys):
    code, out = run(capsys, "zeros", "--dim", "2", "--m-max", "10", "--output", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "m,lo,hi,midpoint" and len(lines) == 11


@pytest.mark.parametrize("argv", [
    ["zeros", "--dim", "1", "--m-max", "3"],
    ["zeros", "--dim", "2"],
    ["decide", "--dim", "2", "--domain", "disk", "--input", "x"],
    ["decide", "--dim", "2"],
    ["construct", "planar", "--dim", "3", "--n", "3"],
    ["construct", "equatorial", "--dim", "2", "--n", "3"],
    ["decide", "--dim", "2", "--zero-tol", "-1", "--input", "x"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_numeric_failure_exit_2(capsys):
    assert main(["zeros", "--dim", "2", "--m-max", "0"]) == 2


@pytest.mark.parametrize("domain,dim,points,expected", [
    ("cube", 2, [[0, 0], [0.5, 0.5]], 0),
    ("cube", 2, IRRATIONAL, 1),
    ("ball", 2, [[0, 0], [1, 0]], 0),
    ("ball", 3, [[0, 0, 0], [1, 0, 0], [1.5405907367929075, 0, 0]], 1),
])
def test_decide_exit_codes(tmp_path, capsys, domain, dim, points, expected):
    path = write_set(tmp_path, "A.json", dim, points)
    code, out = run(capsys, "decide", "--domain", domain, "--dim", str(dim), "--input", path)
    assert code == expected
    cert = json.loads(out)["certificate"]
    if expected == 1 and domain == "ball":
        assert cert["evidence"]["cutoff"] == 50.0


def test_decide_inconclusive(tmp_path, capsys):
    # four random points in the plane: the coarse scan finds no witness
    pts = [[0.3, 7.1], [4.4, 2.9], [8.8, 5.5], [6.1, 0.7]]
    path = write_set(tmp_path, "A.json", 2, pts)
    code, out = run(capsys, "decide", "--dim", "2", "--input", path, "--scan-radius", "2",
                    "--scan-step", "0.05")
    assert code == 3
    assert json.loads(out)["certificate"]["verdict"] == "inconclusive"


@pytest.mark.parametrize("argv,n", [
    (["construct", "equatorial", "--dim", "3", "--n", "5"], 5),
    (["construct", "planar", "--n", "3"], 3),
    (["construct", "collinear-complete", "--dim", "3", "--n", "3", "--cutoff", "50"], 3),
])
def test_construct(argv, n, capsys):
    code, out = run(capsys, *argv)
    doc = json.loads(out)
    assert code == 0 and len(doc["set"]["points"]) == n
    cert = doc["certificate"]
    if cert["verdict"] == "incomplete":
        assert max(cert["residuals"]) < 1e-8
    else:
        assert cert["verdict"] == "complete_certified"


def test_construct_output_feeds_decide(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["construct", "equatorial", "--dim", "3", "--n", "4", "--out", str(out)]) == 0
    code, _ = run(capsys, "decide", "--dim", "3", "--input", str(out))
    assert code == 0


def test_audit_pass_and_fail(tmp_path, capsys):
    path = write_set(tmp_path, "A.json", 2, [[0, 0], [1, 0], [0, 2.5]])
    code, out = run(capsys, "audit", "--dim", "2", "--input", path)
    doc = json.loads(out)
    assert code == 0 and doc["audit"]["passed"]
    assert doc["density"]["separation"] == 1.0
    code, out = run(capsys, "audit", "--dim", "2", "--input", path, "--phi", "power:0,0",
                    "--output", "csv")
    lines = out.splitlines()
    assert code == 1
    assert lines[0] == "pair_i,pair_j,distance,bound_or_gap" and len(lines) == 4


def test_audit_tabulated_profile(tmp_path, capsys):
    path = write_set(tmp_path, "A.json", 2, [[0, 0], [1, 0]])
    knots = tmp_path / "phi.json"
    knots.write_text(json.dumps([[0, 5.0], [10, 0.0]]))
    code, out = run(capsys, "audit", "--dim", "2", "--input", path, "--phi", f"table:{knots}")
    assert code == 0 and json.loads(out)["phismall"] is True


def test_audit_bad_phi(tmp_path):
    path = write_set(tmp_path, "A.json", 2, [[0, 0], [1, 0]])
    with pytest.raises(SystemExit):
        main(["audit", "--dim", "2", "--input", path, "--phi", "gauss:1"])


def test_experiment_deterministic(capsys):
    argv = ["experiment", "--domain", "cube", "--dim", "3", "--n", "4", "--trials", "20", "--seed", "5"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv, "--threads", "0")
    assert a == b
    assert json.loads(a)["complete_certified"] == 20


def test_json_byte_identical(tmp_path, capsys):
    path = write_set(tmp_path, "A.json", 2, [[0, 0], [1, 0]])
    outs = [run(capsys, "decide", "--dim", "2", "--input", path)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert dumps({"b": 1, "a": 0.1}) == '{\n  "a": 0.1,\n  "b": 1\n}\n'


def test_disk_cache_and_revalidation():
    t = cached_zero_table(2, 12, 1e-10)
    (path,) = list(cache_dir().glob("zeros_2_12_*.json"))
    assert cached_zero_table(2, 12, 1e-10) == t
    doc = json.loads(path.read_text())
    doc["zeros"][3][1] += 0.2
    doc["zeros"][3][2] += 0.2
    path.write_text(json.dumps(doc))
    assert cached_zero_table(2, 12, 1e-10) == t
    assert json.loads(path.read_text())["zeros"][3] == list(t.zeros[3])


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("decide", DomainSpec.ball(2), gap_tol=0)
    with pytest.raises(UsageError):
        RunConfig("decide", DomainSpec.ball(2), output="xml")
    assert RunConfig("zeros", DomainSpec.ball(2)).seed == 0


def test_console_script(tmp_path):
    env = dict(os.environ, EXPOLAB_CACHE_DIR=str(tmp_path))
    proc = subprocess.run([sys.executable, "-m", "expolab.cli", "zeros", "--dim", "2", "--m-max", "2"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["zeros"]) == 2
