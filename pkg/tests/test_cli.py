import csv
import io
import json
import subprocess
import sys

import pytest

from mldeg import cli
from mldeg.polysolve.solve import GenericityFailure

from conftest import GOLDEN


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def spec(name):
    return str(GOLDEN[name])


def test_compute_cube(capsys):
    code, out, _ = run(capsys, "compute", "--spec", spec("cube_ones"), "--no-timing")
    assert code == 0 and "mldeg=8 degree=48" in out


def test_compute_independence_c3(capsys):
    code, out, _ = run(capsys, "compute", "--spec", spec("independence_c3"), "--no-timing")
    assert code == 0 and "mldeg=3" in out


def test_compute_point_json(capsys):
    code, out, _ = run(capsys, "compute", "--spec", spec("point"), "--format", "json", "--no-timing")
    data = json.loads(out)
    assert code == 0 and data["schema_version"] == 1 and (data["mldeg"], data["degree"]) == (1, 1)


def test_zeros_rows(capsys):
    code, out, _ = run(capsys, "zeros", "--spec", spec("independence_c1"), "--pattern", "uuuu00000",
                       "--format", "csv", "--no-timing")
    assert code == 0 and out.splitlines()[1].endswith(",0,0,0,1,2,3")
    code, out, _ = run(capsys, "zeros", "--spec", spec("independence_c1"), "--pattern", "000uuuu00",
                       "--format", "csv", "--no-timing")
    assert out.splitlines()[1].endswith(",1,2,3,4,5,6")
    code, out, _ = run(capsys, "zeros", "--spec", spec("independence_c1"), "--pattern", "u" * 9,
                       "--format", "csv", "--no-timing")
    assert out.splitlines()[1].endswith(",1,2,3,4,5,6")


def test_zeros_bad_pattern(capsys):
    code, _, err = run(capsys, "zeros", "--spec", spec("independence_c1"), "--pattern", "uu0")
    assert code == 1 and "spec error" in err


def test_facets_cube(capsys):
    code, out, _ = run(capsys, "facets", "--spec", spec("cube_ones"), "--format", "csv", "--no-timing")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 6 and all(r["mldeg"] == "4" for r in rows)


def test_tropical_commands(capsys):
    code, out, _ = run(capsys, "tropical", "eliminate", "--spec", spec("segre_tropical"), "--no-timing")
    assert code == 0
    assert "(21*t^4 + 7*t^2)*theta1^2 + (9*t^4 - 14*t^2 + 3)*theta1 - 12*t^4 - 6" in out
    code, out, _ = run(capsys, "tropical", "subdivide", "--spec", spec("segre_tropical"), "--format", "json",
                       "--no-timing")
    assert code == 0 and json.loads(out)["rows"]


def test_validate(capsys):
    code, out, _ = run(capsys, "model", "validate", "--spec", spec("binary_4cycle"))
    assert code == 0 and "True" in out


def test_exit_codes(capsys, tmp_path, monkeypatch):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": 1, "type": "cube"}')
    assert run(capsys, "compute", "--spec", str(bad))[0] == 1
    assert run(capsys, "compute", "--spec", str(tmp_path / "missing.json"))[0] == 1
    bad.write_text("{not json")
    assert run(capsys, "compute", "--spec", str(bad))[0] == 1
    assert run(capsys, "compute", "--spec", spec("cube_generic"), "--timeout", "0.01")[0] == 3

    def fail(*args, **kwargs):
        raise GenericityFailure("draws disagree")

    monkeypatch.setattr(cli, "ml_degree", fail)
    assert run(capsys, "compute", "--spec", spec("segment"))[0] == 2


@pytest.mark.parametrize("argv", [
    ["compute", "--spec", "{cube}"],
    ["facets", "--spec", "{cube}", "--format", "json"],
    ["zeros", "--spec", "{ind}", "--pattern", "uu0u00000", "--seed", "7"],
])
def test_deterministic_output(capsys, argv):
    argv = [a.format(cube=spec("cube_ones"), ind=spec("independence_c1")) for a in argv] + ["--no-timing"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_exact_gb_flag(capsys):
    code, out, _ = run(capsys, "compute", "--spec", spec("independence_c5"), "--exact-gb", "--no-timing")
    assert code == 0 and "mldeg=5" in out


def test_entry_point():
    res = subprocess.run([sys.executable, "-m", "mldeg.cli", "compute", "--spec", spec("segment"),
                          "--no-timing"], capture_output=True, text=True)
    assert res.returncode == 0 and "mldeg=1 degree=1" in res.stdout
