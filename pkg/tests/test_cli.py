import json
import subprocess
import sys

import jsonschema
import pytest

from contactnf import report as rp
from contactnf.cli import main, read_config, run

E1 = "theta*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))"
E2 = "x1*d(theta) + (theta - x2)*d(x1)"
FIXTURE = "vars: theta, x1, x2\n3*theta^2*d(theta) - theta*d(x1) - x1*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))"
SCHEMA = rp.load_schema()


def _valid(report):
    jsonschema.validate(json.loads(rp.dumps(report)), SCHEMA)
    return report


def test_classify_first_example():
    r = _valid(run("classify", E1))
    assert r["classification"] == "transversal"
    assert r["diagnosis"]["tangency"] == "transversal"
    assert r["verification"]["residual_is_zero"]


def test_classify_second_example():
    r = _valid(run("classify", E2))
    assert r["classification"] == "tangent_degenerate"


@pytest.mark.parametrize("task", ["prenormalize", "normalize"])
def test_contact_tasks(task):
    for text in (E1, FIXTURE):
        r = _valid(run(task, text, {"degree": 4}))
        assert r["verification"]["residual_is_zero"]
        assert r["verification"]["verified_degree"] >= 4


def test_primitive_task():
    r = _valid(run("primitive", "(1/2)*(x*d(y) - y*d(x))"))
    assert r["normal_form"]["eigenvalues"] == ["1/2", "1/2"]
    assert r["flags"]["linearizable"] is True
    assert r["verification"]["residual_is_zero"] and r["verification"]["reconstruction_ok"]


def test_spectrum_task():
    r = _valid(run("spectrum", "", {"lambda": "2,-1", "depth": 12}))
    assert r["flags"]["bruno_partial_sums"] == ["0"] * 12
    assert r["spectrum"]["resonances"] == [[2, 3], [3, 5]]


def test_spectrum_declared_constants():
    r = _valid(run("spectrum", "", {"lambda": "s,1-s", "constants": "s=1.4142135623730951:sqrt2"}))
    assert r["spectrum"]["toric_degree"] == 2
    assert r["flags"]["linearizable_certificate"] == "unconditional"


def test_exact_coefficients_are_strings():
    out = rp.dumps(run("normalize", E1, {"degree": 3}))
    assert "1/2" in out

    def walk(o):
        if isinstance(o, dict):
            for k, v in o.items():
                if k == "terms":
                    assert all(isinstance(c, str) for _, c in v)
                walk(v)
        elif isinstance(o, list):
            for v in o:
                walk(v)
    walk(json.loads(out))


def test_deterministic_output():
    a = rp.dumps(run("normalize", FIXTURE, {"degree": 3}))
    b = rp.dumps(run("normalize", FIXTURE, {"degree": 3}))
    assert a == b


@pytest.mark.parametrize("args, status", [
    (["--task", "classify", "--expr", E1], 0),
    (["--expr", "theta*"], 2),
    (["--task", "primitive", "--expr", "x*d(y) + d(x)"], 3),
    (["--task", "normalize", "--expr", E2], 4),
    (["--task", "normalize", "--mode", "float", "--expr", E1], 4),
])
def test_exit_codes(args, status, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(args + ["--out", str(out)]) == status
    r = json.loads(out.read_text())
    jsonschema.validate(r, SCHEMA)
    assert (r["status"] == "ok") == (status == 0)


def test_root_not_in_field_exit_code(tmp_path):
    # h(0,0)/3 = 2/3 is not a rational cube
    text = "vars: theta, x1, x2\n6*theta^2*d(theta) - 2*theta*d(x1) - 2*x1*d(theta) + (1/2)*(x1*d(x2) - x2*d(x1))"
    assert main(["--task", "prenormalize", "--expr", text, "--out", str(tmp_path / "r.json")]) == 5


def test_config_file(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("degree = 3  # small\nmode = exact\ndepth = 4\n")
    assert read_config(str(cfg)) == {"degree": "3", "mode": "exact", "depth": "4"}
    src = tmp_path / "a.form"
    src.write_text(E1)
    out = tmp_path / "r.json"
    assert main(["--config", str(cfg), "--task", "normalize", "--input", str(src), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["input"]["degree"] == 3


def test_console_script():
    p = subprocess.run([sys.executable, "-m", "contactnf.cli", "--task", "spectrum", "--lambda", "2,-1"],
                       capture_output=True, text=True, check=True)
    assert json.loads(p.stdout)["flags"]["hyperbolic"] is True


def test_schema_shipped_in_docs():
    from pathlib import Path
    docs = Path(__file__).resolve().parents[1] / "docs" / "report.schema.json"
    assert json.loads(docs.read_text()) == SCHEMA
