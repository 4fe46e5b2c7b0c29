import json
import os
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from lvaci import cli

SCHEMA = json.loads(resources.files("lvaci").joinpath("report.schema.json").read_text())


def validate(doc, kind):
    jsonschema.Draft202012Validator({**SCHEMA, "$ref": f"#/$defs/{kind}"}).validate(doc)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_analyze_km(capsys):
    code, out, _ = run(capsys, "analyze", "1", "-1", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "analyze")
    assert doc["class"]["kind"] == "l3"
    assert all(sp["exponents"] == ["-1", "1", "3"] for sp in doc["spectra"])
    assert doc["aci"]["free_param_total"] == 2
    assert doc["classifier_agrees"] is True


def test_analyze_not_aci(capsys):
    code, out, _ = run(capsys, "analyze", "2", "3", "7", "--json")
    assert code == 3
    doc = json.loads(out)
    validate(doc, "analyze")
    assert doc["integrality"]["offending"] == ["6/7"]


def test_analyze_degenerate(capsys):
    code, out, _ = run(capsys, "analyze", "1", "0", "0")
    assert code == 4
    assert "degenerate" in out


def test_analyze_rationals_and_order(capsys):
    code, out, _ = run(capsys, "analyze", "1/2", "-1/2", "1", "--order", "6", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["input"] == ["1/2", "-1/2", "1"]
    assert all(b["truncation_order"] == 6 for b in doc["balances"])


@pytest.mark.parametrize("argv", [["analyze", "1", "x", "0"], ["analyze", "1.5", "0", "1"], ["analyze", "1/0", "1", "1"],
                                  ["analyze", "0", "0", "0"], ["analyze", "1", "1"], ["bogus"], ["scan", "--max", "0"],
                                  ["verify", "1", "1", "1", "--x0", "1,2"], ["verify", "1", "1", "1", "--h", "-1"],
                                  ["verify", "1", "1", "1", "--t", "nan"], ["lemmas", "--bound", "0"]])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_json_round_trip_and_rational_rendering(capsys):
    _, out, _ = run(capsys, "analyze", "1", "2", "1", "--json")
    assert cli.dumps(json.loads(out)) == out
    assert out.endswith("\n") and "." not in "".join(json.loads(out)["input"])


def test_scan_small_box(capsys):
    code, out, _ = run(capsys, "scan", "--max", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "scan")
    by_class = {r["class"]: r for r in doc["rows"]}
    assert by_class["l3"]["class_representative"] == ["1", "-1", "1"]
    assert by_class["l2"]["class_representative"] == ["1", "0", "1"]
    assert doc["disagreements"] == []


def test_scan_box_three_histogram(capsys):
    code, out, _ = run(capsys, "scan", "--max", "3", "--json")
    doc = json.loads(out)
    assert code == 0
    kinds = set(doc["histogram"])
    assert kinds == {"l2", "l3", "l4", "l6", "l_lambda", "l0", "not_aci", "degenerate"}
    assert sum(doc["histogram"].values()) == doc["orbits"] == len(doc["rows"])


def test_scan_deterministic_and_out_file(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "scan", "--max", "2", "--json", "--out", str(a))[0] == 0
    assert run(capsys, "scan", "--max", "2", "--json", "--out", str(b), "--jobs", "2")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().endswith(b"\n")


def test_scan_unwritable_out(tmp_path, capsys):
    code, _, err = run(capsys, "scan", "--max", "1", "--out", str(tmp_path / "missing" / "x.json"))
    assert code == 1 and "cannot write" in err


def test_verify_km(capsys):
    code, out, _ = run(capsys, "verify", "1", "-1", "1", "--x0", "1,2,3", "--t", "10", "--h", "0.001", "--json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "verify")
    assert doc["drift"]["h_drift"] < 1e-8 and doc["drift"]["f_drift"] < 1e-8
    assert doc["laurent"]["relative_error"] < 1e-4


def test_verify_periodic_km_extras(capsys):
    code, out, _ = run(capsys, "verify", "-1", "1", "-1", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["km"]["lax_residual_zero"] is True and doc["km"]["h3_drift"] < 1e-8


def test_verify_closed_form_cross_check(capsys):
    _, out, _ = run(capsys, "verify", "1", "3", "2", "--x0", "1,2,3", "--t", "3", "--json")
    doc = json.loads(out)
    validate(doc, "verify")
    assert doc["closed_form"]["max_relative_error"] < 1e-6
    assert doc["checks"]["closed_form"] is True


def test_verify_blow_up(capsys):
    code, out, _ = run(capsys, "verify", "1", "1", "1", "--x0", "1,-2,3", "--json")
    assert code == 5
    doc = json.loads(out)
    validate(doc, "blowup")
    assert 0 < doc["blowup_time"] < 10


def test_lemmas(capsys):
    code, out, _ = run(capsys, "lemmas", "--bound", "6", "--json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "lemmas")
    assert [2, 6] in doc["lemma1"] and [4, 4] in doc["lemma1"]
    code, out, _ = run(capsys, "lemmas", "--bound", "1", "--json")
    doc = json.loads(out)
    assert doc["lemma1"] == doc["lemma2"] == [[1, 1]]


def test_normalize(capsys):
    code, out, _ = run(capsys, "normalize", "3", "-1", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    validate(doc, "normalize")
    code2, out2, _ = run(capsys, "normalize", "1", "-2", "3", "--json")
    assert json.loads(out2)["representative"] == doc["representative"]


def test_module_entry_point_and_log_level():
    env = dict(os.environ, LV_LOG="debug")
    res = subprocess.run([sys.executable, "-m", "lvaci", "normalize", "2", "0", "2"], capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert "(0, 1, -1)" in res.stdout
    assert "DEBUG" in res.stderr
