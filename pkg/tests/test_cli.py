import json
import subprocess
import sys

import pytest

from kloosterman import verification
from kloosterman.cli import build_parser, render_csv, run
from kloosterman.verification import Check, Criterion


def run_json(capsys, argv):
    code = run(argv)
    doc = json.loads(capsys.readouterr().out)
    return code, doc


def test_field_report(capsys):
    code, doc = run_json(capsys, ["field", "--r", "2"])
    assert code == 0
    assert doc["command"] == "field"
    assert doc["parameters"]["r"] == "2"
    assert all(chk["pass"] for chk in doc["checks"])
    assert "elapsed" in doc
    assert list(doc)[-1] == "elapsed"


def test_integers_serialize_as_strings(capsys):
    _, doc = run_json(capsys, ["ksum", "--r", "3", "--all", "--h-max", "2"])
    values = doc["results"]["kloosterman"]
    assert values["1"] == "-5"
    assert all(isinstance(v, str) for v in values.values())
    assert doc["results"]["moments"] == ["7", "1", "55"]


def test_spec_group_example(capsys):
    code, doc = run_json(capsys, ["group", "--n", "2", "--r", "1", "--report"])
    assert code == 0
    assert doc["results"]["sp_order"] == "720"
    assert doc["results"]["coset_orders"] == ["48", "288", "384"]


def test_spec_code_example(capsys):
    code, doc = run_json(
        capsys,
        ["code", "--family", "minus", "--n", "1", "--r", "3", "--weights", "--j-max", "2"],
    )
    assert code == 0
    for method in ("direct", "closed_form", "macwilliams"):
        assert doc["results"][f"weights_{method}"] == ["1", "8", "388"]
    assert all(chk["pass"] for chk in doc["checks"])


def test_group_coset_report(capsys):
    code, doc = run_json(
        capsys, ["group", "--n", "1", "--r", "3", "--coset", "0", "--mode", "enumerated"]
    )
    assert code == 0
    assert doc["results"]["coset_order"] == "56"
    hist = doc["results"]["trace_histogram"]
    assert [hist[str(b)] for b in range(8)] == [
        "8", "0", "0", "16", "0", "16", "0", "16",
    ]


def test_moments_subcommand(capsys):
    code, doc = run_json(
        capsys,
        ["moments", "--family", "minus", "--n", "1", "--r", "3", "--h-max", "4"],
    )
    assert code == 0
    assert doc["results"]["mk_recursion"] == ["7", "1", "55", "-47", "871"]
    assert all(chk["pass"] for chk in doc["checks"])


def test_exit_code_2_on_usage_errors(capsys):
    assert run(["nosuchcommand"]) == 2
    assert run(["field"]) == 2  # --r is required
    assert run(["field", "--r", "13"]) == 2  # unsupported field
    assert run(["hist", "--r", "1"]) == 2  # histogram needs q > 2
    capsys.readouterr()
    # degenerate recursions refuse without the explicit flag
    assert run(["moments", "--family", "minus", "--n", "1", "--r", "1", "--h-max", "3"]) == 2
    capsys.readouterr()
    assert (
        run(
            [
                "moments", "--family", "minus", "--n", "1", "--r", "1",
                "--h-max", "3", "--allow-degenerate",
            ]
        )
        == 0
    )
    capsys.readouterr()


def test_exit_code_3_on_budget(capsys):
    code = run(
        ["group", "--n", "2", "--r", "2", "--coset", "1", "--mode", "enumerated",
         "--matrix-budget", "10"]
    )
    assert code == 3
    capsys.readouterr()


def test_exit_code_1_on_failed_check(capsys, monkeypatch):
    fake = Criterion(
        number=99,
        name="stub",
        limit=5.0,
        run=lambda budget: [Check("boom", 1, 2)],
    )
    monkeypatch.setattr(verification, "CRITERIA", (fake,))
    code, doc = run_json(capsys, ["verify", "--criteria", "99"])
    assert code == 1
    assert doc["results"]["criteria"]["99-stub"]["passed"] is False
    assert doc["checks"][0]["pass"] is False


def test_verify_single_criterion(capsys):
    code, doc = run_json(capsys, ["verify", "--criteria", "1"])
    assert code == 0
    summary = doc["results"]["criteria"]
    assert list(summary) == ["01-carlitz-identity"]
    assert summary["01-carlitz-identity"]["passed"] is True
    assert "01-carlitz-identity" in doc["timings"]


def test_reports_are_deterministic(capsys):
    outputs = []
    for _ in range(2):
        run(["group", "--n", "2", "--r", "1", "--report"])
        doc = json.loads(capsys.readouterr().out)
        doc.pop("elapsed")
        doc.pop("timings", None)
        outputs.append(json.dumps(doc, sort_keys=False))
    assert outputs[0] == outputs[1]


def test_csv_render(capsys):
    code = run(["field", "--r", "2", "--format", "csv"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "section,name,expected,actual,pass"
    assert not any(line.startswith("elapsed") for line in lines)


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = run(["field", "--r", "2", "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(target.read_text())
    assert doc["command"] == "field"


def test_alternative_modulus_flag(capsys):
    _, default = run_json(capsys, ["hist", "--r", "3"])
    _, alt = run_json(capsys, ["hist", "--r", "3", "--modulus", "13"])
    assert default["results"]["histogram"] == alt["results"]["histogram"]
    assert default["parameters"]["modulus"] != alt["parameters"]["modulus"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kloosterman", "field", "--r", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "field"


def test_parser_covers_all_handlers():
    parser = build_parser()
    actions = [a for a in parser._subparsers._group_actions][0]
    assert set(actions.choices) == {
        "field", "ksum", "hist", "moments", "group", "code", "verify",
    }


def test_render_csv_shape():
    from kloosterman.cli import Report

    rep = Report(
        command="demo",
        parameters={"r": 2},
        results={"table": {"x": 5}},
        checks=[Check("eq", 1, 1)],
    )
    text = render_csv(rep)
    lines = text.splitlines()
    assert lines[0] == "section,name,expected,actual,pass"
    assert "checks,eq,1,1,True" in lines
    assert "results.table,x,,5," in lines
