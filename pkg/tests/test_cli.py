"""CLI behaviors: exit codes, round trips, schema-valid JSON, determinism."""
import json
from pathlib import Path

import jsonschema
import pytest

from chainsurg import catalog
from chainsurg.cli import main
from chainsurg.csscode import CssCode

SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "report_schema.json").read_text()
)


@pytest.fixture()
def steane_file(tmp_path):
    p = tmp_path / "steane.code"
    p.write_text(catalog.steane().to_text())
    return str(p)


@pytest.fixture()
def welding_files(tmp_path):
    rc = main(["catalog", "export", "example:welding", "--dir", str(tmp_path)])
    assert rc == 0
    return str(tmp_path / "welding.code"), str(tmp_path / "welding.sub")


def run_json(capsys, argv):
    rc = main(["--json"] + argv)
    out = capsys.readouterr().out
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return rc, doc


class TestValidate:
    def test_steane(self, steane_file, capsys):
        rc = main(["validate", steane_file])
        out = capsys.readouterr().out
        assert rc == 0
        assert out.strip() == "valid CSS code [[7,1,?]]"

    def test_json_schema(self, steane_file, capsys):
        rc, doc = run_json(capsys, ["validate", steane_file])
        assert rc == 0 and doc["n"] == 7 and doc["k"] == 1

    def test_invalid_code_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.code"
        bad.write_text("hx:\n1 3\n110\nhz:\n1 3\n100\n")
        rc = main(["validate", str(bad)])
        err = capsys.readouterr().err
        assert rc == 1
        payload = json.loads(err)
        assert payload["error"] == "NonCommutingChecks"

    def test_usage_error_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["validate"])
        assert exc.value.code == 2


class TestMergeCommands:
    def test_merge_analyze_human(self, welding_files, capsys):
        code, sub = welding_files
        rc = main(["merge", code, "--subcode", sub, "--analyze"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "killed classes (1): [[1, 1]]" in out

    def test_merge_json_schema(self, welding_files, capsys):
        code, sub = welding_files
        rc, doc = run_json(capsys, ["merge", code, "--subcode", sub])
        assert rc == 0
        assert doc["analysis"]["killed"] == [[1, 1]]

    def test_merge_out_readable(self, welding_files, tmp_path, capsys):
        code, sub = welding_files
        out_file = tmp_path / "merged.code"
        rc = main(["merge", code, "--subcode", sub, "--out", str(out_file)])
        capsys.readouterr()
        assert rc == 0
        merged = CssCode.from_text(out_file.read_text())
        assert (merged.n, merged.k) == (13, 1)

    def test_wrong_merge_exits_1(self, tmp_path, capsys):
        rc = main(["catalog", "export", "example:wrong_merge", "--dir", str(tmp_path)])
        capsys.readouterr()
        assert rc == 0
        rc = main(
            [
                "merge",
                str(tmp_path / "wrong_merge.code"),
                "--subcode",
                str(tmp_path / "wrong_merge.sub"),
            ]
        )
        err = capsys.readouterr().err
        assert rc == 1
        assert json.loads(err)["error"] == "ClosureViolated"

    def test_logical_map(self, welding_files, capsys):
        code, sub = welding_files
        rc, doc = run_json(capsys, ["logical-map", code, "--subcode", sub])
        assert rc == 0
        assert len(doc["matrix"]) == 1 and doc["matrix"][0] == [1, 1]


class TestPlanCommands:
    def test_cnot_simulate(self, steane_file, capsys):
        rc = main(["cnot", steane_file, "--control", "0", "--simulate"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "logical channel = CNOT (max deviation" in out

    def test_cnot_json(self, steane_file, capsys):
        rc, doc = run_json(capsys, ["cnot", steane_file, "--control", "0", "--simulate"])
        assert rc == 0
        assert doc["max_deviation"] < 1e-9

    def test_cnot_plan_file(self, steane_file, tmp_path, capsys):
        plan_file = tmp_path / "plan.json"
        rc = main(["cnot", steane_file, "--control", "0", "--out", str(plan_file)])
        capsys.readouterr()
        assert rc == 0
        doc = json.loads(plan_file.read_text())
        assert doc["schema"] == "chainsurg-plan/1"

    def test_switch(self, capsys):
        rc, doc = run_json(capsys, ["switch"])
        assert rc == 0
        assert doc["merged"] == {"n": 15, "k": 1, "d": 3}
        assert doc["p1_star"] == [[1, 1]]
        assert doc["round_trip_identity"] is True

    def test_simulate_with_outcome(self, steane_file, capsys):
        rc, doc = run_json(
            capsys,
            [
                "simulate",
                steane_file,
                "--control",
                "0",
                "--outcome",
                "zmerge.zz0=-1",
            ],
        )
        assert rc == 0
        assert doc["max_deviation"] < 1e-9
        assert doc["corrections"]  # a correction was applied


class TestCatalogCommands:
    def test_list(self, capsys):
        rc, doc = run_json(capsys, ["catalog", "list"])
        assert rc == 0
        assert "steane" in doc["names"]
        assert "example:welding" in doc["names"]

    def test_export_round_trip(self, tmp_path, capsys):
        out = tmp_path / "rm15.code"
        rc = main(["catalog", "export", "reed_muller_15", "--out", str(out)])
        capsys.readouterr()
        assert rc == 0
        code = CssCode.from_text(out.read_text())
        assert (code.n, code.k) == (15, 1)

    def test_deterministic_output(self, steane_file, capsys):
        main(["--json", "homology", steane_file])
        first = capsys.readouterr().out
        main(["--json", "homology", steane_file])
        second = capsys.readouterr().out
        assert first == second


class TestPropagate:
    def test_z_through_welding(self, welding_files, capsys):
        code, sub = welding_files
        rc, doc = run_json(capsys, ["propagate", code, "--subcode", sub, "--pauli", "Z2"])
        assert rc == 0
        assert doc["flips"] == []

    def test_x_flips_record(self, welding_files, capsys):
        code, sub = welding_files
        # qubit 3 is the first merged boundary qubit of the first patch
        rc, doc = run_json(capsys, ["propagate", code, "--subcode", sub, "--pauli", "X3"])
        assert rc == 0
        assert doc["flips"]
