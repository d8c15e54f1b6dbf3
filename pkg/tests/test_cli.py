import json
import subprocess
import sys

import pytest

from resloc.cli import main

DEGENERATE_CP2 = {"h": "2*z1^2 + z2", "f": ["z2 - z1^2", "-z1*z2"]}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return json.loads(out)


def test_residue_from_file(tmp_path, capsys):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(DEGENERATE_CP2), encoding="utf-8")
    out = run_json(["residue", str(path)], capsys)
    assert out == {
        "residue": {"re": [3, 1], "im": [0, 1]},
        "value": "3",
        "method": "certificate",
        "alpha": [2, 1],
    }


def test_residue_inline_nondegenerate(capsys):
    out = run_json(["residue", "--json", json.dumps({"h": "7", "f": ["z1 + z2", "z2"]})], capsys)
    assert out["method"] == "nondegenerate"
    assert out["value"] == "7"


def test_residue_with_supplied_certificate(capsys):
    problem = dict(DEGENERATE_CP2, certificate={"alpha": [2, 1], "B": [["-z1", "-1"], ["z2", "-z1"]]})
    out = run_json(["residue", "--json", json.dumps(problem)], capsys)
    assert out["value"] == "3" and out["alpha"] == [2, 1]


def test_residue_rejects_bad_certificate(capsys):
    problem = dict(DEGENERATE_CP2, certificate={"alpha": [0, 0], "B": [["1", "0"], ["0", "1"]]})
    code, _, err = run(["residue", "--json", json.dumps(problem)], capsys)
    assert code == 1 and "certificate" in err


def test_non_isolated_exits_2(capsys):
    code, _, err = run(["residue", "--json", json.dumps({"h": "1", "f": ["z1*z2", "z1^2"]})], capsys)
    assert code == 2
    assert "NotIsolatedOrCapTooLow" in err


def test_parse_error_exits_1(capsys):
    code, _, err = run(["residue", "--json", json.dumps({"h": "1", "f": ["z1^", "z2"]})], capsys)
    assert code == 1 and "position" in err
    code, _, _ = run(["residue", "--json", "{not json"], capsys)
    assert code == 1


def test_env_cap(monkeypatch, capsys):
    monkeypatch.setenv("RESLOC_MAX_EXP", "1")
    code, _, _ = run(["fm", "--maxdeg", "2", "--phi", "det"], capsys)
    assert code == 2
    monkeypatch.setenv("RESLOC_MAX_EXP", "8")
    assert run_json(["fm", "--maxdeg", "2", "--phi", "det"], capsys)["f_phi"] == "3"


def test_fm_maxdeg_with_cross_check(capsys):
    out = run_json(["fm", "--maxdeg", "2", "--phi", "det"], capsys)
    assert out["f_phi"] == "3"
    assert out["cross_check"] == {"closed_form": "3", "agrees": True}
    assert out["per_zero"][0]["point"] == ["1", "0", "0"]
    assert out["per_zero"][0]["contribution"] == "3"


def test_fm_diagonal_bott_sum(capsys):
    out = run_json(["fm", "--diag", "0,1,-1", "--phi", "det"], capsys)
    assert out["f_phi"] == "3"
    assert [z["contribution"] for z in out["per_zero"]] == ["1", "1", "1"]


def test_fm_top_chern_cp3(capsys):
    assert run_json(["fm", "--maxdeg", "3", "--phi", "tr^3"], capsys)["f_phi"] == "64"


def test_fm_k_positive_reports_undivided_sum(capsys):
    out = run_json(["fm", "--diag", "1,2,-3", "--phi", "tr(A^4)"], capsys)
    assert out["k"] == 2
    assert out["f_phi"] == "35/2"
    assert out["residue_sum"] == "105"


def test_fm_chart_field_input(capsys):
    field = {"chart_fields": [
        {"chart": 0, "components": ["-2*z1 - z1^2", "-z2 - z1*z2"], "zeros": [[0, 0], [-2, 0]]},
        {"chart": 1, "components": ["2*z1 + 1", "z2"], "zeros": [["-1/2", 0]]},
        {"chart": 2, "components": ["z1 + z2", "-z2"], "zeros": [[0, 0]]},
    ]}
    out = run_json(["fm", "--field", json.dumps(field), "--phi", "det"], capsys)
    assert out["f_phi"] == "3"
    assert len(out["per_zero"]) == 3


def test_fm_requires_one_field(capsys):
    code, _, _ = run(["fm", "--maxdeg", "2", "--diag", "1,-1", "--phi", "det"], capsys)
    assert code == 1


def test_fm_repeated_eigenvalues(capsys):
    code, _, err = run(["fm", "--diag", "1,1,-2", "--phi", "det"], capsys)
    assert code == 1 and "distinct" in err


def test_futaki_and_chern(capsys):
    out = run_json(["futaki", "--maxdeg", "3"], capsys)
    assert out["tr(A^4)"] == "0" and out["tr^4"] == "0" and out["agree"] is True
    out = run_json(["chern", "--maxdeg", "3"], capsys)
    assert out["chern_numbers"] == {"c3": "4", "c1*c2": "24", "c1^3": "64"}


def test_oracle(capsys):
    out = run_json(["oracle", "--h", "2*z1^2 + z2", "--f", "z2 - z1^2", "--f=-z1*z2",
                    "--radius", "0.5", "--nodes", "64"], capsys)
    assert list(out) == ["value_re", "value_im", "est_error"]
    assert abs(out["value_re"] - 3) < 1e-2 and abs(out["value_im"]) < 1e-2


def test_table_format_flags_rounding(capsys):
    code, out, _ = run(["oracle", "--h", "1", "--f", "z1", "--nodes", "64", "--format", "table"], capsys)
    assert code == 0
    assert "~" in out and "rounded" in out


def test_verify_restricted(capsys):
    code, out, _ = run(["verify", "--n-max", "3"], capsys)
    assert code == 0
    assert "FAIL" not in out
    assert "n=4" not in out


def test_verify_json(capsys):
    out = run_json(["verify", "--n-max", "2", "--format", "json"], capsys)
    assert out["passed"] is True
    assert {c["criterion"] for c in out["checks"]} == {1, 2, 3, 4, 5, 6, 7, 9}


def test_output_is_deterministic(capsys):
    a = run(["fm", "--diag", "1,2,-3", "--phi", "c2*c1^2"], capsys)[1]
    b = run(["fm", "--diag", "1,2,-3", "--phi", "c2*c1^2"], capsys)[1]
    assert a == b


@pytest.mark.parametrize("args", [["-m", "resloc", "fm", "--maxdeg", "2", "--phi", "tr^2"]])
def test_module_entry_point(args):
    proc = subprocess.run([sys.executable, *args], capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["f_phi"] == "9"
