import csv
import io
import json
import subprocess
import sys

import pytest

from kndeform.cli import VERBS, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_jacobi_symbolic_passes():
    code, out, _ = call("jacobi", "--family", "genus1_vf_2param", "--window", "-8", "8", "--symbolic")
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_j_exceptional_line():
    code, out, err = call("j", "--s", "1")
    assert code == 2 and out == ""
    assert "ExceptionalLine" in err


def test_table_csv():
    code, out, _ = call("table", "--family", "witt", "--window", "0", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["coefficient"] for r in rows] == ["1", "2", "1"]


def test_verification_failure_exits_one():
    code, out, _ = call("coboundary-solve", "--family", "witt", "--window", "-3", "3")
    assert code == 1
    assert json.loads(out)["solvable"] is False


@pytest.mark.parametrize("argv", [
    ["jacobi", "--bogus"],
    ["nonsense"],
    ["table", "--window", "3", "-3"],
    ["jacobi", "--family", "genus1_vf_2param"],
    ["h2", "--symbolic"],
    ["coboundary-solve", "--symbolic"],
    ["table", "--param", "q=1"],
    ["table", "--param", "e1=0.5"],
    ["curve", "--e1", "x", "--e2", "1"],
    ["j", "--curve-c", "1/2"],
    ["validate-fd", "--fd", "/nonexistent/algebra.json"],
])
def test_usage_errors_exit_two(argv, capsys):
    code, _, _ = call(*argv)
    assert code == 2


def test_deterministic_output():
    argv = ["h2", "--family", "witt", "--window", "-4", "4", "--degree", "-2"]
    assert call(*argv) == call(*argv)


def test_output_file(tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = call("jump-witness", "--s", "3", "--window", "-4", "4", "--output", str(target))
    assert code == 0 and out == ""
    report = json.loads(target.read_text())
    assert report["rescaled_equals_unit_fiber"] and report["zero_fiber_equals_witt"]


def test_curve_and_classify():
    code, out, _ = call("curve", "--e1", "1", "--e2", "2")
    assert code == 0
    d = json.loads(out)
    assert d["delta"] == "6400" and d["j"] == "148176/25"
    code, out, _ = call("classify", "--e1", "0", "1", "--e2", "0", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["classification"], r["line"]) for r in rows] == [
        ("Cuspidal", ""), ("Smooth", ""), ("Smooth", ""), ("Nodal", "D1"),
    ]


def test_j_variants():
    assert json.loads(call("j", "--s", "0")[1])["j"] == "1728"
    assert json.loads(call("j", "--curve-c", "1")[1])["j"] == "148176/25"
    assert json.loads(call("j", "--point", "1", "2")[1])["j"] == "148176/25"
    code, out, _ = call("j", "--symbolic")
    assert code == 0 and all(json.loads(out)["identities"].values())


def test_validate_custom_fd(tmp_path):
    def rec(a, b, c, v):
        return {"a": a, "b": b, "c": c, "value": v}

    # the two-dimensional non-abelian algebra [x, y] = y
    good = {"dim": 2, "basis_names": ["x", "y"],
            "constants": [rec("x", "y", "y", "1"), rec("y", "x", "y", "-1")]}
    # antisymmetric but violates Jacobi
    bad = {"dim": 3, "basis_names": ["x", "y", "z"],
           "constants": [rec("x", "y", "z", "1"), rec("y", "x", "z", "-1"),
                         rec("y", "z", "y", "1"), rec("z", "y", "y", "-1")]}
    for data, expected in ((good, 0), (bad, 1)):
        path = tmp_path / "fd.json"
        path.write_text(json.dumps(data))
        assert call("validate-fd", "--fd", str(path))[0] == expected


def test_first_order_and_rescale():
    code, out, _ = call("first-order", "--family", "genus1_vf_Ds", "--window", "-6", "6", "--param", "s=2")
    assert code == 0 and json.loads(out)["coboundary"]["solvable"]
    code, out, _ = call("rescale-check", "--family", "genus1_vf_Ds", "--window", "-5", "5")
    assert code == 0 and json.loads(out)["lambda_cancels"]
    assert call("rescale-check", "--family", "witt")[0] == 2


def test_other_verbs_run():
    assert call("assoc", "--window", "-3", "3")[0] == 0
    assert call("cocycle-check", "--family", "witt", "--window", "-4", "4")[0] == 0
    assert call("cocycle-check", "--family", "genus1_current", "--cocycle", "current_geometric",
                "--window", "-3", "3")[0] == 0
    assert call("validate-fd")[0] == 0
    assert set(VERBS) >= {"table", "jacobi", "h2", "j", "classify"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kndeform", "j", "--s", "-1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["j"] == "1728"
