import json

import pytest
from click.testing import CliRunner

from d4design.cli import main


def run(*args):
    result = CliRunner().invoke(main, list(args))
    return result


def report(*args):
    result = run(*args)
    return result.exit_code, json.loads(result.output)


def test_shell():
    code, doc = report("shell", "--m", "1")
    assert code == 0
    assert doc["command"] == "shell"
    assert doc["checks"][0]["value"] == "24" and doc["checks"][0]["pass"] is True
    assert set(doc) == {"command", "params", "checks", "elapsed_ms"}
    _, doc = report("shell", "--m", "3")
    assert doc["checks"][0]["value"] == "96"


def test_shell_usage_error():
    assert run("shell", "--m", "0").exit_code == 2


def test_shell_export(tmp_path):
    path = tmp_path / "s.txt"
    code, _ = report("shell", "--m", "2", "--export", str(path))
    assert code == 0
    assert len(path.read_text().splitlines()) == 24


def test_design():
    code, doc = report("design", "--m", "1", "--max-degree", "12")
    assert code == 0
    values = {c["name"]: c["value"] for c in doc["checks"]}
    assert values["harmonic strength contains {2, 4, 10}"] == "{2, 4, 10}"
    assert values["P6 shell sum = -192 tau2(m)"] == "-192"
    _, doc = report("design", "--m", "1", "--max-degree", "2")
    assert doc["checks"][0]["value"] == "{2}"


def test_design_cap():
    result = run("design", "--m", "1", "--max-degree", "40")
    assert result.exit_code != 0
    assert "D4DESIGN_DEGREE_CAP" in result.output


def test_lp_certify():
    code, doc = report("lp-certify", "--a1", "7/3")
    assert code == 0
    bounds = [c["value"] for c in doc["checks"] if c["name"].endswith(": bound")]
    assert bounds == ["12", "12"]
    assert run("lp-certify", "--a1", "-1").exit_code == 2


def test_decompose():
    code, doc = report("decompose", "--m", "25")
    assert code == 0
    assert doc["checks"][0]["value"] == "31"
    assert len(doc["checks"]) == 32


@pytest.mark.parametrize("group,expected", [("n", "[1, 0, 0, 0, 0, 0, 7, 0, 9, 0, 0, 0, 26]"), ("trivial", "[1, 4, 9]")])
def test_molien(group, expected):
    degree = "12" if group == "n" else "2"
    code, doc = report("molien", "--group", group, "--max-degree", degree)
    assert code == 0
    assert doc["checks"][-1]["value"] == expected


def test_qseries_tau2(tmp_path):
    out = tmp_path / "t.csv"
    code, doc = report("qseries", "tau2", "--bound", "5", "--out", str(out))
    assert code == 0
    assert doc["checks"][0]["value"] == "[1, -8, 12, 64, -210]"
    assert out.read_text().splitlines()[:2] == ["m,tau2", "1,1"]


def test_qseries_theta_and_scan():
    code, _ = report("qseries", "theta", "--bound", "100")
    assert code == 0
    code, doc = report("qseries", "scan", "--bound", "3000", "--method", "modular")
    assert code == 0 and all(c["pass"] for c in doc["checks"])


def test_qseries_budget_checked_before_allocation(monkeypatch):
    monkeypatch.setenv("D4DESIGN_SERIES_CAP", "1000")
    result = run("qseries", "tau2", "--bound", "10000000000")
    assert result.exit_code != 0 and "D4DESIGN_SERIES_CAP" in result.output


def test_table_mode():
    result = run("--table", "shell", "--m", "1")
    assert result.exit_code == 0
    assert "PASS" in result.output


def test_output_is_deterministic():
    def strip(out):
        doc = json.loads(out)
        doc.pop("elapsed_ms")
        return doc

    assert strip(run("decompose", "--m", "7").output) == strip(run("decompose", "--m", "7").output)


def test_verify_all_rejects_unknown_profile():
    assert run("verify-all", "--profile", "bogus").exit_code == 2


def test_failed_check_gives_nonzero_exit(monkeypatch):
    import d4design.cli as cli

    monkeypatch.setattr(cli, "jacobi_count", lambda m: -1)
    assert run("shell", "--m", "1").exit_code == 1


def test_verify_all_quick_profile():
    code, doc = report("--threads", "2", "verify-all", "--profile", "quick")
    assert code == 0
    numbers = {c["name"].split("]")[0].lstrip("[") for c in doc["checks"]}
    assert numbers == {str(n) for n in range(1, 11)}
