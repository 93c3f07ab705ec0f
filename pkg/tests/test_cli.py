import json
import subprocess
import sys

import pytest

from qseries_lab.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run_captured
from qseries_lab.report import reports_from_json

REG4 = "poch(q^4;q^4;inf)/poch(q;q;inf)"
PED = "poch(-q^2;q^2;inf)/poch(q;q^2;inf)"


def last_row(text):
    return text.strip().splitlines()[-1].split()


class TestExpand:
    def test_registry(self):
        code, out = run_captured(["expand", "DE3", "--order", "7"])
        assert code == EXIT_OK
        assert last_row(out) == ["7", "5"]

    def test_expression(self):
        code, out = run_captured(["expand", REG4, "--order", "5"])
        assert last_row(out) == ["5", "6"]

    def test_order_zero(self):
        assert run_captured(["expand", "dee", "--order", "0"])[1] == "0 1\n"

    def test_json(self):
        code, out = run_captured(["expand", "ped", "--order", "5", "--format", "json"])
        assert json.loads(out) == {"order": 5, "coeffs": ["1", "1", "2", "3", "4", "6"]}

    def test_csv(self):
        out = run_captured(["expand", "reg4", "--order", "2", "--format", "csv"])[1]
        assert out == "n,coeff\n0,1\n1,1\n2,2\n"

    @pytest.mark.parametrize("target", ["q^(2*", "nonsense", "degeq:0"])
    def test_errors(self, target, capsys):
        code, _ = run_captured(["expand", target])
        assert code == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_parse_error_position(self, capsys):
        run_captured(["expand", "q^(2*"])
        assert "column 5" in capsys.readouterr().err


class TestOracle:
    def test_count(self):
        assert run_captured(["oracle", "deExact:2", "10"]) == (EXIT_OK, "3\n")

    def test_reg4_zero(self):
        assert run_captured(["oracle", "reg:4", "0"])[1] == "1\n"

    def test_list(self):
        code, out = run_captured(["oracle", "deeAny", "6", "--list"])
        lines = out.splitlines()
        assert lines[0] == "6"
        assert set(lines[1:]) == {"6", "4+2", "4+1+1", "2+2+2", "2+2+1+1", "2+1+1+1+1"}

    def test_list_dee(self):
        lines = run_captured(["oracle", "dee", "6", "--list"])[1].splitlines()
        assert lines[0] == "5"
        assert "2+2+2" not in lines

    def test_json_cubic(self):
        data = json.loads(run_captured(["oracle", "cubic", "2", "--list", "--format", "json"])[1])
        assert data["count"] == 3
        assert [[2], []] in data["partitions"] and [[], [2]] in data["partitions"]

    def test_bad_constraint(self):
        assert run_captured(["oracle", "bogus", "3"])[0] == EXIT_USAGE

    def test_negative_n(self):
        assert run_captured(["oracle", "ped", "-1"])[0] == EXIT_USAGE


class TestVerify:
    def test_passing_check(self):
        code, out = run_captured(["verify", "dee1-alternating", "--order", "50"])
        assert code == EXIT_OK
        assert out.startswith("PASS")

    def test_failing_check(self):
        code, out = run_captured(["verify", "dee-alternating", "--order", "50"])
        assert code == EXIT_FAIL
        assert "first failure at 3: expected 2, got 1" in out

    def test_single_id_in_group(self):
        code, out = run_captured(["verify", "geq-k-identity[k=3]", "--order", "40", "--format", "json"])
        reports = reports_from_json(out)
        assert code == EXIT_OK
        assert [r.check_id for r in reports] == ["geq-k-identity[k=3]"]

    @pytest.mark.parametrize("target", ["bogus", "geq-k-identity[k=9]"])
    def test_unknown(self, target):
        assert run_captured(["verify", target, "--order", "30"])[0] == EXIT_USAGE

    def test_oracle_cap(self, capsys):
        assert run_captured(["verify", "oracles", "--oracle-limit", "61"])[0] == EXIT_USAGE
        assert "--allow-large-oracle" in capsys.readouterr().err

    def test_json_deterministic(self):
        argv = ["verify", "mod2-square", "--order", "60", "--format", "json"]
        first, second = run_captured(argv)[1], run_captured(argv)[1]
        assert first == second
        assert all(r["runtime_ms"] == 0 for r in json.loads(first))

    def test_timings_kept(self):
        out = run_captured(["verify", "classical", "--order", "30", "--format", "json", "--timings"])[1]
        assert any(r["runtime_ms"] > 0 for r in json.loads(out))

    def test_csv(self):
        out = run_captured(["verify", "exact2-recurrence", "--order", "30", "--format", "csv"])[1]
        header, row = out.strip().splitlines()
        assert header.startswith("verdict,check_id")
        assert row.startswith("FAIL,exact2-recurrence,30,12..30,12,18,1")

    def test_all_small(self):
        code, out = run_captured(["verify", "all", "--order", "16", "--kmax", "1", "--oracle-limit", "10"])
        assert code == EXIT_FAIL
        assert out.strip().endswith("passed")

    def test_all_needs_order(self):
        assert run_captured(["verify", "all", "--order", "10"])[0] == EXIT_USAGE


class TestIdentity:
    def test_ped_reg4(self):
        code, out = run_captured(["identity", PED, REG4, "--order", "100"])
        assert code == EXIT_OK

    def test_mismatch(self):
        code, out = run_captured(["identity", "q", "q^2", "--order", "5"])
        assert code == EXIT_FAIL
        assert "first failure at 1" in out

    def test_syntax_error(self, capsys):
        assert run_captured(["identity", "q", "q +", "--order", "5"])[0] == EXIT_USAGE
        assert "rhs" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qseries_lab", "oracle", "ped", "5"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout == "6\n"


def test_missing_command():
    assert run_captured([])[0] == EXIT_USAGE
