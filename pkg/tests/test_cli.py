import json
from fractions import Fraction

import pytest

from src.cli import main
from src.utils.constants import EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, NODE_BUDGET_ENV

FANO = ["-d", "7", "-t", "0,7,0,0,0,0"]


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    config = tmp_path / "config.ini"
    config.write_text("[DEFAULT]\nnode_budget = 1000000\nfields = 2,3\njobs = 1\nlog_level = WARNING\n")
    monkeypatch.setenv("HARB_CONFIG", str(config))
    monkeypatch.delenv(NODE_BUDGET_ENV, raising=False)


class TestEnumerate:
    def test_four_lines(self, capsys):
        assert main(["enumerate", "-d", "4", "--format", "csv"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "T,q,decimal"
        assert lines[1] == '"6,0,0",-4/3,-1.333333'
        assert len(lines) == 5

    def test_table_format(self, capsys):
        assert main(["enumerate", "-d", "4"]) == EXIT_OK
        assert "-4/3 (-1.333333)" in capsys.readouterr().out

    def test_ten_lines_below(self, capsys):
        assert main(["enumerate", "-d", "10", "--below=-34/15", "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["schema_version"] == 1
        assert data["below"] == "-34/15"
        records = {r["tvector"]: r["q"] for r in data["tvectors"]}
        assert records["0,9,3,0,0,0,0,0,0"] == "-29/12"

    def test_below_as_separate_token(self, capsys):
        assert main(["enumerate", "-d", "10", "--below", "-34/15", "--format", "csv"]) == EXIT_OK
        rows = capsys.readouterr().out.strip().splitlines()[1:]
        assert rows
        assert all(Fraction(row.rsplit(",", 2)[1]) <= Fraction(-34, 15) for row in rows)
        assert '"0,9,3,0,0,0,0,0,0",-29/12,-2.416667' in rows

    def test_two_lines(self, capsys):
        assert main(["enumerate", "-d", "2", "--format", "json"]) == EXIT_OK
        assert [r["q"] for r in json.loads(capsys.readouterr().out)["tvectors"]] == ["0"]

    @pytest.mark.parametrize("argv", [["-d", "1"], ["-d", "11"], ["-d", "4", "--below=abc"]])
    def test_usage_errors(self, argv):
        assert main(["enumerate", *argv]) == EXIT_USAGE


class TestFilter:
    def test_excluded(self, capsys):
        assert main(["filter", "-d", "5", "-t", "1,3,0,0"]) == EXIT_NEGATIVE
        assert "1,3,0,0: excluded by multiplicity_sum" in capsys.readouterr().out

    def test_passed(self):
        assert main(["filter", "-d", "9", "-t", "0,12,0,0,0,0,0,0"]) == EXIT_OK

    def test_complex_json(self, capsys):
        assert main(["filter", *FANO, "--mode", "complex", "--format", "json"]) == EXIT_NEGATIVE
        data = json.loads(capsys.readouterr().out)
        assert data["overall"]["criterion"] == "hirzebruch"
        assert len(data["verdicts"]) == 4


class TestFeasible:
    @pytest.mark.parametrize(
        "argv, code",
        [
            (["-d", "6", "-t", "0,5,0,0,0"], EXIT_NEGATIVE),
            (FANO, EXIT_OK),
            (["-d", "10", "-t", "0,1,7,0,0,0,0,0,0"], EXIT_NEGATIVE),
        ],
    )
    def test_exit_codes(self, argv, code):
        assert main(["feasible", *argv]) == code

    def test_imbalance_is_a_usage_error(self, capsys):
        assert main(["feasible", "-d", "5", "-t", "5,2,0,0"]) == EXIT_USAGE
        assert "imbalance +1" in capsys.readouterr().err

    def test_witness_file(self, tmp_path):
        out = tmp_path / "fano.json"
        assert main(["feasible", *FANO, "--out", str(out)]) == EXIT_OK
        data = json.loads(out.read_text())
        assert data["d"] == 7
        assert len(data["points"]) == 7

    def test_budget(self, capsys):
        assert main(["feasible", *FANO, "--budget", "1"]) == EXIT_INCONCLUSIVE
        assert "inconclusive" in capsys.readouterr().err

    def test_budget_from_environment(self, monkeypatch):
        monkeypatch.setenv(NODE_BUDGET_ENV, "1")
        assert main(["feasible", *FANO]) == EXIT_INCONCLUSIVE


class TestRealize:
    def test_fano_over_f2(self, capsys):
        assert main(["realize", *FANO, "--field", "f2"]) == EXIT_OK
        cert = json.loads(capsys.readouterr().out)
        assert cert["field"] == {"kind": "prime", "p": 2}
        assert len(cert["lines"]) == 7
        assert cert["claimed_tvector"] == "0,7,0,0,0,0"

    def test_fano_over_f3_is_exhausted(self, capsys):
        assert main(["realize", *FANO, "--field", "f3"]) == EXIT_NEGATIVE
        assert "exhausted" in capsys.readouterr().out

    def test_certificate_round_trip(self, tmp_path, capsys):
        out = tmp_path / "d9.json"
        assert main(["realize", "-d", "9", "-t", "0,12,0,0,0,0,0,0", "--field", "f3", "--out", str(out)]) == EXIT_OK
        capsys.readouterr()
        assert main(["verify", str(out)]) == EXIT_OK
        assert "-9/4 (-2.250000)" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "argv",
        [
            [*FANO, "--field", "q"],
            [*FANO, "--field", "f4"],
            [*FANO, "--field", "f17"],
            ["-d", "8", "-t", "28,0,0,0,0,0,0", "--field", "f2"],
        ],
    )
    def test_usage_errors(self, argv):
        assert main(["realize", *argv]) == EXIT_USAGE


class TestVerify:
    def test_builtin(self, capsys):
        assert main(["verify", "--builtin", "fano-f2"]) == EXIT_OK
        assert "-2 (-2.000000)" in capsys.readouterr().out

    def test_builtin_json(self, capsys):
        assert main(["verify", "--builtin", "dual-hesse-eisenstein", "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["ok"] is True
        assert data["report"]["h"] == "-9/4"
        assert data["report"]["field"] == "Q(w)"

    def test_export_then_verify(self, tmp_path, capsys):
        path = tmp_path / "plus-line.json"
        assert main(["verify", "--builtin", "dual-hesse-plus-line", "--export", str(path)]) == EXIT_OK
        capsys.readouterr()
        assert main(["verify", str(path)]) == EXIT_OK
        assert "-34/15" in capsys.readouterr().out

    def test_duplicate_line(self, tmp_path, capsys):
        path = tmp_path / "dup.json"
        path.write_text(
            json.dumps({"label": "dup", "field": {"kind": "rational"}, "lines": [["1", "0", "0"], ["2", "0", "0"], ["0", "1", "0"]]})
        )
        assert main(["verify", str(path)]) == EXIT_NEGATIVE
        assert "lines[1]" in capsys.readouterr().err

    @pytest.mark.parametrize("argv", [[], ["x.json", "--builtin", "fano-f2"], ["--builtin", "no-such-label"]])
    def test_usage_errors(self, argv):
        assert main(["verify", *argv]) == EXIT_USAGE


class TestTable:
    def test_five_lines(self, capsys):
        assert main(["table", "--max-d", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "quadrilateral-minus-line-5" in out
        assert "-3/2 (-1.500000)" in out

    def test_json(self, capsys):
        assert main(["table", "--max-d", "4", "--mode", "complex", "--format", "json", "--audit"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["schema_version"] == 1
        assert data["integrity_ok"] is True
        assert [r["value"] for r in data["rows"]] == ["0", "-1", "-4/3"]
        assert data["rows"][2]["audit"][0]["tvector"] == "6,0,0"

    def test_csv(self, capsys):
        assert main(["table", "--max-d", "3", "--format", "csv"]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[0] == "d,H,decimal,witness"

    def test_integrity_failure(self, capsys):
        assert main(["table", "--max-d", "4", "--budget", "1"]) == 4
        assert "integrity failure: d=4 T=6,0,0" in capsys.readouterr().err

    def test_bad_max_d(self):
        assert main(["table", "--max-d", "11"]) == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [[], ["-v", "-q", "enumerate", "-d", "3"], ["feasible", *FANO, "--jobs", "0"], ["table", "--fields", "4"]],
)
def test_bad_invocations(argv):
    assert main(argv) == EXIT_USAGE
