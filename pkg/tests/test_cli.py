import csv
import json

import pytest

from perspec.cli import main, parse_p
from perspec.suite import REGISTRY


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParseP:
    def test_forms(self):
        assert parse_p("1.5") == (1.5,)
        assert parse_p("0.5,1,2") == (0.5, 1.0, 2.0)
        assert parse_p("0.25:1:0.25") == (0.25, 0.5, 0.75, 1.0)

    @pytest.mark.parametrize("text", ["x", "1:0:0.1", "0.1:1:0", "-1", "0:1:0.5"])
    def test_rejects(self, text, capsys):
        code, _, err = _run(capsys, "run", "--check", "PROP35", "--p", text)
        assert code == 2 and "--p" in err


class TestList:
    def test_every_id_once(self, capsys):
        code, out, _ = _run(capsys, "list")
        assert code == 0
        ids = [line for line in out.splitlines() if line and not line.startswith(" ")]
        assert sorted(ids) == sorted(REGISTRY)


class TestRun:
    def test_single_check_is_reproducible(self, capsys, tmp_path):
        r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
        code, out, _ = _run(capsys, "run", "--check", "PROP46", "--fn", "pow(0.5)", "--trials", "20",
                            "--report", str(r1))
        assert code == 0 and "PASS" in out
        _run(capsys, "run", "--check", "PROP46", "--fn", "pow(0.5)", "--trials", "20", "--report", str(r2))
        assert r1.read_bytes() == r2.read_bytes()
        doc = json.loads(r1.read_text())
        assert set(doc) == {"meta", "outcomes"}
        assert {"seed", "tolerances", "version"} <= set(doc["meta"])
        assert doc["outcomes"][0]["checkId"] == "PROP46"

    def test_failing_check_exits_one_with_witness(self, capsys, tmp_path):
        rep = tmp_path / "f.json"
        code, out, _ = _run(capsys, "run", "--check", "AH-NORM", "--fn", "pow(-0.5)", "--p", "1.5",
                            "--trials", "30", "--report", str(rep))
        assert code == 1 and "FAIL" in out
        w = json.loads(rep.read_text())["outcomes"][0]["witness"]
        assert w["check"] == "AH-NORM" and w["violation"] > w["tolerance"]

        code, out, _ = _run(capsys, "replay", str(rep))
        assert code == 0
        assert "lhs" in out and "rhs" in out and "reproduced" in out

    def test_stdout_is_summary_only(self, capsys, tmp_path):
        code, out, _ = _run(capsys, "run", "--suite", "lie-trotter", "--trials", "3",
                            "--report", str(tmp_path / "r.json"), "--csv", str(tmp_path / "r.csv"))
        assert code == 0
        assert "{" not in out
        assert out.strip().splitlines()[-1].startswith("pass=")
        rows = list(csv.reader((tmp_path / "r.csv").open()))
        assert rows[0] == ["checkId", "status", "maxRelViolation"]
        assert {r[0] for r in rows[1:]} == set(REGISTRY)

    def test_unknown_check_is_usage_error(self, capsys):
        code, _, err = _run(capsys, "run", "--check", "NOPE")
        assert code == 2 and "NOPE" in err

    def test_bad_suite_name(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--suite", "bogus"])
        assert exc.value.code == 2

    def test_bad_trials(self, capsys):
        code, _, _ = _run(capsys, "run", "--check", "PROP35", "--trials", "0")
        assert code == 2

    def test_plots(self, capsys, tmp_path):
        d = tmp_path / "plots"
        code, _, _ = _run(capsys, "run", "--check", "PROP313-22", "--trials", "3", "--plot-dir", str(d))
        assert code == 0
        assert (d / "PROP313-22.svg").read_text().lstrip().startswith("<?xml")

    def test_threads_env(self, capsys, tmp_path, monkeypatch):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        monkeypatch.setenv("PERSPEC_THREADS", "1")
        _run(capsys, "run", "--check", "COR314", "--trials", "4", "--report", str(a))
        monkeypatch.setenv("PERSPEC_THREADS", "3")
        _run(capsys, "run", "--check", "COR314", "--trials", "4", "--report", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestReplay:
    def test_malformed_witness(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"check": "AH-NORM", "case": {"fn": "pow(0.5)", "p": 2}, "inputs": {"A": "x"}}))
        code, _, err = _run(capsys, "replay", str(bad))
        assert code == 2 and "malformed" in err

    def test_not_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        code, _, _ = _run(capsys, "replay", str(bad))
        assert code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = _run(capsys, "replay", str(tmp_path / "none.json"))
        assert code == 2


class TestScan:
    def test_power_three_region(self, capsys, tmp_path):
        d = tmp_path / "plots"
        rep = tmp_path / "scan.json"
        code, out, _ = _run(capsys, "scan", "--fn", "pow(3)", "--p", "0.05:1.5:0.05", "--trials", "30",
                            "--plot-dir", str(d), "--report", str(rep))
        assert code == 0
        region = json.loads(rep.read_text())["region"]
        lo, hi = region["interval"]
        assert lo <= 0.05 and hi >= 0.75
        svg = d / "scan-pow_3_.svg"
        first = svg.read_bytes()
        _run(capsys, "scan", "--fn", "pow(3)", "--p", "0.05:1.5:0.05", "--trials", "30", "--plot-dir", str(d))
        assert svg.read_bytes() == first

    def test_needs_fn(self, capsys):
        code, _, err = _run(capsys, "scan", "--p", "1")
        assert code == 2 and "--fn" in err
