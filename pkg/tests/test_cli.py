import json
import subprocess
import sys

import pytest

from weirdhunt.cli import main
from weirdhunt.search import Checkpoint


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerify:
    def test_70(self, capsys):
        code, out, _ = run(capsys, "verify", "70")
        assert code == 0 and "abundance = 4" in out and "weird: yes" in out

    def test_table2_row1(self, capsys):
        code, out, _ = run(capsys, "verify", "2^2*11*37*59*523*881")
        assert code == 0 and "abundance = 8" in out and "44257207676" in out

    def test_12(self, capsys):
        code, out, _ = run(capsys, "verify", "12")
        assert code == 1 and "weird: no; 4 = 1 + 3" in out and "12 = 2 + 4 + 6" in out

    def test_deficient_and_perfect(self, capsys):
        assert run(capsys, "verify", "7")[0] == 1
        assert run(capsys, "verify", "28")[0] == 1

    def test_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--json", "836")
        doc = json.loads(out)
        assert code == 0 and doc["weird"] and doc["delta"] == "8" and doc["mode"] == "oracle"

    def test_not_primitive(self, capsys):
        code, out, _ = run(capsys, "verify", str(70 * 149))
        assert code == 0 and "not_primitive" in out

    @pytest.mark.parametrize("bad", ["x", "2^", "0"])
    def test_parse_error(self, capsys, bad):
        code, _, err = run(capsys, "verify", bad)
        assert code == 2 and "cannot parse" in err

    def test_target_cap(self, capsys):
        code, _, err = run(capsys, "verify", "--target-cap", "3", "70")
        assert code == 2 and "subset-sum" in err


class TestHunt:
    def test_table_row1(self, capsys):
        code, out, err = run(capsys, "hunt", "--m", "2^4", "--k", "4", "--mode", "t1", "--window", "80:600")
        vals = [json.loads(line)["value"] for line in out.splitlines()]
        assert code == 0 and "9210347984" in vals and "examined" in err

    def test_t2_last_row(self, capsys):
        code, out, _ = run(capsys, "hunt", "--m", "2^7*257", "--k", "3", "--mode", "t2", "--window", "97213:100957")
        deltas = [json.loads(line)["delta"] for line in out.splitlines()]
        assert code == 0 and "287264" in deltas

    def test_k1(self, capsys):
        assert run(capsys, "hunt", "--m", "2^4", "--k", "1", "--mode", "t1")[0] == 2

    def test_no_hits(self, capsys):
        assert run(capsys, "hunt", "--m", "2^4", "--k", "4", "--window", "2:30")[0] == 1

    def test_bad_m(self, capsys):
        assert run(capsys, "hunt", "--m", "12", "--k", "3")[0] == 2

    def test_files_and_resume(self, capsys, tmp_path):
        out, cp, table = tmp_path / "h.jsonl", tmp_path / "cp.json", tmp_path / "h.csv"
        base = ["hunt", "--m", "4", "--k", "3", "--window", "9:600", "--out", str(out), "--checkpoint", str(cp)]
        code, _, err = run(capsys, *base, "--max-tuples", "1", "--csv", str(table))
        assert code == 0 and "--resume" in err
        assert Checkpoint.load(cp).frontier is not None
        while "--resume" in err:
            code, _, err = run(capsys, *base, "--max-tuples", "1", "--resume")
        lines = out.read_text().splitlines()
        assert len(lines) == len(set(lines)) == 4
        assert table.read_text().startswith("value,factorization,m,delta")

    def test_resume_needs_checkpoint(self, capsys):
        assert run(capsys, "hunt", "--m", "4", "--k", "3", "--resume")[0] == 2

    def test_resume_missing_file(self, capsys, tmp_path):
        code = run(capsys, "hunt", "--m", "4", "--k", "3", "--resume", "--checkpoint", str(tmp_path / "no"))[0]
        assert code == 2

    def test_resume_mismatch(self, capsys, tmp_path):
        cp = tmp_path / "cp.json"
        run(capsys, "hunt", "--m", "4", "--k", "3", "--window", "9:100", "--checkpoint", str(cp))
        code, _, err = run(capsys, "hunt", "--m", "8", "--k", "3", "--window", "9:100", "--checkpoint", str(cp), "--resume")
        assert code == 2 and "different job" in err


class TestWindow:
    def test_16_4(self, capsys):
        code, out, _ = run(capsys, "window", "--m", "2^4", "--k", "4")
        assert code == 0 and "center: 251/2 = 125.5" in out and "abundant_threshold: 125" in out

    def test_136_3(self, capsys):
        code, out, _ = run(capsys, "window", "--m", "136", "--k", "3")
        assert code == 0 and "center: 406" in out

    def test_perfect(self, capsys):
        code, _, err = run(capsys, "window", "--m", "6", "--k", "3")
        assert code == 2 and "perfect" in err


class TestReproduce:
    def test_table1(self, capsys, tmp_path):
        code, out, _ = run(capsys, "reproduce", "1", "--csv", str(tmp_path / "t.csv"))
        assert code == 0 and "12/12 rows pass" in out
        assert "PASS 9772585048" in out and "delta=304" in out
        assert len((tmp_path / "t.csv").read_text().splitlines()) == 13

    def test_table2(self, capsys):
        code, out, _ = run(capsys, "reproduce", "2")
        assert code == 0 and "9/9 rows pass" in out and "PASS 5976833582079328" in out

    def test_small(self, capsys):
        code, out, _ = run(capsys, "reproduce", "small")
        assert code == 0 and "found 7" in out


def test_seeds(capsys):
    code, out, _ = run(capsys, "seeds")
    assert code == 0 and "815634435" in out and "odd" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "weirdhunt", "verify", "70"], capture_output=True, text=True)
    assert proc.returncode == 0 and "weird: yes" in proc.stdout


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "weirdhunt", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
