import json

import pytest

from vortexrings import __version__
from vortexrings.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_stdout_json(self, capsys):
        code, out, _ = run(capsys, "gen", "--n", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc["tool"] == "vortexrings"
        assert doc["tool_version"] == __version__
        assert doc["P"] == ["-8", "21/2", "-5", "1"]

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "gen.json"
        code, out, _ = run(capsys, "gen", "--n", "2", "--out", str(target))
        assert code == 0 and out == ""
        doc = json.loads(target.read_text())
        assert doc["P"] == ["2", "-2", "1"]

    def test_reruns_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "gen", "--n", "4", "--route", "both", "--out", str(a))
        run(capsys, "gen", "--n", "4", "--route", "both", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_input_error_exit_code(self, capsys):
        code, _, err = run(capsys, "gen", "--n", "99")
        assert code == 3
        assert "input error" in err


class TestCertify:
    def pair_file(self, tmp_path, capsys, n=1):
        path = tmp_path / "pair.json"
        run(capsys, "pair", "--n", str(n), "--out", str(path))
        return path

    def test_valid_pair(self, tmp_path, capsys):
        path = self.pair_file(tmp_path, capsys)
        code, out, _ = run(capsys, "certify", str(path))
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert doc["preset"] == "pq-roots"
        assert set(doc["tolerances"]) == {"root_tol", "residual_tol", "kernel_tol"}

    def test_failing_pair_exit_two(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "m": 4, "n": 1, "P": ["0", "0", "0", "4", "1"], "Q": ["0", "1"]}))
        code, out, err = run(capsys, "certify", str(path))
        assert code == 2
        assert "square_free_P" in err
        assert json.loads(out)["passed"] is False

    def test_missing_file_exit_three(self, capsys):
        code, _, err = run(capsys, "certify", "/no/such/file.json")
        assert code == 3

    def test_preset_recorded(self, tmp_path, capsys):
        path = self.pair_file(tmp_path, capsys)
        code, out, _ = run(capsys, "certify", str(path), "--preset", "paper-balance")
        assert code == 2  # roots balance the halved rhs, not this one
        assert json.loads(out)["preset"] == "paper-balance"


class TestSearch:
    def test_artifact_embeds_parameters(self, tmp_path, capsys):
        target = tmp_path / "search.json"
        code, _, _ = run(capsys, "search", "--m", "2", "--n", "1",
                         "--tries", "25", "--seed", "9", "--out", str(target))
        assert code == 0
        doc = json.loads(target.read_text())
        assert doc["seed"] == 9 and doc["tries"] == 25
        assert doc["preset"] == "pq-roots"
        assert len(doc["classes"]) == 1


class TestPotential:
    def test_csv(self, tmp_path, capsys):
        target = tmp_path / "grid.csv"
        code, _, _ = run(capsys, "potential", "--a", "2", "0",
                         "--x1", "1", "3", "3", "--x2", "-1", "1", "3",
                         "--out", str(target))
        assert code == 0
        lines = target.read_text().splitlines()
        assert lines[0] == "x1,x2,A"
        assert len(lines) == 9  # header + 8 rows (center skipped)
        # floats are written with .17g
        val = lines[1].split(",")[2]
        assert float(val) == pytest.approx(float(format(float(val), ".17g")))

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "potential", "--a", "2", "0",
                           "--x1", "1", "2", "2", "--x2", "1", "1", "1",
                           "--format", "json")
        assert code == 0
        assert "scaling_check_error" in json.loads(out)


class TestReduced:
    def test_decay_table(self, capsys):
        code, out, _ = run(capsys, "reduced", "--m", "2", "--n", "1",
                           "--eps", "1e-3,1e-5,1e-8")
        assert code == 0
        doc = json.loads(out)
        r1 = [e["row_norm1"] for e in doc["entries"]]
        assert r1[0] > r1[1] > r1[2]

    def test_bad_counts(self, capsys):
        code, _, err = run(capsys, "reduced", "--m", "3", "--n", "1",
                           "--eps", "1e-3")
        assert code == 3
