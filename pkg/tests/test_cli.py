import csv
import io
import json
import math

import pytest

from mixwidth.cli import main

WORKED = {
    "m": 4,
    "k": 4,
    "n": 4,
    "q": "2",
    "sigma": "2",
    "balls": [
        {"p": "inf", "theta": "2", "nu": 1.0},
        {"p": "1", "theta": "2", "nu": 4.0},
    ],
}


@pytest.fixture
def worked_file(tmp_path):
    path = tmp_path / "instance.json"
    path.write_text(json.dumps(WORKED))
    return str(path)


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEstimate:
    def test_json_report(self, worked_file, capsys):
        code, out, _ = run_cli(capsys, worked_file, "--mode", "estimate", "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["schema"] == "mixwidth-report/1"
        assert report["psi"] == pytest.approx(2.0, rel=1e-12)
        assert report["argmin"] == [0, 1, 3]
        assert report["components"][2] == "inf"
        cert = report["certificates"]["1"]
        assert cert["weights"] == ["1/2", "1/2"]
        assert cert["theta"] == "2"
        assert not report["n_zero_convention"]

    def test_table_output(self, worked_file, capsys):
        code, out, _ = run_cli(capsys, worked_file)
        assert code == 0
        assert "psi = 2.0" in out
        assert "argmin = {0, 1, 3}" in out

    def test_malformed_exponent_names_field(self, tmp_path, capsys):
        bad = dict(WORKED, balls=[{"p": "2x", "theta": "2", "nu": 1.0}])
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        code, _, err = run_cli(capsys, str(path))
        assert code != 0
        assert "balls[0].p" in err

    def test_invalid_json_reports_line(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"m": 4,\n "k": }')
        code, _, err = run_cli(capsys, str(path))
        assert code != 0
        assert "line 2" in err

    def test_instance_validation_error(self, tmp_path, capsys):
        bad = dict(WORKED, n=16)
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        code, _, err = run_cli(capsys, str(path))
        assert code != 0
        assert "exceeds" in err

    def test_missing_instance(self, capsys):
        code, _, err = run_cli(capsys, "--mode", "estimate")
        assert code != 0 and "requires an instance file" in err

    def test_n_zero_flagged(self, tmp_path, capsys):
        data = dict(WORKED, n=0)
        path = tmp_path / "n0.json"
        path.write_text(json.dumps(data))
        code, out, _ = run_cli(capsys, str(path), "--format", "json")
        assert code == 0
        assert json.loads(out)["n_zero_convention"] is True

    def test_single_ball_report_shape(self, tmp_path, capsys):
        data = dict(WORKED, balls=[{"p": "3", "theta": "5/2", "nu": 2.0}])
        path = tmp_path / "single.json"
        path.write_text(json.dumps(data))
        code, out, _ = run_cli(capsys, str(path), "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["argmin"] == [0]
        assert math.isfinite(report["components"][0])
        assert report["components"][1:] == ["inf"] * 7

    def test_deterministic_output(self, worked_file, capsys):
        _, out1, _ = run_cli(capsys, worked_file, "--format", "json")
        _, out2, _ = run_cli(capsys, worked_file, "--format", "json")
        assert out1 == out2

    def test_numeric_exponents_accepted_exactly(self, tmp_path, capsys):
        data = dict(WORKED, q=2, sigma=2.5, n=1,
                    balls=[{"p": 3, "theta": "2", "nu": 1}])
        path = tmp_path / "numeric.json"
        path.write_text(json.dumps(data))
        code, out, _ = run_cli(capsys, str(path), "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["instance"]["sigma"] == "5/2"  # decimal parsed exactly
        assert report["instance"]["balls"][0]["p"] == "3"


class TestSweep:
    def test_csv_round_trip_and_monotone(self, worked_file, capsys):
        code, out, _ = run_cli(
            capsys, worked_file, "--mode", "sweep", "--format", "csv"
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [int(r["n"]) for r in rows] == list(range(0, 9))
        psis = [float(r["psi"]) for r in rows]
        for a, b in zip(psis, psis[1:]):
            assert b <= a * (1 + 1e-12)
        # round trip: parse back exactly
        from mixwidth import psi as psi_fn
        from mixwidth.cli import load_instance
        from mixwidth.psi import Instance
        from mixwidth.phi import Dimensions

        inst = load_instance(worked_file)
        for row in rows:
            n = int(row["n"])
            est = psi_fn(Instance(Dimensions(4, 4, n), inst.target, inst.balls))
            assert float(row["psi"]) == est.value  # repr round-trips floats
            for j in range(8):
                cell = row[f"psi_{j}"]
                if cell == "inf":
                    assert math.isinf(est.components[j])
                else:
                    assert float(cell) == est.components[j]

    def test_empty_range_header_only(self, worked_file, capsys):
        code, out, _ = run_cli(
            capsys, worked_file, "--mode", "sweep", "--n-from", "3", "--n-to", "3",
            "--format", "csv",
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1 and rows[0]["n"] == "3"

    def test_range_validation(self, worked_file, capsys):
        code, _, err = run_cli(capsys, worked_file, "--mode", "sweep", "--n-to", "9")
        assert code != 0 and "sweep range" in err

    def test_argmin_set_format(self, worked_file, capsys):
        code, out, _ = run_cli(
            capsys, worked_file, "--mode", "sweep", "--n-from", "4", "--n-to", "4",
            "--format", "csv",
        )
        rows = list(csv.DictReader(io.StringIO(out)))
        assert rows[0]["argmin_set"] == "0|1|3"


class TestVerifyMode:
    def test_passes_with_small_trials(self, capsys):
        code, out, _ = run_cli(capsys, "--mode", "verify", "--trials", "10")
        assert code == 0
        assert "PASS" in out

    def test_corruption_fails(self, capsys):
        code, out, _ = run_cli(
            capsys, "--mode", "verify", "--trials", "10",
            "--self-test-corrupt", "phi-branch-overlap",
        )
        assert code != 0
        assert "FAIL" in out

    def test_deterministic(self, capsys):
        _, out1, _ = run_cli(capsys, "--mode", "verify", "--trials", "10", "--seed", "2")
        _, out2, _ = run_cli(capsys, "--mode", "verify", "--trials", "10", "--seed", "2")
        assert out1 == out2

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "--mode", "verify", "--trials", "5", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert all(s["passed"] for s in payload["suites"])


class TestWitnessMode:
    def test_report(self, worked_file, capsys):
        code, out, _ = run_cli(capsys, worked_file, "--mode", "witness", "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["psi"] == pytest.approx(2.0)
        assert 0 < report["witness_lb"] <= report["psi"] * 4
        assert 1 <= report["r"] <= 4 and 1 <= report["l"] <= 4
