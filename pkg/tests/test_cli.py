import json
import os

import pytest

from choquard_hardy import cli


@pytest.fixture
def params_file(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return write


EXISTS = {"N": 3, "m": 2, "p": 3, "q": 3, "alpha": 2, "mu": 0}
NOT_EXISTS = {"N": 3, "m": 2, "p": 3, "q": 3, "alpha": 2, "mu": 0.3}
BOUNDARY = {"N": 3, "m": 2, "p": 3, "q": 2 + 5e-10, "alpha": 2, "mu": 0}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestClassifyCommand:
    def test_exists_exit_zero(self, params_file, capsys):
        code, out, _ = run(["classify", "--params", params_file("p.json", EXISTS)], capsys)
        assert code == 0
        assert json.loads(out)["outcome"] == "exists"

    def test_not_exists_exit_three(self, params_file, capsys):
        code, out, _ = run(["classify", "--params", params_file("p.json", NOT_EXISTS)], capsys)
        assert code == 3
        payload = json.loads(out)
        assert payload["outcome"] == "not_exists"
        assert payload["witnesses"][0]["result"] == "mu-above-hardy-constant"

    def test_boundary_exit_four(self, params_file, capsys):
        code, out, _ = run(["classify", "--params", params_file("p.json", BOUNDARY)], capsys)
        assert code == 4

    def test_missing_file_exit_one(self, capsys):
        code, _, err = run(["classify", "--params", "/nonexistent/params.json"], capsys)
        assert code == 1
        assert "/nonexistent/params.json" in err

    def test_invalid_params_exit_one(self, params_file, capsys):
        bad = dict(EXISTS, m=1)
        code, _, err = run(["classify", "--params", params_file("p.json", bad)], capsys)
        assert code == 1
        assert "m" in err


class TestBetaCommand:
    def test_output_fields(self, params_file, capsys):
        code, out, _ = run(["beta", "--params", params_file("p.json", EXISTS)], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["beta_minus"] == pytest.approx(-1.0)
        assert payload["beta_plus"] == pytest.approx(0.0)
        assert payload["beta_star"] == pytest.approx(-0.5)
        assert payload["degenerate"] is False
        assert payload["residuals"]["minus"] <= 1e-9


class TestRieszCommand:
    def test_interval_rows(self, params_file, capsys, tmp_path):
        profile = {"variant": "power", "kappa": 1.0, "gamma": -0.9}
        code, out, _ = run(
            [
                "riesz",
                "--params",
                params_file("p.json", EXISTS),
                "--profile",
                params_file("prof.json", profile),
                "--radii",
                "5,20",
            ],
            capsys,
        )
        assert code == 0
        rows = json.loads(out)
        assert [row["r"] for row in rows] == [5.0, 20.0]
        assert all(0 < row["lower"] <= row["upper"] for row in rows)

    def test_divergent_marker(self, params_file, capsys):
        profile = {"variant": "power", "kappa": 1.0, "gamma": -0.5}
        code, out, _ = run(
            [
                "riesz",
                "--params",
                params_file("p.json", EXISTS),
                "--profile",
                params_file("prof.json", profile),
                "--radii",
                "4",
            ],
            capsys,
        )
        assert code == 0
        assert json.loads(out) == [{"r": 4.0, "divergent": True}]


class TestCertifyVerifyRoundTrip:
    def test_round_trip_bit_identical(self, params_file, capsys, tmp_path):
        pfile = params_file("p.json", EXISTS)
        cert_path = str(tmp_path / "cert.json")
        code = cli.main(["--out", cert_path, "certify", "--params", pfile])
        assert code == 0
        first = open(cert_path).read()
        verify_path = str(tmp_path / "verify.json")
        code = cli.main(
            ["--out", verify_path, "verify", "--params", pfile, "--certificate", cert_path]
        )
        assert code == 0
        second = open(verify_path).read()
        assert json.loads(first)["report"] == json.loads(second)["report"]
        assert first == second

    def test_certify_not_exists(self, params_file, capsys):
        code, out, _ = run(["certify", "--params", params_file("p.json", NOT_EXISTS)], capsys)
        assert code == 3
        assert json.loads(out)["outcome"] == "not_exists"

    def test_verify_rejects_tampering(self, params_file, capsys, tmp_path):
        pfile = params_file("p.json", EXISTS)
        cert_path = str(tmp_path / "cert.json")
        assert cli.main(["--out", cert_path, "certify", "--params", pfile]) == 0
        payload = json.loads(open(cert_path).read())
        payload["certificate"]["profile"]["kappa"] *= 1e6
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(payload))
        code, out, _ = run(
            ["verify", "--params", pfile, "--certificate", str(tampered)], capsys
        )
        assert code == 3
        assert json.loads(out)["report"]["passed"] is False


class TestRegionCommand:
    def test_csv_shape_and_order(self, params_file, capsys):
        code, out, _ = run(
            [
                "region",
                "--params",
                params_file("p.json", EXISTS),
                "--p-min",
                "1",
                "--p-max",
                "3",
                "--q-min",
                "1",
                "--q-max",
                "3",
                "--steps",
                "2",
            ],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "p,q,outcome,witness"
        assert len(lines) == 5  # 2x2 grid
        # row-major with p fastest
        first_two = [line.split(",")[:2] for line in lines[1:3]]
        assert first_two == [["1.0", "1.0"], ["3.0", "1.0"]]

    def test_deterministic_across_threads(self, params_file, tmp_path):
        pfile = params_file("p.json", EXISTS)
        outputs = []
        for threads in ("1", "4"):
            path = str(tmp_path / f"scan{threads}.csv")
            code = cli.main(
                [
                    "--out",
                    path,
                    "--threads",
                    threads,
                    "region",
                    "--params",
                    pfile,
                    "--p-min",
                    "0.5",
                    "--p-max",
                    "4",
                    "--q-min",
                    "0.5",
                    "--q-max",
                    "4",
                    "--steps",
                    "21",
                ]
            )
            assert code == 0
            outputs.append(open(path, "rb").read())
        assert outputs[0] == outputs[1]

    def test_region_json_format(self, params_file, capsys):
        code, out, _ = run(
            [
                "region",
                "--params",
                params_file("p.json", EXISTS),
                "--p-min",
                "1",
                "--p-max",
                "3",
                "--q-min",
                "1",
                "--q-max",
                "3",
                "--steps",
                "2",
                "--format",
                "json",
            ],
            capsys,
        )
        assert code == 0
        rows = json.loads(out)
        assert len(rows) == 4
        assert {"p", "q", "outcome", "witness"} <= set(rows[0])

    def test_invalid_spec(self, params_file, capsys):
        code, _, err = run(
            [
                "region",
                "--params",
                params_file("p.json", EXISTS),
                "--p-min",
                "3",
                "--p-max",
                "1",
                "--q-min",
                "1",
                "--q-max",
                "3",
                "--steps",
                "2",
            ],
            capsys,
        )
        assert code == 1


class TestConfig:
    def test_env_override(self, params_file, capsys, monkeypatch):
        monkeypatch.setenv("CHQ_BOUNDARY_BAND", "0.5")
        # with a huge band, q = 2.3 is within the band of the threshold 2
        code, _, _ = run(
            ["classify", "--params", params_file("p.json", dict(EXISTS, q=2.3))], capsys
        )
        assert code == 4

    def test_config_file(self, params_file, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"boundary_band": 0.5}))
        code, _, _ = run(
            [
                "--config",
                str(cfg),
                "classify",
                "--params",
                params_file("p.json", dict(EXISTS, q=2.3)),
            ],
            capsys,
        )
        assert code == 4

    def test_flag_beats_config(self, params_file, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"threads": 7}))
        loaded = cli.load_config(str(cfg), None)
        assert loaded.threads == 7

    def test_bad_config_exit_one(self, params_file, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        code, _, err = run(
            ["--config", str(cfg), "classify", "--params", params_file("p.json", EXISTS)], capsys
        )
        assert code == 1


class TestSelftestCommand:
    def test_single_suite(self, capsys):
        code, out, _ = run(["selftest", "--suite", "root_solver"], capsys)
        assert code == 0
        assert out.startswith("PASS root_solver")

    def test_unknown_suite(self, capsys):
        code, _, err = run(["selftest", "--suite", "bogus"], capsys)
        assert code == 1
