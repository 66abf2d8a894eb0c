import json

import pytest

from symflow.cli import load_config, main
from symflow.errors import ConfigurationError
from symflow.report import Check, Report, emit_report


def write_config(tmp_path, payload, name="config.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return p


class TestLoadConfig:
    def test_minimal_config_gets_defaults(self, tmp_path):
        p = write_config(tmp_path, {"command": "verify-symmetries", "H": 1})
        cfg = load_config(p)
        assert cfg.command == "verify-symmetries"
        assert cfg.H == 1.0
        assert cfg.tolerances["defect"] == 1e-7
        assert cfg.h_values == [1.0]
        assert cfg.grid["nx"] == 200

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "nope.json")

    def test_unknown_catalog_id_named_in_error(self, tmp_path):
        p = write_config(tmp_path, {"command": "invert",
                                    "catalog": ["pair-c2", "bogus-id"]})
        with pytest.raises(ConfigurationError, match="bogus-id"):
            load_config(p)

    def test_negative_tolerance_rejected_with_path(self, tmp_path):
        p = write_config(tmp_path, {"command": "audit",
                                    "tolerances": {"defect": -1e-7}})
        with pytest.raises(ConfigurationError, match="tolerances.defect"):
            load_config(p)

    def test_unknown_key_rejected(self, tmp_path):
        p = write_config(tmp_path, {"command": "audit", "telemetry": True})
        with pytest.raises(ConfigurationError, match="telemetry"):
            load_config(p)

    def test_unknown_command_rejected(self, tmp_path):
        p = write_config(tmp_path, {"command": "frobnicate"})
        with pytest.raises(ConfigurationError, match="command"):
            load_config(p)

    def test_bad_grid_rejected(self, tmp_path):
        p = write_config(tmp_path, {"command": "simulate",
                                    "grid": {"cfl": 2.0}})
        with pytest.raises(ConfigurationError, match="grid.cfl"):
            load_config(p)


class TestReportEmission:
    def sample_report(self):
        rep = Report()
        rep.add(Check("alpha", "invariance-criterion", 1e-9, 1e-7, "pass"))
        rep.add(Check("beta", "separable-bessel-family", 0.41, 1e-7, "flag",
                      note="as printed"))
        rep.repro = {"seed": 7, "params": {"H": 1.0}, "version": "0.1.0"}
        return rep

    def test_summary_counts(self):
        rep = self.sample_report()
        assert rep.summary == {"pass": 1, "flag": 1, "fail": 0}

    def test_json_roundtrip_and_schema(self, tmp_path):
        rep = self.sample_report()
        (path,) = emit_report(rep, "json", tmp_path)
        data = json.loads(path.read_text())
        assert set(data) == {"summary", "checks", "repro"}
        assert set(data["summary"]) == {"pass", "flag", "fail"}
        for check in data["checks"]:
            assert {"name", "anchor", "value", "tol", "status"} <= set(check)
            assert check["anchor"]
        assert {"seed", "params", "version"} <= set(data["repro"])

    def test_csv_has_one_row_per_check(self, tmp_path):
        rep = self.sample_report()
        (path,) = emit_report(rep, "csv-summary", tmp_path)
        lines = path.read_text().strip().splitlines()
        assert len(lines) == 1 + len(rep.checks)

    def test_emission_is_deterministic(self, tmp_path):
        a = self.sample_report().to_json_bytes()
        b = self.sample_report().to_json_bytes()
        assert a == b


class TestMain:
    def test_list_catalog(self, capsys):
        assert main(["--list-catalog"]) == 0
        out = capsys.readouterr().out
        assert "galilean" in out and "bessel-c316" in out

    def test_small_verify_run(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "command": "verify-symmetries", "H": 1.0, "seed": 3,
            "n_jets": 20, "catalog": ["pair-c2", "pair-c3"]})
        code = main(["verify-symmetries", "--config", str(cfg),
                     "--out", str(tmp_path / "out")])
        assert code == 0
        data = json.loads((tmp_path / "out" / "report.json").read_text())
        assert data["summary"]["fail"] == 0
        assert data["summary"]["pass"] > 0
        assert (tmp_path / "out" / "summary.csv").exists()

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"command": "classify",
                                      "catalog": ["bogus"]})
        assert main(["classify", "--config", str(cfg)]) == 2

    def test_command_mismatch_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"command": "classify"})
        assert main(["audit", "--config", str(cfg)]) == 2

    def test_seed_override_changes_repro_block(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "command": "verify-symmetries", "H": 1.0, "seed": 3,
            "n_jets": 5, "catalog": ["pair-c2"]})
        main(["verify-symmetries", "--config", str(cfg), "--seed", "99",
              "--out", str(tmp_path / "o1")])
        data = json.loads((tmp_path / "o1" / "report.json").read_text())
        assert data["repro"]["seed"] == 99

    def test_replay_is_byte_identical(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "command": "classify", "seed": 11, "n_classify": 40,
            "n_orbit_trials": 4})
        main(["classify", "--config", str(cfg), "--out", str(tmp_path / "a")])
        main(["classify", "--config", str(cfg), "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "report.json").read_bytes() \
            == (tmp_path / "b" / "report.json").read_bytes()
        assert (tmp_path / "a" / "summary.csv").read_bytes() \
            == (tmp_path / "b" / "summary.csv").read_bytes()


class TestArtifacts:
    def test_reduce_campaign_exports_trajectory_csv(self, tmp_path):
        cfg = write_config(tmp_path, {"command": "reduce", "seed": 5})
        assert main(["reduce", "--config", str(cfg),
                     "--out", str(tmp_path / "out")]) == 0
        csv_path = tmp_path / "out" / "trajectory.csv"
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "p,u,h"
        assert len(lines) > 100

    def test_simulate_campaign_exports_grid_csv(self, tmp_path):
        cfg = write_config(tmp_path, {
            "command": "simulate", "seed": 5,
            "grid": {"nx": 50, "resolutions": [24, 48, 96]}})
        main(["simulate", "--config", str(cfg),
              "--out", str(tmp_path / "out")])
        lines = (tmp_path / "out" / "grid_final.csv").read_text().splitlines()
        assert lines[0] == "x,u,h"
        assert len(lines) == 51


class TestCampaignCrashHandling:
    def test_crashing_check_is_recorded_not_raised(self):
        from symflow.report import run_check
        rep = Report()
        value = run_check(rep, "boom", "anchor", 1.0,
                          lambda: 1 / 0)
        assert value is None
        assert rep.checks[0].status == "fail"
        assert "ZeroDivisionError" in rep.checks[0].note
        assert rep.summary["fail"] == 1
