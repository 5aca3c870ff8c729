"""Command-line interface: exit codes, outputs, determinism."""

import json

import pytest

from nlslab.cli import main
from nlslab.experiments import CSV_HEADER

FAST_STRICHARTZ = {
    "grid_sizes": [256, 512],
    "time_grid_sizes": [8, 16],
    "lambda_values": [1.0, 2.0],
    "length": 40.0,
}

LOOSE = {"drift_max_pct": 1000.0, "lambda_spread_max_pct": 1000.0}


def write_config(tmp_path, name="cfg.json", **fields):
    path = tmp_path / name
    path.write_text(json.dumps(fields))
    return str(path)


class TestErrorPaths:
    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["strichartz", "--config", str(tmp_path / "nope.json"),
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        rc = main(["strichartz", "--config", str(bad),
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "not valid JSON" in capsys.readouterr().err

    def test_non_object_config(self, tmp_path, capsys):
        bad = tmp_path / "list.json"
        bad.write_text("[1, 2]")
        rc = main(["strichartz", "--config", str(bad),
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "JSON object" in capsys.readouterr().err

    def test_invalid_parameter(self, tmp_path, capsys):
        cfg = write_config(tmp_path, p=1.5)
        rc = main(["strichartz", "--config", cfg,
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "p must lie" in capsys.readouterr().err

    def test_unknown_field(self, tmp_path, capsys):
        cfg = write_config(tmp_path, bogus=1)
        rc = main(["strichartz", "--config", cfg,
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "unknown config fields" in capsys.readouterr().err

    def test_experiment_mismatch(self, tmp_path, capsys):
        cfg = write_config(tmp_path, experiment="wellposed")
        rc = main(["strichartz", "--config", cfg,
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "command line asked" in capsys.readouterr().err

    def test_bad_thread_count(self, tmp_path, capsys):
        rc = main(["strichartz", "--threads", "0",
                   "--out", str(tmp_path / "out")])
        assert rc == 2
        assert "--threads" in capsys.readouterr().err

    def test_unknown_experiment_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["nosuch", "--out", str(tmp_path / "out")])
        assert exc.value.code == 2


class TestSuccessPath:
    def test_exit_zero_with_outputs(self, tmp_path, capsys):
        cfg = write_config(tmp_path, thresholds=LOOSE, **FAST_STRICHARTZ)
        out = tmp_path / "results"
        rc = main(["strichartz", "--config", cfg, "--out", str(out)])
        assert rc == 0
        printed = capsys.readouterr().out
        assert "strichartz" in printed and "ok" in printed

        csv_path = out / "strichartz.csv"
        assert csv_path.exists()
        header = csv_path.read_text().splitlines()[0]
        assert header == ",".join(CSV_HEADER)

        manifest = json.loads((out / "manifest.json").read_text())
        assert len(manifest["runs"]) == 1
        run = manifest["runs"][0]
        assert run["experiment"] == "strichartz"
        assert run["csv"] == "strichartz.csv"
        assert run["n_failed"] == 0
        assert run["n_records"] > 0

    def test_seed_override_recorded(self, tmp_path):
        cfg = write_config(tmp_path, thresholds=LOOSE, **FAST_STRICHARTZ)
        out = tmp_path / "results"
        rc = main(["strichartz", "--config", cfg, "--out", str(out),
                   "--seed", "17"])
        assert rc == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["runs"][0]["seed"] == 17
        assert manifest["runs"][0]["config"]["seed"] == 17

    def test_exit_one_on_failing_threshold(self, tmp_path, capsys):
        cfg = write_config(tmp_path, thresholds={"drift_max_pct": -1.0},
                           **FAST_STRICHARTZ)
        out = tmp_path / "results"
        rc = main(["strichartz", "--config", cfg, "--out", str(out)])
        assert rc == 1
        assert "failing" in capsys.readouterr().out
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["runs"][0]["n_failed"] > 0

    def test_rerun_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, thresholds=LOOSE, **FAST_STRICHARTZ)
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(["strichartz", "--config", cfg, "--out", str(out_a)]) == 0
        assert main(["strichartz", "--config", cfg, "--out", str(out_b),
                     "--threads", "3"]) == 0
        assert ((out_a / "strichartz.csv").read_bytes()
                == (out_b / "strichartz.csv").read_bytes())
        assert ((out_a / "manifest.json").read_bytes()
                == (out_b / "manifest.json").read_bytes())

    def test_manifest_accumulates_experiments(self, tmp_path):
        out = tmp_path / "results"
        cfg_s = write_config(tmp_path, "s.json", thresholds=LOOSE,
                             **FAST_STRICHARTZ)
        cfg_t = write_config(
            tmp_path, "t.json", experiment="tmax-scan",
            M_values=[1.0, 2.0], grid_sizes=[512], time_grid_sizes=[8],
            length=20.0, thresholds={"slope_rel_tol": 0.5})
        assert main(["strichartz", "--config", cfg_s, "--out", str(out)]) == 0
        assert main(["tmax-scan", "--config", cfg_t, "--out", str(out)]) == 0
        # rerun the first: replaced, not duplicated
        assert main(["strichartz", "--config", cfg_s, "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        names = [r["experiment"] for r in manifest["runs"]]
        assert names == ["strichartz", "tmax-scan"]
