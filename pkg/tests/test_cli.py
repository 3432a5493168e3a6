"""CLI and pipeline surface."""

import json

import pytest

from logevo.cli import main
from logevo.pipeline import RunConfig, run, sweep

from helpers import make_loghub_sample


@pytest.fixture
def workspace(tmp_path):
    log_path = tmp_path / "sample.log"
    log_path.write_text(make_loghub_sample("HDFS_2", 600, seed=1))
    config = {
        "input": str(log_path),
        "format": "loghub",
        "line_format": "HDFS_2",
        "level_filter": ["ERROR"],
        "batch": "1d",
        "provider": {"kind": "hashing", "d": 64, "seed": 0},
        "params": {"theta": 0.3},
        "output_dir": str(tmp_path / "out"),
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    return tmp_path, config_path, config


def test_run_happy_path(workspace, capsys):
    tmp_path, config_path, _ = workspace
    assert main(["run", "--config", str(config_path)]) == 0
    out_dir = tmp_path / "out"
    for name in ("report.json", "metrics.csv", "clusters.jsonl", "state.json"):
        assert (out_dir / name).exists(), name
    report = json.loads((out_dir / "report.json").read_text())
    for key in ("S", "R", "C", "lce"):
        assert 0.0 <= report["score"][key] <= 1.0
    assert "lce=" in capsys.readouterr().out


def test_flag_overrides(workspace):
    tmp_path, config_path, _ = workspace
    out2 = tmp_path / "out2"
    assert (
        main(
            [
                "run", "--config", str(config_path),
                "--theta", "0.4", "--alpha", "0.2", "--gamma", "50",
                "--staleness-days", "10", "--weights", "0.5,0.25,0.25",
                "--output-dir", str(out2),
            ]
        )
        == 0
    )
    report = json.loads((out2 / "report.json").read_text())
    assert report["config"]["params"]["theta"] == 0.4
    assert report["config"]["weights"] == [0.5, 0.25, 0.25]


def test_empty_input_is_parse_error(tmp_path, capsys):
    log_path = tmp_path / "empty.log"
    log_path.write_text("")
    config_path = tmp_path / "c.json"
    config_path.write_text(
        json.dumps({"input": str(log_path), "output_dir": str(tmp_path / "o")})
    )
    assert main(["run", "--config", str(config_path)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("PARSE:")
    assert err.count("\n") == 1  # single-line diagnostic


def test_missing_config_fields_rejected(tmp_path, capsys):
    config_path = tmp_path / "c.json"
    config_path.write_text(json.dumps({"input": "x", "bogus_field": 1}))
    assert main(["run", "--config", str(config_path)]) == 1
    assert capsys.readouterr().err.startswith("CONFIG:")


def test_bad_provider_kind(tmp_path, workspace, capsys):
    _, _, config = workspace
    config["provider"] = {"kind": "quantum"}
    config_path = tmp_path / "bad.json"
    config_path.write_text(json.dumps(config))
    assert main(["run", "--config", str(config_path)]) == 1
    assert capsys.readouterr().err.startswith("CONFIG:")


def test_gmm_route(workspace):
    _, config_path, config = workspace
    config = RunConfig.from_file(config_path)
    config.algorithm = "GMM"
    config.gmm = {"K": 3, "seed": 0}
    report = run(config)
    assert 0.0 <= report["score"]["lce"] <= 1.0
    assert all(b["nr_clust"] in (0, 3) for b in report["batches"])


def test_levenshtein_mode(workspace):
    _, config_path, _ = workspace
    config = RunConfig.from_file(config_path)
    config.representative = "LEVENSHTEIN"
    report = run(config)
    assert 0.0 <= report["score"]["lce"] <= 1.0


class TestSweep:
    def test_singleton_grid_matches_plain_run(self, workspace):
        _, config_path, _ = workspace
        config = RunConfig.from_file(config_path)
        plain = run(config)
        rows = sweep(config, {"theta": [0.3], "alpha": [0.1], "gamma": [100]})
        assert len(rows) == 1
        assert rows[0]["lce"] == pytest.approx(plain["score"]["lce"])

    def test_grid_cardinality_and_sort(self, workspace, tmp_path):
        _, config_path, _ = workspace
        config = RunConfig.from_file(config_path)
        rows = sweep(
            config,
            {"theta": [0.2, 0.4], "alpha": [0.1, 0.3], "gamma": [10, 100]},
        )
        assert len(rows) == 8
        ok = [r for r in rows if r["status"] == "OK"]
        lces = [r["lce"] for r in ok]
        assert lces == sorted(lces, reverse=True)

    def test_sweep_csv_written(self, workspace):
        tmp_dir, config_path, _ = workspace
        config = RunConfig.from_file(config_path)
        sweep(config, {"theta": [0.3]})
        assert (tmp_dir / "out" / "sweep.csv").exists()

    def test_cli_sweep(self, workspace, capsys):
        tmp_dir, config_path, _ = workspace
        grid_path = tmp_dir / "grid.json"
        grid_path.write_text(json.dumps({"theta": [0.2, 0.4]}))
        assert (
            main(["sweep", "--config", str(config_path), "--grid", str(grid_path)]) == 0
        )
        assert "sweep: 2 cells" in capsys.readouterr().out
