"""CLI tests: bundles, exit codes, sweeps, round trips, and the check command."""

import csv
import json
import math

import numpy as np
import pytest

import specopt.specular
from specopt.cli import main

BASE_CONFIG = {
    "m": 4, "n": 3, "lambda1": 0.1, "lambda2": 1.0,
    "trials": 2, "max_iters": 20, "methods": ["SPEG-s", "GD"], "seed": 5,
}


def write_config(tmp_path, name="cfg.json", **patch):
    raw = dict(BASE_CONFIG)
    raw.update(patch)
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return path


class TestRunCommand:
    def test_bundle_files_written(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        for name in ("stats.json", "trajectories.csv", "runmeta.json"):
            assert (out / name).exists()
        stats = json.loads((out / "stats.json").read_text())
        assert set(stats) == {"SPEG-s", "GD"}
        for ms in stats.values():
            assert ms["count"] == 2 and ms["failed"] == 0
            assert ms["median"] == sorted(ms["finals"])[0] or len(ms["finals"]) == 2

    def test_malformed_json_is_config_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "m": 4,\n  "n": oops\n}\n')
        assert main(["run", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
        err = capsys.readouterr().err
        assert ":3:" in err  # line-numbered message

    def test_unknown_method_is_config_error(self, tmp_path):
        cfg = write_config(tmp_path, methods=["BFGS"])
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1

    def test_divergent_cell_exits_two_with_partial_stats(self, tmp_path):
        cfg = write_config(tmp_path, lambda2=1e6, methods=["GD", "SPEG-s"])
        out = tmp_path / "o"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 2
        stats = json.loads((out / "stats.json").read_text())
        assert stats["GD"]["failed"] == 2
        assert math.isnan(stats["GD"]["mean"])
        assert stats["SPEG-s"]["count"] == 2

    def test_seed_and_trials_overrides(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["run", "--config", str(cfg), "--out", str(out1), "--seed", "99", "--trials", "1"])
        meta = json.loads((out1 / "runmeta.json").read_text())
        assert meta["seed"] == 99 and meta["config"]["trials"] == 1
        main(["run", "--config", str(cfg), "--out", str(out2), "--seed", "99", "--trials", "1"])
        assert (out1 / "stats.json").read_bytes() == (out2 / "stats.json").read_bytes()

    def test_csv_round_trip_and_sort_order(self, tmp_path):
        from specopt.harness import ExperimentConfig, run_trials

        cfg_path = write_config(tmp_path)
        out = tmp_path / "o"
        main(["run", "--config", str(cfg_path), "--out", str(out)])
        with open(out / "trajectories.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        keys = [(r["method"], int(r["trial"]), int(r["iter"])) for r in rows]
        assert keys == sorted(keys)
        _, records = run_trials(ExperimentConfig.from_dict(BASE_CONFIG))
        by_cell = {}
        for r in rows:
            by_cell.setdefault((r["method"], int(r["trial"])), []).append(r)
        for (method, trial), cell in by_cell.items():
            rec = records[method][trial]
            got_f = np.array([float(r["f_current"]) for r in cell])
            got_b = np.array([float(r["f_best"]) for r in cell])
            got_g = np.array([float(r["grad_norm"]) for r in cell])
            assert np.array_equal(got_f, rec.f_current)  # exact decimal round trip
            assert np.array_equal(got_b, rec.f_best)
            assert np.array_equal(got_g, rec.grad_norm)


class TestSweepCommand:
    def test_grid_bundles_and_manifest(self, tmp_path):
        cfg = write_config(tmp_path, trials=1, max_iters=5, methods=["SPEG-s"])
        out = tmp_path / "sweep"
        code = main(["sweep", "--config", str(cfg), "--out", str(out),
                     "--l1", "0.1,1.0,10.0", "--l2", "0.1,1.0,10.0"])
        assert code == 0
        manifest = json.loads((out / "index.json").read_text())
        assert len(manifest) == 9
        for cell in manifest:
            assert (out / cell["dir"] / "stats.json").exists()
            assert cell["exit_code"] == 0

    def test_single_cell_matches_run(self, tmp_path):
        cfg = write_config(tmp_path, trials=1, max_iters=5, methods=["SPEG-s"])
        sweep_out = tmp_path / "s"
        run_out = tmp_path / "r"
        main(["sweep", "--config", str(cfg), "--out", str(sweep_out),
              "--l1", "0.1", "--l2", "1.0"])
        cfg2 = write_config(tmp_path, "cfg2.json", trials=1, max_iters=5,
                            methods=["SPEG-s"], lambda1=0.1, lambda2=1.0)
        main(["run", "--config", str(cfg2), "--out", str(run_out)])
        cell = sweep_out / "l1_0.1_l2_1"
        assert cell.is_dir()
        assert (cell / "stats.json").read_bytes() == (run_out / "stats.json").read_bytes()

    def test_empty_lambda_list_rejected(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "s"),
                     "--l1", "", "--l2", "1.0"]) == 1


class TestSpecgradCommand:
    def test_abs2d_at_origin(self, capsys):
        assert main(["specgrad", "abs2d", "0,0"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["gradient"] == [0.0, 0.0]
        assert doc["one_sided"] == [{"plus": 1.0, "minus": -1.0}, {"plus": 1.0, "minus": -1.0}]

    def test_abs2d_off_origin(self, capsys):
        assert main(["specgrad", "abs2d", "1,0"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["gradient"] == [1.0, 0.0]

    def test_maxaffine_kink_value(self, capsys):
        assert main(["specgrad", "maxaffine", "0"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["gradient"][0] == pytest.approx(1.3874258867, abs=1e-9)

    def test_unknown_function(self):
        assert main(["specgrad", "nope", "0"]) == 1

    def test_dimension_mismatch(self):
        assert main(["specgrad", "abs2d", "1,2,3"]) == 1


class TestCheckCommand:
    def test_fast_level_passes(self, capsys):
        assert main(["check", "--level", "fast"]) == 0
        out = capsys.readouterr().out
        assert out.count("[PASS]") == 7 and "[FAIL]" not in out

    def test_corrupted_kernel_fails_ordering_suite(self, capsys, monkeypatch):
        # mutation check: negating the assembled derivative must trip the suites
        original = specopt.specular.afun
        monkeypatch.setattr(specopt.specular, "afun", lambda a, b: -original(a, b))
        assert main(["check", "--level", "fast"]) == 1
        out = capsys.readouterr().out
        assert "[FAIL] ordering-lemma" in out
