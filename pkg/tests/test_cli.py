"""CLI harness: config handling, CSV emission, determinism."""

import json
from dataclasses import replace

import numpy as np
import pytest

from tksgd.cli import emit_csv, main, read_csv_curve
from tksgd.experiment import (
    PRESETS,
    ExperimentConfig,
    RunRecord,
    preset_config,
    run_experiment,
)
from tksgd.risk import RiskCurve, checkpoint_grid


def small_record(n_max=300, **overrides):
    cfg = replace(preset_config("example1"), n_max=n_max, **overrides)
    return run_experiment(cfg)


def record_with_curve(rows):
    cfg = preset_config("example1")
    return RunRecord(config=cfg, curve=RiskCurve(rows), slope=None, wall_time_s=0.0)


def test_presets_exist():
    for name in ("example1", "example2", "example3", "example4", "example5", "example6"):
        assert name in PRESETS
        preset_config(name)  # must construct a valid config
    with pytest.raises(KeyError):
        preset_config("example99")


def test_preset_tables():
    e1 = preset_config("example1")
    assert (e1.d, e1.s, e1.theta, e1.gamma0, e1.t) == (2, 1.0, 0.25, 0.2, 0.0)
    assert e1.target == "bernoulli_b2"
    assert e1.noise_kind == "uniform" and e1.noise_half_width == 0.2
    e2 = preset_config("example2")
    assert e2.theta == 0.125 and e2.target == "bernoulli_b4"
    assert e2.noise_kind == "normal" and e2.noise_variance == 0.5
    k1 = preset_config("example2_ksgd_s1")
    assert k1.algorithm == "ksgd" and k1.t == pytest.approx(0.75)
    k2 = preset_config("example2_ksgd_s2")
    assert k2.s == 2.0 and k2.t == pytest.approx(0.5)
    e3 = preset_config("example3")
    assert (e3.d, e3.gamma0, e3.target) == (3, 0.5, "s2poly")
    assert e3.t == pytest.approx(1.0 / 3.0)


def test_config_round_trip():
    cfg = preset_config("example2")
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_config_rejects_unknown_fields():
    doc = preset_config("example1").to_dict()
    doc["bogus"] = 1
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict(doc)


def test_emit_csv_header_and_round_trip(tmp_path):
    rec = record_with_curve([(10, 0.01, 40, 3), (100, 0.001, 400, 6)])
    path = tmp_path / "c.csv"
    emit_csv(rec, path)
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    assert lines[0] == "n,error,log10_n,log10_error,cum_work,storage"
    assert lines[1].startswith("10,0.01")
    assert ",1," in lines[1] and ",-2," in lines[1]  # log10 columns
    assert "\r" not in text
    back = read_csv_curve(path)
    assert back.checkpoints == [(10, 0.01, 40, 3), (100, 0.001, 400, 6)]


def test_emit_csv_empty_curve(tmp_path):
    rec = record_with_curve([])
    path = tmp_path / "empty.csv"
    emit_csv(rec, path)
    assert path.read_text(encoding="utf-8") == "n,error,log10_n,log10_error,cum_work,storage\n"
    assert read_csv_curve(path).checkpoints == []


def test_read_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("nope\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_csv_curve(path)


def test_run_n_max_zero():
    rec = small_record(n_max=0)
    assert rec.curve.checkpoints == []
    assert rec.slope is None


def test_run_checkpoints_follow_grid():
    rec = small_record(n_max=300)
    assert [c[0] for c in rec.curve.checkpoints] == checkpoint_grid(300)
    assert all(c[1] >= 0 for c in rec.curve.checkpoints)


def test_run_is_deterministic():
    a = small_record()
    b = small_record()
    assert a.curve.checkpoints == b.curve.checkpoints


def test_seed_changes_output():
    a = small_record()
    b = small_record(seed_train=777)
    assert a.curve.checkpoints != b.curve.checkpoints


def test_cli_run_writes_outputs(tmp_path):
    code = main([
        "run", "--preset", "example1", "--override", "n_max=200",
        "--out", str(tmp_path),
    ])
    assert code == 0
    assert (tmp_path / "example1.csv").exists()
    doc = json.loads((tmp_path / "example1.json").read_text(encoding="utf-8"))
    assert doc["config"]["n_max"] == 200
    curve = read_csv_curve(tmp_path / "example1.csv")
    assert [c[0] for c in curve.checkpoints] == checkpoint_grid(200)


def test_cli_reruns_byte_identical(tmp_path):
    for sub in ("a", "b"):
        assert main([
            "run", "--preset", "example1", "--override", "n_max=200",
            "--out", str(tmp_path / sub),
        ]) == 0
    csv_a = (tmp_path / "a" / "example1.csv").read_bytes()
    csv_b = (tmp_path / "b" / "example1.csv").read_bytes()
    assert csv_a == csv_b


def test_cli_override_changes_named_field_only(tmp_path):
    assert main([
        "run", "--preset", "example1", "--override", "n_max=150",
        "--override", "name=custom_run", "--out", str(tmp_path),
    ]) == 0
    doc = json.loads((tmp_path / "custom_run.json").read_text(encoding="utf-8"))
    base = PRESETS["example1"]
    assert doc["config"]["n_max"] == 150
    assert doc["config"]["theta"] == base["theta"]
    assert doc["config"]["gamma0"] == base["gamma0"]


def test_cli_unknown_preset_exit_1(tmp_path, capsys):
    code = main(["run", "--preset", "example99", "--out", str(tmp_path)])
    assert code == 1
    err = capsys.readouterr().err
    assert "example1" in err  # message names the valid presets


def test_cli_unknown_override_field_exit_1(tmp_path):
    code = main([
        "run", "--preset", "example1", "--override", "bogus=1",
        "--out", str(tmp_path),
    ])
    assert code == 1


def test_cli_missing_config_exit_1(tmp_path):
    assert main(["run", "--out", str(tmp_path)]) == 1


def test_cli_config_file(tmp_path):
    doc = dict(PRESETS["example1"], n_max=120, name="fromfile")
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["run", "--config", str(cfg_path), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fromfile.csv").exists()


def test_cli_sweep_expands_lists(tmp_path):
    doc = dict(PRESETS["example1"], n_max=60, theta=[0.2, 0.3], name="sw")
    cfg_path = tmp_path / "sweep.json"
    cfg_path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["sweep", "--config", str(cfg_path), "--out", str(tmp_path)]) == 0
    produced = sorted(p.name for p in tmp_path.glob("sw_*.csv"))
    assert len(produced) == 2


def test_cli_sweep_preset_example3_family(tmp_path):
    # the built-in sweep for example3 covers the three truncation exponents
    assert main([
        "sweep", "--preset", "example3", "--override", "n_max=40",
        "--out", str(tmp_path),
    ]) == 0
    produced = sorted(p.name for p in tmp_path.glob("example3_*.csv"))
    assert len(produced) == 3


def test_mc_risk_method_agrees_with_exact():
    exact = small_record(n_max=1000)
    mc = small_record(n_max=1000, risk_method="mc", mc_test_size=100_000)
    e = np.array([c[1] for c in exact.curve.checkpoints])
    m = np.array([c[1] for c in mc.curve.checkpoints])
    # MC standard error ~ err / sqrt(10^5); allow a generous relative band
    assert np.max(np.abs(e - m) / np.maximum(e, 1e-12)) < 0.15
