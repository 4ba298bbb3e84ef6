import json

import pytest

from dynasty.cli import main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_scenario_writes_artifacts(tmp_path, capsys):
    code, out, _ = run(["scenario", "--id", "fig4", "--out", str(tmp_path), "--jobs", "1"], capsys)
    assert code == 0
    assert (tmp_path / "fig4.csv").exists()
    assert (tmp_path / "fig4.manifest.json").exists()
    assert (tmp_path / "fig4.cases.json").exists()
    assert "fig4" in out


def test_scenario_unknown_id_exits_2(tmp_path, capsys):
    code, _, err = run(["scenario", "--id", "fig9", "--out", str(tmp_path)], capsys)
    assert code == 2
    assert "fig9" in err


def test_scenario_seed_reruns_identical(tmp_path, capsys):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        code, _, _ = run(
            ["scenario", "--id", "fig4", "--out", str(out), "--seed", "7", "--quiet", "--jobs", "1"],
            capsys,
        )
        assert code == 0
    assert (out_a / "fig4.csv").read_bytes() == (out_b / "fig4.csv").read_bytes()
    assert (out_a / "fig4.manifest.json").read_bytes() == (out_b / "fig4.manifest.json").read_bytes()


def test_env_seed_fallback(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("DYNASTY_SEED", "99")
    code, _, _ = run(["scenario", "--id", "fig4", "--out", str(tmp_path), "--quiet", "--jobs", "1"], capsys)
    assert code == 0
    manifest = json.loads((tmp_path / "fig4.manifest.json").read_text())
    assert manifest["master_seed"] == 99


def test_malformed_config_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["scenario", "--id", "fig4", "--out", str(tmp_path), "--config", str(bad)], capsys)
    assert code == 2
    assert "malformed config JSON" in err


def test_unknown_set_key_exits_2_naming_key(tmp_path, capsys):
    code, _, err = run(
        ["scenario", "--id", "fig4", "--out", str(tmp_path), "--set", "k_typo=3"], capsys
    )
    assert code == 2
    assert "k_typo" in err


def test_set_overrides_flow_into_manifest(tmp_path, capsys):
    code, _, _ = run(
        ["scenario", "--id", "A1", "--out", str(tmp_path), "--set", "sigma=0.5", "--quiet", "--jobs", "1"],
        capsys,
    )
    assert code == 0
    manifest = json.loads((tmp_path / "A1.manifest.json").read_text())
    assert manifest["regime_rule"]["above"]["production"]["sigma"] == 0.5


def test_threshold_command(capsys):
    code, out, _ = run(["threshold", "--hc", "6", "--b", "200"], capsys)
    assert code == 0
    assert "sigma* = 0.4" in out


def test_solve_command(capsys):
    code, out, _ = run(["solve", "--hc", "10", "--b", "350"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["states"]["1,0"]["action"] == "Stop"
    assert doc["states"]["0,1"]["action"] == "Grow"


def test_sweep_command(tmp_path, capsys):
    code, _, _ = run(
        ["sweep", "--hc", "6", "--b", "200", "--models", "M1,M3", "--out", str(tmp_path), "--quiet"],
        capsys,
    )
    assert code == 0
    lines = (tmp_path / "sweep.csv").read_text().strip().split("\n")
    assert lines[0] == "model,sigma,hc,budget,n_star,invest_star,utility"
    assert len(lines) == 1 + 2 * 100


def test_sweep_bad_model_exits_2(capsys):
    code, _, err = run(["sweep", "--hc", "6", "--b", "200", "--models", "M9"], capsys)
    assert code == 2
    assert "M9" in err


def test_check_command_passes(capsys):
    code, out, _ = run(["check", "--oracles", "--draws", "20000", "--points", "3", "--seed", "5"], capsys)
    assert code == 0
    assert "self-checks passed" in out
