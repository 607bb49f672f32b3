import json

import pytest

from shearstab import __version__
from shearstab.cli import DEFAULTS, config_hash, load_config, main


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def read_json(path):
    return json.loads(path.read_text())


def test_dispersion_default(tmp_path):
    assert run(tmp_path, "dispersion") == 0
    summary = read_json(tmp_path / "summary.json")
    assert 2.5 <= summary["alpha_M"] <= 3.1
    assert summary["version"] == __version__
    head = (tmp_path / "dispersion.csv").read_text().splitlines()
    assert head[0].startswith("# shearstab") and summary["config_hash"] in head[0]
    assert (tmp_path / "fig_a.svg").read_text().startswith("<svg")


def test_empty_range_is_usage_error(tmp_path, capsys):
    code = run(tmp_path, "dispersion", "--set", "scan.alpha0_min=3", "--set", "scan.alpha0_max=2")
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["kind"] == "config" and err["exit_code"] == 2
    assert not (tmp_path / "summary.json").exists()


def test_numerical_failure_exit_code(tmp_path, capsys):
    code = run(tmp_path, "evolve", "--set", "evolve.mode=compare", "--set", "profile.name=exp_layer",
               "--set", "evolve.grid.y_max=10", "--set", "evolve.grid.n_points=256", "--set", "evolve.checkpoints=[1]")
    assert code == 3
    assert json.loads(capsys.readouterr().err)["kind"] == "numerical"


def test_spectrum_concave_and_inflected(tmp_path):
    assert run(tmp_path, "spectrum", "--set", "profile.name=tanh") == 0
    assert read_json(tmp_path / "spectrum.json")["eigenvalues"] == []
    assert run(tmp_path, "spectrum") == 0
    assert len(read_json(tmp_path / "spectrum.json")["eigenvalues"]) >= 1


def test_spectrum_malformed_region(tmp_path):
    assert run(tmp_path, "spectrum", "--set", "spectrum.region=[[0, 0.01]]") == 2
    assert run(tmp_path, "spectrum", "--set", "spectrum.region=[[0, 0], [1, 0.5]]") == 2


def test_evolve_damping(tmp_path):
    assert run(tmp_path, "evolve") == 0
    assert -1.15 <= read_json(tmp_path / "summary.json")["decay_exponent"] <= -0.85


def test_evolve_compare(tmp_path):
    assert run(tmp_path, "evolve", "--set", "evolve.mode=compare", "--set", "evolve.grid.y_max=20",
               "--set", "evolve.dt=0.05") == 0
    assert read_json(tmp_path / "summary.json")["max_relative_gap"] <= 1e-3


def test_evolve_zero_dt(tmp_path):
    assert run(tmp_path, "evolve", "--set", "evolve.dt=0") == 2


def test_cascade(tmp_path):
    assert run(tmp_path, "cascade") == 0
    text = (tmp_path / "cascade.csv").read_text()
    for e in ("1/2", "3/4", "13/16"):
        assert f",{e}," in text
    assert run(tmp_path, "cascade", "--set", "cascade.scenario=euler_stable") == 0
    text = (tmp_path / "cascade.csv").read_text()
    assert ",1/2," in text and ",5/8," in text
    assert run(tmp_path, "cascade", "--set", "cascade.scenario=chaos") == 2


def test_green_and_profile(tmp_path):
    assert run(tmp_path, "green", "--set", "green.x=[1.0]", "--set", "green.n_points=65") == 0
    rows = (tmp_path / "green.csv").read_text().splitlines()
    assert rows[1] == "x,y,re_G,im_G" and len(rows) == 67
    assert run(tmp_path, "green", "--set", "green.c=[0.5, 0]") == 2
    assert run(tmp_path, "profile", "--set", "heat.steps=10") == 0
    assert (tmp_path / "profile.csv").exists()
    assert run(tmp_path, "profile", "--set", "heat.scheme=explicit", "--set", "heat.dt=1") == 2


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SHEARSTAB_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["cascade"]) == 0
    assert (tmp_path / "env" / "cascade.csv").exists()


def test_config_file_merge(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scan": {"n_points": 60}}))
    merged = load_config("dispersion", cfg, ["scan.nu=1e-6"])
    assert merged["scan"]["n_points"] == 60 and merged["scan"]["nu"] == 1e-6
    assert merged["scan"]["alpha0_min"] == DEFAULTS["dispersion"]["scan"]["alpha0_min"]
    assert config_hash(merged) != config_hash(DEFAULTS["dispersion"])


def test_bad_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["cascade", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["teleport"])
