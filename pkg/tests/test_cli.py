import json

import pytest

from qholo.cli import PRESETS, list_presets, main, validate_document
from qholo.cli.config import ConfigError

FAST = ("fig4", "calibrate", "dipole-table")
REQUIRED = {"fig4", "fig7", "fig8", "fig10", "fig11", "fig12", "fig14", "dipole-table", "calibrate"}


def test_list_presets(capsys):
    assert main(["list"]) == 0
    text = capsys.readouterr().out
    assert len(text.strip().splitlines()) >= 9
    assert main(["list", "--json"]) == 0
    items = json.loads(capsys.readouterr().out)
    assert {i["name"] for i in items} >= REQUIRED
    assert items == list_presets()


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_default_validates(name):
    validate_document({"scenario": name, "params": dict(PRESETS[name].defaults)}, PRESETS)


def test_run_fig4_report_and_artifacts(tmp_path, capsys):
    assert main(["run", "--preset", "fig4", "--omega", "200", "--out", str(tmp_path), "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    phase = {s["name"]: s for s in rep["scalars"]}["phase_rad"]
    assert phase["expected"] == pytest.approx(0.39269908169872414)
    assert abs(phase["value"] - phase["expected"]) < 1e-3
    prov = rep["provenance"]
    assert {"config_hash", "seed", "version", "numpy", "scipy", "python"} <= set(prov)
    assert all(s["source"] in ("published", "analytic", "none") for s in rep["scalars"])
    assert (tmp_path / "fig4_report.json").exists()
    header = (tmp_path / "fig4_evolution.csv").read_text().splitlines()[0]
    assert header.startswith("time_us,")
    assert not list(tmp_path.glob("*.tmp")) and not list(tmp_path.glob(".*"))


@pytest.mark.parametrize("name", FAST)
def test_outputs_byte_identical(tmp_path, name):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--preset", name, "--out", str(a), "--seed", "3"]) == 0
    assert main(["run", "--preset", name, "--out", str(b), "--seed", "3"]) == 0
    csvs = sorted(p.name for p in a.glob("*.csv"))
    assert csvs
    for f in csvs:
        data = (a / f).read_bytes()
        assert data == (b / f).read_bytes()
        assert b"\r\n" not in data


def test_dipole_table_csv(tmp_path):
    assert main(["run", "--preset", "dipole-table", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "dipole_table.csv").read_text().splitlines()
    assert lines[0].split(",")[:3] == ["transition", "n", "value_bohr2"]
    assert len(lines) == 1 + 75


def test_expectation_failure_exit_code(tmp_path):
    assert main(["run", "--preset", "fig4", "--omega", "20", "--set", "sweep=[20, 60]",
                 "--out", str(tmp_path)]) == 2


def test_error_exit_codes(tmp_path, capsys):
    assert main(["run", "--preset", "nope", "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "fig4" in err and "dipole-table" in err
    assert main(["run", "--preset", "fig4", "--omega", "-3", "--out", str(tmp_path)]) == 1
    assert "params.omega" in capsys.readouterr().err
    assert main(["run", "--preset", "fig4", "--set", "foo=1", "--out", str(tmp_path)]) == 1
    assert main(["run", "--preset", "fig14", "--kappa", "1", "--out", str(tmp_path)]) == 1
    assert main(["run", "--out", str(tmp_path)]) == 1


def test_validate_json_and_toml(tmp_path, capsys):
    good = tmp_path / "c.json"
    good.write_text(json.dumps({"scenario": "fig8", "params": {"omega": 300.0}}))
    assert main(["validate", str(good)]) == 0
    toml = tmp_path / "c.toml"
    toml.write_text('scenario = "fig12"\n[params]\nkappa = [0.5]\n[trajectories]\nn_traj = 15\nseed = 2\n')
    assert main(["validate", str(toml)]) == 0
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps({"scenario": "fig12", "params": {"kappa": [0.5, -1.0]}}))
    assert main(["validate", str(bad)]) == 1
    assert "params.kappa" in capsys.readouterr().err
    with pytest.raises(ConfigError, match="integrator"):
        validate_document({"scenario": "fig4", "integrator": {"dt": -1}}, PRESETS)
    with pytest.raises(ConfigError):
        validate_document({"scenario": "fig4", "extra": 1}, PRESETS)


def test_run_from_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scenario": "calibrate", "output": {"dir": str(tmp_path / "o"),
                                                                   "formats": ["csv"]}}))
    assert main(["run", str(cfg)]) == 0
    assert (tmp_path / "o" / "calibrate.csv").exists()
    assert not (tmp_path / "o" / "calibrate_report.json").exists()
