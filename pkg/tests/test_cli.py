import yaml

from helpers import write_light_fixture
from pfv.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL, main


def test_validate_and_run(tmp_path, capsys):
    cfg = write_light_fixture(tmp_path, strata=["all"], statistics={})
    assert main(["validate", str(cfg)]) == EXIT_OK
    assert main(["run", str(cfg)]) == EXIT_OK
    assert "2 of 2 tasks completed" in capsys.readouterr().out
    assert main(["run", str(cfg)]) == EXIT_CONFIG
    assert main(["run", str(cfg), "--overwrite"]) == EXIT_OK


def test_bad_config_column(tmp_path, capsys):
    cfg = write_light_fixture(tmp_path, statistics={"anova": ["no_such_column"]})
    assert main(["validate", str(cfg)]) == EXIT_CONFIG
    assert "no_such_column" in capsys.readouterr().err


def test_malformed_config(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("input: [unclosed\n")
    assert main(["validate", str(p)]) == EXIT_CONFIG
    assert main(["run", str(tmp_path / "missing.yaml")]) == EXIT_CONFIG


def test_partial_failure_exit(tmp_path):
    cfg = write_light_fixture(tmp_path, strata=["all"], statistics={})
    data = yaml.safe_load(cfg.read_text())
    data["selection"]["test_fraction"] = 0.001
    cfg.write_text(yaml.safe_dump(data))
    assert main(["run", str(cfg)]) == EXIT_PARTIAL


def test_inventory(tmp_path, capsys):
    cfg = write_light_fixture(tmp_path)
    assert main(["inventory", str(tmp_path / "cohort.csv"), "--config", str(cfg)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "class1,class2,stratum,n1,n2,adequate"
    assert len(lines) == 1 + 2 * 2
    out = tmp_path / "inv.csv"
    assert main(["inventory", str(tmp_path / "cohort.csv"), "--config", str(cfg), "-o", str(out)]) == EXIT_OK
    assert out.read_text().splitlines() == lines


def test_synth_writes_runnable_config(tmp_path):
    d = tmp_path / "demo"
    assert main(["synth", str(d), "--counts", "10", "30", "20", "60", "--features", "4", "--seed", "2"]) == EXIT_OK
    assert (d / "cohort.csv").exists()
    assert main(["validate", str(d / "config.yaml")]) == EXIT_OK
