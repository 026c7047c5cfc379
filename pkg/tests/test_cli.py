import json
import pytest

from skewflow.cli import main, read_config, suite_plan
from skewflow.experiments import DEFAULTS, REGISTRY, run_experiment

FIELDS = ["experiment", "params", "estimate", "ci_lo", "ci_hi", "target", "pass"]


def test_registry_names():
    assert set(REGISTRY) == {
        "hitting", "potential", "jump-law", "return-prob", "martingale", "duality-m", "time-reversal",
        "lens-tail", "lens-intensity", "independence-max", "weight-factor", "race-25", "stage-22",
        "flow-gaps", "modulus",
    }
    assert set(DEFAULTS) == set(REGISTRY)


def test_run_hitting_outputs(tmp_path, capsys):
    args = ["run", "hitting", "--beta", "0.5", "--z", "1", "--j", "1", "--v", "2", "--replicas", "20000",
            "--seed", "7", "--out-dir", str(tmp_path / "a")]
    assert main(args) == 0
    data = json.loads((tmp_path / "a" / "hitting.json").read_text())
    assert list(data) == FIELDS
    assert data["pass"] is True and abs(data["estimate"] - 0.5) < 0.02
    assert (tmp_path / "a" / "hitting.csv").read_text().startswith("replica,max_z,hit")
    args[-1] = str(tmp_path / "b")
    assert main(args) == 0
    assert (tmp_path / "a" / "hitting.json").read_bytes() == (tmp_path / "b" / "hitting.json").read_bytes()
    assert (tmp_path / "a" / "hitting.csv").read_bytes() == (tmp_path / "b" / "hitting.csv").read_bytes()


def test_run_rejects_bad_input(tmp_path, capsys):
    assert main(["run", "hitting", "--beta", "1.5", "--out-dir", str(tmp_path)]) != 0
    assert main(["run", "nope", "--out-dir", str(tmp_path)]) != 0
    assert main(["run", "hitting", "--bogus", "1", "--out-dir", str(tmp_path)]) != 0
    assert main(["run", "hitting", "--replicas", "0", "--out-dir", str(tmp_path)]) != 0
    assert main(["run", "race-25", "--beta", "0.25", "--out-dir", str(tmp_path)]) != 0


def test_unwritable_out_dir_is_a_file(tmp_path):
    f = tmp_path / "file"
    f.write_text("")
    assert main(["run", "hitting", "--replicas", "100", "--out-dir", str(f)]) == 2


def test_failing_check_gives_nonzero_exit(tmp_path, capsys, monkeypatch):
    from skewflow import experiments

    def broken(p):
        return experiments.Outcome(0.0, 0.0, 0.0, 0.5, {"always": False}, ["x"], [[1]])

    monkeypatch.setitem(experiments.REGISTRY, "hitting", broken)
    assert main(["run", "hitting", "--out-dir", str(tmp_path)]) == 1
    assert json.loads((tmp_path / "hitting.json").read_text())["pass"] is False


def test_suite(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(
        "# small suite\nexperiments = hitting, return-prob, race-25\nseed = 3\nbeta = 0.5\n"
        f"out_dir = {tmp_path / 'o'}\nreplicas = 5000\nrace-25.replicas = 2000\n"
    )
    assert main(["suite", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "hitting" in out and "race-25" in out
    first = (tmp_path / "o" / "race-25.json").read_bytes()
    race = json.loads(first)
    assert race["params"]["beta"] == -0.25 and race["params"]["replicas"] == 2000
    assert main(["suite", str(cfg), "--set", "race-25.replicas=3000"]) in (0, 1)
    assert json.loads((tmp_path / "o" / "race-25.json").read_text())["params"]["replicas"] == 3000
    assert main(["suite", str(cfg)]) == 0
    assert (tmp_path / "o" / "race-25.json").read_bytes() == first


def test_suite_errors(tmp_path, capsys):
    cfg = tmp_path / "e.cfg"
    cfg.write_text("experiments = \nseed = 1\n")
    assert main(["suite", str(cfg)]) == 2
    cfg.write_text("experiments = hitting\nnonsense line\n")
    assert main(["suite", str(cfg)]) == 2
    cfg.write_text("experiments = hitting, zzz\n")
    assert main(["suite", str(cfg)]) == 2
    with pytest.raises(ValueError):
        suite_plan({"experiments": ""})


def test_read_config(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("a = 1\n# comment\n\nb=2 # trailing\n")
    assert read_config(cfg) == {"a": "1", "b": "2"}


def test_run_experiment_params_echo():
    p, o = run_experiment("jump-law", {"replicas": "2000"})
    assert p["replicas"] == 2000 and p["seed"] == 1
    assert o.passed
