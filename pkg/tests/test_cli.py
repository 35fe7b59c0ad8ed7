import csv
import json
import math

import pytest

from spinstar import capacities as cap
from spinstar.cli import BASE_COLUMNS, main
from spinstar.config import load_config
from spinstar.errors import ConfigError


def write_config(tmp_path, **overrides):
    doc = {
        "alpha": 1.0,
        "beta": 1.0,
        "omega0": 0.0,
        "bath": {"type": "equal", "n": 4, "g": 1.0, "omega": 1.0},
        "time": {"start": 0.0, "end": math.pi, "steps": 81},
        "output": {"format": "csv", "path": str(tmp_path / "out.csv")},
    }
    doc.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_sweep_columns_and_endpoints(tmp_path):
    cfg = write_config(tmp_path, theta_grid=[0.0, 0.3927, 0.7854])
    assert main(["sweep", "--config", str(cfg)]) == 0
    text = (tmp_path / "out.csv").read_text()
    header = text.splitlines()[0]
    assert header == "t,ratio_abs,Q,C_E,Q_E,C,C_E_lim@0,C_E_lim@0.3927,C_E_lim@0.785398163397"
    rows = read_csv(tmp_path / "out.csv")
    assert float(rows[0]["Q"]) == 1.0 and float(rows[0]["C_E"]) == 2.0
    # t = pi/2 is the recurrence period for g = alpha = 1 and lies on the 81-point grid
    assert float(rows[40]["t"]) == pytest.approx(math.pi / 2)
    assert float(rows[40]["Q"]) == pytest.approx(1.0, abs=1e-12)
    assert float(rows[20]["Q"]) < 0.01


def test_json_round_trip(tmp_path):
    cfg = write_config(tmp_path, output={"format": "json", "path": str(tmp_path / "out.json")})
    assert main(["sweep", "--config", str(cfg)]) == 0
    doc = json.loads((tmp_path / "out.json").read_text())
    assert doc["columns"] == BASE_COLUMNS
    model = load_config(cfg).model()
    for row in doc["rows"][:20]:
        point = cap.capacity_point(model, row["t"])
        assert row["Q"] == point.q
        assert row["C_E"] == point.c_e
        assert row["ratio_abs"] == point.ratio_abs


def test_random_sweep_is_reproducible(tmp_path):
    bath = {"type": "random", "n": 8, "seed": 42, "samples": 5}
    cfg = write_config(tmp_path, bath=bath)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "-o", str(a)]) == 0
    assert main(["sweep", "--config", str(cfg), "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_precedence(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, bath={"type": "random", "n": 3, "seed": 1})
    assert load_config(cfg, environ={}).seed == 1
    assert load_config(cfg, environ={"SPINSTAR_SEED": "9"}).seed == 9
    assert load_config(cfg, {"seed": 5}, environ={"SPINSTAR_SEED": "9"}).seed == 5
    monkeypatch.setenv("SPINSTAR_SEED", "9")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["ensemble", "--config", str(cfg), "-o", str(a)])
    main(["ensemble", "--config", str(cfg), "-o", str(b), "--seed", "1"])
    assert a.read_bytes() != b.read_bytes()


def test_ensemble_requires_random_bath(tmp_path, capsys):
    cfg = write_config(tmp_path)
    assert main(["ensemble", "--config", str(cfg)]) != 0
    assert "random" in capsys.readouterr().err


def test_ensemble_output(tmp_path):
    bath = {"type": "random", "n": 4, "seed": 42, "samples": 10}
    cfg = write_config(tmp_path, bath=bath, theta_grid=[0.2])
    assert main(["ensemble", "--config", str(cfg)]) == 0
    rows = read_csv(tmp_path / "out.csv")
    assert len(rows) == 81
    assert float(rows[0]["Q"]) == 1.0
    assert list(rows[0]) == BASE_COLUMNS + ["C_E_lim@0.2"]


def test_limits_json(tmp_path):
    cfg = write_config(tmp_path, output={"format": "json", "path": str(tmp_path / "lim.json")})
    assert main(["limits", "--config", str(cfg)]) == 0
    diag = json.loads((tmp_path / "lim.json").read_text())["diagnostics"]
    assert diag["period"] == pytest.approx(math.pi / 2)
    assert diag["periodicity_error"] <= 1e-10
    assert diag["high_temperature_q_at_quarter_period"] == 0.0
    assert diag["low_temperature_min_q_beta50"] >= 0.999
    assert diag["short_time_ratio"] < 0.5


def test_limits_csv_prints_diagnostics(tmp_path, capsys):
    cfg = write_config(tmp_path, bath={"type": "explicit", "g": [0.3, -0.5], "omega": [0.1, 0.9]})
    assert main(["limits", "--config", str(cfg)]) == 0
    diag = json.loads(capsys.readouterr().out)
    assert diag["period"] is None
    assert len(read_csv(tmp_path / "out.csv")) == 81


@pytest.mark.parametrize(
    "overrides",
    [
        {"time": {"start": 1.0, "end": 0.5, "steps": 10}},
        {"time": {"start": 0.0, "end": 1.0, "steps": 1}},
        {"bath": {"type": "explicit", "g": [0.1], "omega": [0.1, 0.2]}},
        {"bath": {"type": "ring", "n": 2}},
        {"theta_grid": [1.2]},
        {"alpha": -1.0},
        {"output": {"format": "xml"}},
    ],
)
def test_invalid_configs(tmp_path, capsys, overrides):
    cfg = write_config(tmp_path, **overrides)
    with pytest.raises(ConfigError):
        load_config(cfg)
    assert main(["sweep", "--config", str(cfg)]) != 0
    assert "error" in capsys.readouterr().err


def test_missing_config(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "nope.json")]) != 0


def test_unwritable_output(tmp_path, capsys):
    cfg = write_config(tmp_path, output={"format": "csv", "path": str(tmp_path / "no" / "dir.csv")})
    assert main(["sweep", "--config", str(cfg)]) == 3
    assert "I/O" in capsys.readouterr().err


def test_verify_small(capsys):
    assert main(["verify", "--max-n", "4"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") >= 6
    assert "FAIL" not in out


def test_verify_refuses_large(capsys):
    assert main(["verify", "--max-n", "25"]) == 2
    assert "resource" in capsys.readouterr().err
