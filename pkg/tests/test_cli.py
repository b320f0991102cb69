import json
import shutil
import subprocess

import numpy as np
import pytest

from dimwit.cli import main
from dimwit.experiment import ExperimentDataset, JobCounts, save_dataset


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ideal_text_and_json(capsys, ideal_p):
    code, out, _ = run(capsys, "ideal")
    assert code == 0
    assert "W = " in out and "adjugate" in out
    code, out, _ = run(capsys, "ideal", "--format", "json")
    obj = json.loads(out)
    assert np.allclose(obj["p"], ideal_p, atol=1e-12)
    assert abs(obj["W"]) < 1e-12
    code, out, _ = run(capsys, "ideal", "--format", "json", "--decompose-ecr")
    assert np.allclose(json.loads(out)["p"], ideal_p, atol=1e-10)


def test_simulate_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "simulate", "--shots", "20000", "--jobs", "10", "--seed", "42", "--out", str(a))[0] == 0
    assert run(capsys, "simulate", "--shots", "20000", "--jobs", "10", "--seed", "42", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_env_seed(capsys, tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv("DIMWIT_SEED", "42")
    code, out, _ = run(capsys, "simulate", "--jobs", "2", "--out", str(a))
    assert "seed 42" in out
    run(capsys, "simulate", "--jobs", "2", "--seed", "42", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("DIMWIT_SEED", "nope")
    assert run(capsys, "simulate", "--jobs", "2", "--out", str(a))[0] == 2


def test_simulate_usage_errors(capsys, tmp_path):
    assert run(capsys, "simulate", "--jobs", "0", "--out", str(tmp_path / "x.json"))[0] == 2
    assert run(capsys, "simulate", "--shots", "0", "--out", str(tmp_path / "x.json"))[0] == 2
    assert run(capsys, "simulate", "--out", str(tmp_path / "missing" / "x.json"))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate"])
    assert exc.value.code == 2


def test_analyze_null(capsys, tmp_path):
    path = tmp_path / "ds.json"
    run(capsys, "simulate", "--seed", "1", "--out", str(path))
    csv = tmp_path / "w.csv"
    code, out, _ = run(capsys, "analyze", "--in", str(path), "--csv", str(csv))
    assert code == 0
    assert "verdict: consistent-with-null" in out
    assert csv.read_text().startswith("index,job_id")
    code, out, _ = run(capsys, "analyze", "--in", str(path), "--format", "json")
    assert json.loads(out)["verdict"] == "consistent-with-null"


def test_analyze_violation_at_hardware_scale(capsys, tmp_path, ideal_p):
    # Correlated shift giving |W| about 24e-6 with an error near 0.6e-6.
    N = 4_800_000
    sign = -np.array([[(-1) ** (i + j) for j in range(5)] for i in range(5)], dtype=float)
    sign[4, :] = sign[:, 4] = 0
    p = ideal_p + 7.8e-4 * sign
    job = JobCounts("hw", "ALAP", N, np.round(p * N))
    path = tmp_path / "hw.json"
    save_dataset(ExperimentDataset(5, (job,), {"device": "synthetic"}), path)
    code, out, _ = run(capsys, "analyze", "--in", str(path), "--format", "json")
    rep = json.loads(out)
    assert code == 1
    assert rep["overall"]["pooled"]["W"] == pytest.approx(24.45e-6, rel=0.05)
    assert rep["overall"]["pooled"]["zscore"] > 6


def test_analyze_corrupt_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "analyze", "--in", str(path))
    assert code == 2 and "line 1" in err
    path.write_text('{"n": 5, "jobs": [{"job_id": "x"}]}')
    code, _, err = run(capsys, "analyze", "--in", str(path))
    assert code == 2 and "missing field" in err
    assert run(capsys, "analyze", "--in", str(tmp_path / "absent.json"))[0] == 2


def test_maxima_modes(capsys):
    code, out, _ = run(capsys, "maxima", "--mode", "classical", "--n", "4")
    assert code == 0 and "max |W| = 3" in out
    code, out, _ = run(capsys, "maxima", "--mode", "closed-form", "--n", "4", "--d", "3", "--format", "json")
    assert json.loads(out)["value"] == pytest.approx(0.903204683116282, abs=1e-12)
    code, out, _ = run(capsys, "maxima", "--mode", "closed-form", "--n", "5", "--case", "n5d4", "--format", "json")
    assert json.loads(out)["value"] == pytest.approx(4 * (55 / 64) ** 5)
    code, out, _ = run(capsys, "maxima", "--n", "3", "--d", "2", "--field", "real", "--restarts", "2",
                       "--format", "json")
    obj = json.loads(out)
    assert obj["value"] == pytest.approx(0.31640625, abs=1e-3)
    assert obj["config"]["n"] == 3


def test_maxima_usage_errors(capsys):
    assert run(capsys, "maxima", "--mode", "classical", "--n", "7")[0] == 2
    assert run(capsys, "maxima", "--mode", "closed-form", "--n", "2", "--d", "2")[0] == 2
    assert run(capsys, "maxima", "--mode", "closed-form", "--n", "5", "--case", "nope")[0] == 2
    assert run(capsys, "maxima", "--n", "9", "--d", "2")[0] == 2


def test_gates(capsys):
    code, out, _ = run(capsys, "gates")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "gates", "--format", "json")
    assert json.loads(out)["all_pass"] is True
    code, out, _ = run(capsys, "gates", "--corrupt", "Y+ = HZ", "--format", "json")
    obj = json.loads(out)
    assert code == 1
    assert [i["name"] for i in obj["identities"] if not i["pass"]] == ["Y+ = HZ"]


@pytest.mark.skipif(shutil.which("dimwit") is None, reason="console script not installed")
def test_console_script_exit_code():
    proc = subprocess.run(["dimwit", "gates", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["all_pass"]
