import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from haarmat.cli import main
from haarmat.sampler import EnsembleSpec, sample


def run(args, env=None):
    """Run the CLI in a subprocess so that stdout bytes are captured exactly."""
    return subprocess.run(
        [sys.executable, "-m", "haarmat", *args], capture_output=True, env=env, timeout=300
    )


def test_sample_json_contract():
    p = run(["sample", "--ensemble", "cue", "--dim", "3", "--count", "2", "--seed", "5"])
    assert p.returncode == 0
    lines = p.stdout.decode().splitlines()
    assert len(lines) == 2
    doc = json.loads(lines[1])
    assert {"ensemble", "n", "seed", "index", "algorithm", "config", "matrix"} <= doc.keys()
    assert doc["index"] == 1 and doc["n"] == 3 and doc["seed"] == 5
    M = np.array(doc["matrix"])
    U = M[..., 0] + 1j * M[..., 1]
    assert np.array_equal(U, sample(EnsembleSpec("cue", 3, 5), 1))


def test_cse_dim_is_doubled():
    p = run(["sample", "--ensemble", "cse", "--dim", "3", "--seed", "1"])
    assert np.array(json.loads(p.stdout)["matrix"]).shape == (6, 6, 2)


def test_quaternion_csv(tmp_path):
    out = tmp_path / "q.csv"
    assert main(["sample", "--ensemble", "sp_quaternion", "--dim", "2", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["ensemble", "n", "seed", "algorithm", "index", "row", "col", "a", "b", "c", "d"]
    assert len(rows) == 5


def test_complex_csv_header(tmp_path):
    out = tmp_path / "u.csv"
    assert main(["sample", "--ensemble", "orthogonal", "--dim", "2", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[0][-2:] == ["re", "im"] and len(rows) == 5


@pytest.mark.parametrize(
    "args",
    [
        ["sample", "--ensemble", "coe", "--dim", "4", "--count", "3", "--seed", "9"],
        ["sample", "--ensemble", "usp", "--dim", "2", "--format", "csv", "--seed", "9"],
        ["experiment-density", "--ensemble", "cue", "--dim", "6", "--count", "50", "--seed", "9"],
        ["experiment-spacing", "--ensemble", "cse", "--dim", "4", "--count", "50", "--seed", "9"],
        ["verify", "--ensemble", "orthogonal", "--algorithm", "householder", "--dim", "5", "--count", "5"],
    ],
)
def test_reruns_are_byte_identical(args):
    a, b = run(args), run(args)
    assert a.returncode == 0
    assert a.stdout == b.stdout and a.stderr == b.stderr


def test_threads_do_not_change_output():
    base = ["sample", "--ensemble", "cue", "--dim", "4", "--count", "8", "--seed", "2"]
    assert run(base).stdout == run(base + ["--threads", "3"]).stdout


def test_rmgen_seed(monkeypatch):
    import os

    env = dict(os.environ, RMGEN_SEED="17")
    a = run(["sample", "--ensemble", "cue", "--dim", "2"], env=env)
    b = run(["sample", "--ensemble", "cue", "--dim", "2", "--seed", "17"])
    assert a.stdout == b.stdout
    env["RMGEN_SEED"] = "x"
    assert run(["sample", "--ensemble", "cue", "--dim", "2"], env=env).returncode == 64


def test_experiment_sidecar(tmp_path):
    out = tmp_path / "density.csv"
    code = main(["experiment-density", "--ensemble", "cue", "--dim", "10", "--count", "100", "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["bin_left", "bin_right", "count", "density"]
    assert len(rows) == 60
    rep = json.loads((tmp_path / "density.json").read_text())
    assert rep["config"]["ensemble"] == "cue"
    assert rep["report"]["chi_square_dof"] == 59
    assert rep["report"]["n_phases"] == 1000


def test_spacing_json_format(tmp_path):
    out = tmp_path / "s.json"
    code = main(["experiment-spacing", "--ensemble", "coe", "--dim", "8", "--count", "50",
                 "--format", "json", "--out", str(out), "--bins", "20"])
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["histogram"]) == 20 and "surmise" in doc["histogram"][0]
    assert doc["report"]["beta"] == 1


def test_verify_outputs(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--ensemble", "usp", "--dim", "3", "--count", "4", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "symplectic_J" in text and "pass" in text
    doc = json.loads(out.read_text())
    assert doc["pass"] is True and set(doc["max_residuals"]) == {"unitarity", "symplectic_J"}


def test_verify_failure_exit_code(monkeypatch):
    import haarmat.cli as cli

    monkeypatch.setattr(cli, "sample_batch", lambda spec, count, threads=1: [2 * np.eye(2)])
    assert main(["verify", "--ensemble", "cue", "--dim", "2"]) == 1


@pytest.mark.parametrize(
    "args",
    [
        ["sample", "--ensemble", "cue", "--dim", "0"],
        ["sample", "--ensemble", "gue", "--dim", "2"],
        ["sample", "--ensemble", "usp", "--dim", "2", "--algorithm", "householder"],
        ["experiment-density", "--ensemble", "ginibre_real", "--dim", "2"],
        ["experiment-spacing", "--ensemble", "orthogonal", "--dim", "2"],
        ["experiment-spacing", "--ensemble", "cue", "--dim", "1"],
        ["sample"],
    ],
)
def test_usage_errors(args):
    p = run(args)
    assert p.returncode == 64
    assert p.stderr


def test_io_error(tmp_path):
    bad = tmp_path / "missing" / "x.json"
    p = run(["sample", "--ensemble", "cue", "--dim", "2", "--out", str(bad)])
    assert p.returncode == 2
